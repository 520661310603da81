#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace seqstroop::font {

// Block capitals on a 5x7 grid. One glyph unit is a tenth of the em, so the
// cap height is 0.7 em; advance is 6 units (5 ink columns + 1 gap).
inline constexpr std::string_view kFontId = "seqstroop-block5x7";
inline constexpr int kGlyphCols = 5;
inline constexpr int kGlyphRows = 7;
inline constexpr int kAdvance = 6;
inline constexpr double kUnitsPerEm = 10.0;

/// Row bitmaps, top row first; bit 4 is the leftmost column.
using Glyph = std::array<std::uint8_t, kGlyphRows>;

/// Glyph for an uppercase ASCII letter, nullopt for anything else.
std::optional<Glyph> glyph(char c) noexcept;

/// FNV-1a over the font id and every glyph row of A-Z.
std::uint64_t checksum() noexcept;

inline constexpr std::uint64_t kPinnedChecksum = 0x03f63d11c58ac5acULL;

/// Width of `text` in glyph units (no trailing gap).
inline int text_width_units(std::string_view text) noexcept {
    return text.empty() ? 0 : static_cast<int>(text.size()) * kAdvance - (kAdvance - kGlyphCols);
}

}  // namespace seqstroop::font
