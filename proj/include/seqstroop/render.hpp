#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seqstroop/stimulus.hpp"

namespace seqstroop {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend constexpr bool operator==(const Point&, const Point&) = default;
};

/// Axis-aligned box in pixel space, half-open on the max side.
struct Box {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    Point center() const noexcept { return {(x0 + x1) / 2.0, (y0 + y1) / 2.0}; }
    bool intersects(const Box& o) const noexcept {
        return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1;
    }
    friend constexpr bool operator==(const Box&, const Box&) = default;
};

struct RenderConfig {
    int canvas_width = 448;
    int canvas_height = 448;
    Rgb background{255, 255, 255};
    double font_size = 48.0;
    std::string font_id{"seqstroop-block5x7"};
    Point word1_anchor{0.25, 0.5};  // fractional; word1 is left (or top)
    Point word2_anchor{0.75, 0.5};
    bool antialias = false;

    /// Default anchors for the arrangement: (0.25,0.5)/(0.75,0.5) or (0.5,0.3)/(0.5,0.7).
    static RenderConfig defaults(Arrangement arrangement);

    /// Throws InvalidInput on anchors outside (0,1)^2, equal anchors, canvas below
    /// 64x64, non-positive font size or an unknown font id.
    void validate() const;

    friend bool operator==(const RenderConfig&, const RenderConfig&) = default;
};

struct WordLayout {
    std::string text;  // uppercase
    Rgb fill;
    Box bbox;
    double unit = 0.0;          // pixels per glyph unit
    std::vector<Box> cells;     // inked glyph cells
};

struct StimulusLayout {
    WordLayout word1;
    WordLayout word2;
};

/// Throws LayoutError when a word's box leaves the canvas.
StimulusLayout layout_stimulus(const StimulusSpec& spec, const RenderConfig& config);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

    Rgb at(int x, int y) const noexcept {
        const auto i = (static_cast<std::size_t>(y) * static_cast<std::size_t>(width) +
                        static_cast<std::size_t>(x)) * 3;
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }
    friend bool operator==(const Image&, const Image&) = default;
};

Image rasterize(const StimulusSpec& spec, const RenderConfig& config);

/// 8-bit RGB, non-interlaced PNG.
std::vector<std::uint8_t> encode_png(const Image& image);

/// Reads 8-bit RGB non-interlaced PNGs (all five row filters). Throws Error otherwise.
Image decode_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> render_stimulus(const StimulusSpec& spec, const RenderConfig& config);

std::string render_svg(const StimulusSpec& spec, const RenderConfig& config);

struct SvgWord {
    std::string id;
    std::string text;
    Rgb fill;
    double x = 0.0;  // left edge
    double y = 0.0;  // baseline
    double font_size = 0.0;
};

/// Recovers the `<text>` elements of a document produced by render_svg.
std::vector<SvgWord> parse_svg_words(std::string_view svg);

/// Box covered by an SvgWord under the bundled font metrics.
Box svg_word_box(const SvgWord& word);

std::string rgb_hex(Rgb c);

}  // namespace seqstroop
