#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace seqstroop {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend constexpr bool operator==(const Rgb&, const Rgb&) = default;
};

struct ColorTerm {
    std::string name;  // lowercase ASCII
    Rgb rgb;

    friend bool operator==(const ColorTerm&, const ColorTerm&) = default;
};

/// red, blue, green, yellow, pink, brown, in that order.
const std::vector<ColorTerm>& canonical_colors();

std::optional<ColorTerm> find_canonical_color(std::string_view name);

/// Throws InvalidInput when `name` is not a canonical color (case-insensitive).
ColorTerm canonical_color(std::string_view name);

/// Parses "red,blue,green" into canonical terms, re-ordered to canonical order.
std::vector<ColorTerm> parse_colorset(std::string_view csv);

/// Throws InvalidInput on empty, non-lowercase or duplicate names.
void validate_colorset(std::span<const ColorTerm> colorset);

struct WordStimulus {
    ColorTerm ink;   // font color
    ColorTerm text;  // word identity

    bool congruent() const noexcept { return ink.name == text.name; }

    friend bool operator==(const WordStimulus&, const WordStimulus&) = default;
};

enum class Condition : std::uint8_t { CC, CI, IC, II };

inline constexpr std::array<Condition, 4> kAllConditions{Condition::CC, Condition::CI,
                                                         Condition::IC, Condition::II};

std::string_view to_string(Condition c) noexcept;
std::optional<Condition> parse_condition(std::string_view label) noexcept;

enum class Arrangement : std::uint8_t { LeftRight, TopBottom };

std::string_view to_string(Arrangement a) noexcept;
std::optional<Arrangement> parse_arrangement(std::string_view s) noexcept;

struct StimulusSpec {
    std::string id;
    Arrangement arrangement = Arrangement::LeftRight;
    WordStimulus word1;
    WordStimulus word2;
    Condition condition = Condition::CC;

    friend bool operator==(const StimulusSpec&, const StimulusSpec&) = default;
};

Condition classify_condition(const WordStimulus& word1, const WordStimulus& word2) noexcept;

/// {ink1, text1} and {ink2, text2} share no color.
bool disjoint(const WordStimulus& word1, const WordStimulus& word2) noexcept;

/// `<axis>-<ink1>-<text1>-<ink2>-<text2>`
std::string make_spec_id(Arrangement arrangement, const WordStimulus& word1,
                         const WordStimulus& word2);

/// Builds a spec with derived id and condition. Throws InvalidInput if the words
/// share a color.
StimulusSpec make_spec(Arrangement arrangement, WordStimulus word1, WordStimulus word2);

/// All disjoint (word1, word2) pairs, lexicographic by (ink1, text1, ink2, text2)
/// in colorset order.
std::vector<StimulusSpec> enumerate_sequences(std::span<const ColorTerm> colorset,
                                              Arrangement arrangement);

struct ConditionCounts {
    std::uint64_t cc = 0;
    std::uint64_t ci = 0;
    std::uint64_t ic = 0;
    std::uint64_t ii = 0;

    std::uint64_t total() const noexcept { return cc + ci + ic + ii; }
    std::uint64_t operator[](Condition c) const noexcept;

    friend bool operator==(const ConditionCounts&, const ConditionCounts&) = default;
};

/// Closed form: CC = n(n-1), CI = IC = n(n-1)(n-2), II = n(n-1)(n-2)(n-3).
ConditionCounts condition_counts(std::uint64_t n) noexcept;

ConditionCounts tally(std::span<const StimulusSpec> specs) noexcept;

}  // namespace seqstroop
