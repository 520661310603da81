#include "seqstroop/stimulus.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_set>

#include "seqstroop/error.hpp"

namespace seqstroop {

const std::vector<ColorTerm>& canonical_colors() {
    static const std::vector<ColorTerm> colors{
        {"red", {255, 0, 0}},      {"blue", {0, 0, 255}},     {"green", {0, 128, 0}},
        {"yellow", {255, 200, 0}}, {"pink", {255, 105, 180}}, {"brown", {139, 69, 19}},
    };
    return colors;
}

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::size_t canonical_index(std::string_view name) {
    const auto& colors = canonical_colors();
    for (std::size_t i = 0; i < colors.size(); ++i) {
        if (colors[i].name == name) return i;
    }
    return colors.size();
}

}  // namespace

std::optional<ColorTerm> find_canonical_color(std::string_view name) {
    const std::string key = lowercase(name);
    for (const auto& c : canonical_colors()) {
        if (c.name == key) return c;
    }
    return std::nullopt;
}

ColorTerm canonical_color(std::string_view name) {
    if (auto c = find_canonical_color(name)) return *c;
    throw InvalidInput("unknown color '" + std::string(name) + "'");
}

std::vector<ColorTerm> parse_colorset(std::string_view csv) {
    std::vector<ColorTerm> out;
    while (!csv.empty()) {
        const auto comma = csv.find(',');
        const auto item = trim(csv.substr(0, comma));
        if (!item.empty()) out.push_back(canonical_color(item));
        if (comma == std::string_view::npos) break;
        csv.remove_prefix(comma + 1);
    }
    validate_colorset(out);
    std::stable_sort(out.begin(), out.end(), [](const ColorTerm& a, const ColorTerm& b) {
        return canonical_index(a.name) < canonical_index(b.name);
    });
    return out;
}

void validate_colorset(std::span<const ColorTerm> colorset) {
    if (colorset.empty()) throw InvalidInput("colorset must not be empty");
    std::unordered_set<std::string> seen;
    for (const auto& c : colorset) {
        if (c.name.empty()) throw InvalidInput("color name must not be empty");
        for (unsigned char ch : c.name) {
            if (ch > 0x7f || std::isupper(ch) || std::isspace(ch)) {
                throw InvalidInput("color name '" + c.name + "' must be lowercase ASCII");
            }
        }
        if (!seen.insert(c.name).second) {
            throw InvalidInput("duplicate color '" + c.name + "' in colorset");
        }
    }
}

std::string_view to_string(Condition c) noexcept {
    switch (c) {
        case Condition::CC: return "CC";
        case Condition::CI: return "CI";
        case Condition::IC: return "IC";
        case Condition::II: return "II";
    }
    return "??";
}

std::optional<Condition> parse_condition(std::string_view label) noexcept {
    for (Condition c : kAllConditions) {
        if (to_string(c) == label) return c;
    }
    return std::nullopt;
}

std::string_view to_string(Arrangement a) noexcept {
    return a == Arrangement::LeftRight ? "left-right" : "top-bottom";
}

std::optional<Arrangement> parse_arrangement(std::string_view s) noexcept {
    if (s == "left-right") return Arrangement::LeftRight;
    if (s == "top-bottom") return Arrangement::TopBottom;
    return std::nullopt;
}

Condition classify_condition(const WordStimulus& word1, const WordStimulus& word2) noexcept {
    const bool c1 = word1.congruent();
    const bool c2 = word2.congruent();
    if (c1) return c2 ? Condition::CC : Condition::CI;
    return c2 ? Condition::IC : Condition::II;
}

bool disjoint(const WordStimulus& word1, const WordStimulus& word2) noexcept {
    const std::string_view a[2]{word1.ink.name, word1.text.name};
    const std::string_view b[2]{word2.ink.name, word2.text.name};
    for (auto x : a) {
        for (auto y : b) {
            if (x == y) return false;
        }
    }
    return true;
}

std::string make_spec_id(Arrangement arrangement, const WordStimulus& word1,
                         const WordStimulus& word2) {
    std::string id(to_string(arrangement));
    for (const auto* part : {&word1.ink, &word1.text, &word2.ink, &word2.text}) {
        id += '-';
        id += part->name;
    }
    return id;
}

StimulusSpec make_spec(Arrangement arrangement, WordStimulus word1, WordStimulus word2) {
    if (!disjoint(word1, word2)) {
        throw InvalidInput("words share a color: " + make_spec_id(arrangement, word1, word2));
    }
    StimulusSpec spec;
    spec.id = make_spec_id(arrangement, word1, word2);
    spec.arrangement = arrangement;
    spec.condition = classify_condition(word1, word2);
    spec.word1 = std::move(word1);
    spec.word2 = std::move(word2);
    return spec;
}

std::vector<StimulusSpec> enumerate_sequences(std::span<const ColorTerm> colorset,
                                              Arrangement arrangement) {
    validate_colorset(colorset);
    const std::uint64_t n = colorset.size();
    std::vector<StimulusSpec> out;
    out.reserve(condition_counts(n).total());
    for (const auto& ink1 : colorset) {
        for (const auto& text1 : colorset) {
            const WordStimulus w1{ink1, text1};
            for (const auto& ink2 : colorset) {
                if (ink2.name == ink1.name || ink2.name == text1.name) continue;
                for (const auto& text2 : colorset) {
                    if (text2.name == ink1.name || text2.name == text1.name) continue;
                    out.push_back(make_spec(arrangement, w1, WordStimulus{ink2, text2}));
                }
            }
        }
    }
    return out;
}

std::uint64_t ConditionCounts::operator[](Condition c) const noexcept {
    switch (c) {
        case Condition::CC: return cc;
        case Condition::CI: return ci;
        case Condition::IC: return ic;
        case Condition::II: return ii;
    }
    return 0;
}

ConditionCounts condition_counts(std::uint64_t n) noexcept {
    // Falling factorials; each factor clamps at zero once n is exhausted.
    auto falling = [n](std::uint64_t k) {
        std::uint64_t v = 1;
        for (std::uint64_t i = 0; i < k; ++i) v *= (n > i ? n - i : 0);
        return v;
    };
    return ConditionCounts{falling(2), falling(3), falling(3), falling(4)};
}

ConditionCounts tally(std::span<const StimulusSpec> specs) noexcept {
    ConditionCounts counts;
    for (const auto& s : specs) {
        switch (s.condition) {
            case Condition::CC: ++counts.cc; break;
            case Condition::CI: ++counts.ci; break;
            case Condition::IC: ++counts.ic; break;
            case Condition::II: ++counts.ii; break;
        }
    }
    return counts;
}

}  // namespace seqstroop
