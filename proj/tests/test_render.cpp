#include <doctest.h>

#include <cstdlib>

#include "seqstroop/error.hpp"
#include "seqstroop/font.hpp"
#include "seqstroop/render.hpp"
#include "seqstroop/stimulus.hpp"

using namespace seqstroop;

namespace {

StimulusSpec spec_of(const char* i1, const char* t1, const char* i2, const char* t2,
                     Arrangement arr = Arrangement::LeftRight) {
    return make_spec(arr, {canonical_color(i1), canonical_color(t1)}, {canonical_color(i2), canonical_color(t2)});
}

int channel_gap(Rgb a, Rgb b) {
    return std::max({std::abs(a.r - b.r), std::abs(a.g - b.g), std::abs(a.b - b.b)});
}

// Pixel under the center of every inked cell must carry the word's ink.
void check_cell_centers(const Image& img, const WordLayout& w, int tolerance) {
    REQUIRE_FALSE(w.cells.empty());
    for (const Box& cell : w.cells) {
        const Point c = cell.center();
        const Rgb px = img.at(static_cast<int>(c.x), static_cast<int>(c.y));
        CHECK(channel_gap(px, w.fill) <= tolerance);
    }
}

}  // namespace

TEST_CASE("glyph cells carry the ink color exactly without antialiasing") {
    for (Arrangement arr : {Arrangement::LeftRight, Arrangement::TopBottom}) {
        const auto cfg = RenderConfig::defaults(arr);
        for (const auto& s : enumerate_sequences(canonical_colors(), arr)) {
            if (s.word1.ink.name != "yellow" && s.word1.ink.name != "brown") continue;
            const auto img = rasterize(s, cfg);
            const auto layout = layout_stimulus(s, cfg);
            check_cell_centers(img, layout.word1, 0);
            check_cell_centers(img, layout.word2, 0);
        }
    }
}

TEST_CASE("antialiased cells stay within 8 levels of the ink") {
    auto cfg = RenderConfig::defaults(Arrangement::LeftRight);
    cfg.antialias = true;
    const auto s = spec_of("pink", "green", "brown", "blue");
    const auto img = rasterize(s, cfg);
    const auto layout = layout_stimulus(s, cfg);
    check_cell_centers(img, layout.word1, 8);
    check_cell_centers(img, layout.word2, 8);
}

TEST_CASE("outside the word boxes the canvas is pure background") {
    const auto cfg = RenderConfig::defaults(Arrangement::LeftRight);
    const auto s = spec_of("red", "blue", "green", "yellow");
    const auto img = rasterize(s, cfg);
    const auto layout = layout_stimulus(s, cfg);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const Box px{double(x), double(y), double(x + 1), double(y + 1)};
            if (px.intersects(layout.word1.bbox) || px.intersects(layout.word2.bbox)) continue;
            CHECK(img.at(x, y) == cfg.background);
        }
    }
}

TEST_CASE("only the two inks and background appear without antialiasing") {
    const auto cfg = RenderConfig::defaults(Arrangement::TopBottom);
    const auto s = spec_of("blue", "red", "pink", "brown", Arrangement::TopBottom);
    const auto img = rasterize(s, cfg);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const Rgb p = img.at(x, y);
            CHECK((p == cfg.background || p == s.word1.ink.rgb || p == s.word2.ink.rgb));
        }
    }
}

TEST_CASE("arrangement places word 1 left of or above word 2") {
    const auto lr = layout_stimulus(spec_of("red", "blue", "green", "yellow"),
                                    RenderConfig::defaults(Arrangement::LeftRight));
    CHECK(lr.word1.bbox.x1 <= lr.word2.bbox.x0);
    const auto tb = layout_stimulus(spec_of("red", "blue", "green", "yellow", Arrangement::TopBottom),
                                    RenderConfig::defaults(Arrangement::TopBottom));
    CHECK(tb.word1.bbox.y1 <= tb.word2.bbox.y0);
    CHECK(lr.word1.text == "BLUE");
    CHECK(lr.word2.text == "YELLOW");
}

TEST_CASE("every stimulus lays out inside the canvas with disjoint words") {
    for (Arrangement arr : {Arrangement::LeftRight, Arrangement::TopBottom}) {
        const auto cfg = RenderConfig::defaults(arr);
        for (const auto& s : enumerate_sequences(canonical_colors(), arr)) {
            const auto l = layout_stimulus(s, cfg);
            CHECK_FALSE(l.word1.bbox.intersects(l.word2.bbox));
            for (const auto* w : {&l.word1, &l.word2}) {
                CHECK(w->bbox.x0 >= 0.0);
                CHECK(w->bbox.y0 >= 0.0);
                CHECK(w->bbox.x1 <= cfg.canvas_width);
                CHECK(w->bbox.y1 <= cfg.canvas_height);
            }
        }
    }
}

TEST_CASE("word box is centered on the anchor with a 0.7 em cap height") {
    const auto cfg = RenderConfig::defaults(Arrangement::LeftRight);
    const auto l = layout_stimulus(spec_of("red", "green", "blue", "pink"), cfg);
    const Point c = l.word1.bbox.center();
    CHECK(c.x == doctest::Approx(0.25 * 448));
    CHECK(c.y == doctest::Approx(0.5 * 448));
    CHECK(l.word1.bbox.y1 - l.word1.bbox.y0 == doctest::Approx(0.7 * 48));
    // GREEN: 5 glyphs of 6 units, minus the trailing gap, at 4.8 px per unit.
    CHECK(l.word1.bbox.x1 - l.word1.bbox.x0 == doctest::Approx(29 * 4.8));
}

TEST_CASE("oversized text raises LayoutError") {
    auto cfg = RenderConfig::defaults(Arrangement::LeftRight);
    cfg.font_size = 120.0;
    CHECK_THROWS_AS(layout_stimulus(spec_of("red", "yellow", "blue", "green"), cfg), LayoutError);
    cfg.font_size = 48.0;
    cfg.canvas_width = 64;
    cfg.canvas_height = 64;
    CHECK_THROWS_AS(rasterize(spec_of("red", "yellow", "blue", "green"), cfg), LayoutError);
}

TEST_CASE("invalid render configs are rejected") {
    auto cfg = RenderConfig::defaults(Arrangement::LeftRight);
    cfg.word2_anchor = cfg.word1_anchor;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = RenderConfig::defaults(Arrangement::LeftRight);
    cfg.font_id = "Arial";
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = RenderConfig::defaults(Arrangement::LeftRight);
    cfg.font_size = 0.0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = RenderConfig::defaults(Arrangement::LeftRight);
    cfg.word1_anchor = {1.2, 0.5};
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("rendering is deterministic to the byte") {
    const auto s = spec_of("yellow", "brown", "pink", "green");
    auto cfg = RenderConfig::defaults(Arrangement::LeftRight);
    CHECK(render_stimulus(s, cfg) == render_stimulus(s, cfg));
    cfg.antialias = true;
    CHECK(render_stimulus(s, cfg) == render_stimulus(s, cfg));
}

TEST_CASE("PNG encode/decode round trip") {
    const auto s = spec_of("brown", "red", "blue", "green");
    auto cfg = RenderConfig::defaults(Arrangement::TopBottom);
    cfg.antialias = true;
    const auto img = rasterize(s, cfg);
    const auto png = encode_png(img);
    REQUIRE(png.size() > 8);
    CHECK(png[0] == 0x89);
    CHECK(png[1] == 'P');
    CHECK(decode_png(png) == img);
    auto broken = png;
    broken[0] = 0;
    CHECK_THROWS_AS(decode_png(broken), Error);
    CHECK_THROWS_AS(decode_png(std::span(png).first(40)), Error);
}

TEST_CASE("SVG words parse back to the raster layout") {
    for (Arrangement arr : {Arrangement::LeftRight, Arrangement::TopBottom}) {
        const auto cfg = RenderConfig::defaults(arr);
        for (const auto& s : enumerate_sequences(canonical_colors(), arr)) {
            if (s.word1.text.name != "yellow") continue;
            const auto svg = render_svg(s, cfg);
            const auto words = parse_svg_words(svg);
            REQUIRE(words.size() == 2);
            const auto l = layout_stimulus(s, cfg);
            CHECK(words[0].text == l.word1.text);
            CHECK(words[1].text == l.word2.text);
            CHECK(words[0].fill == s.word1.ink.rgb);
            CHECK(words[1].fill == s.word2.ink.rgb);
            const Box b1 = svg_word_box(words[0]);
            const Box b2 = svg_word_box(words[1]);
            CHECK(b1.x0 == doctest::Approx(l.word1.bbox.x0).epsilon(1e-4));
            CHECK(b1.y1 == doctest::Approx(l.word1.bbox.y1).epsilon(1e-4));
            CHECK(b2.x1 == doctest::Approx(l.word2.bbox.x1).epsilon(1e-4));
            CHECK_FALSE(b1.intersects(b2));
        }
    }
}

TEST_CASE("bundled font is pinned") {
    CHECK(font::checksum() == font::kPinnedChecksum);
    for (char c = 'A'; c <= 'Z'; ++c) CHECK(font::glyph(c).has_value());
    CHECK_FALSE(font::glyph('a').has_value());
    CHECK(font::text_width_units("RED") == 17);
    CHECK(rgb_hex({255, 105, 180}) == "#ff69b4");
}
