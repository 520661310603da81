#include "seqstroop/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <regex>

#include "seqstroop/error.hpp"
#include "seqstroop/font.hpp"

namespace seqstroop {

RenderConfig RenderConfig::defaults(Arrangement arrangement) {
    RenderConfig c;
    if (arrangement == Arrangement::TopBottom) {
        c.word1_anchor = {0.5, 0.3};
        c.word2_anchor = {0.5, 0.7};
    }
    return c;
}

void RenderConfig::validate() const {
    if (canvas_width < 64 || canvas_height < 64) {
        throw InvalidInput("canvas must be at least 64x64");
    }
    auto inside = [](Point p) { return p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0; };
    if (!inside(word1_anchor) || !inside(word2_anchor)) {
        throw InvalidInput("anchors must lie strictly inside (0,1)x(0,1)");
    }
    if (word1_anchor == word2_anchor) throw InvalidInput("word anchors must differ");
    if (!(font_size > 0.0) || !std::isfinite(font_size)) {
        throw InvalidInput("font_size must be positive");
    }
    if (font_id != font::kFontId) {
        throw InvalidInput("unknown font '" + font_id + "'; bundled font is " +
                           std::string(font::kFontId));
    }
}

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

WordLayout layout_word(const WordStimulus& word, Point anchor, const RenderConfig& config) {
    WordLayout w;
    w.text = upper(word.text.name);
    w.fill = word.ink.rgb;
    w.unit = config.font_size / font::kUnitsPerEm;

    const double width = font::text_width_units(w.text) * w.unit;
    const double height = font::kGlyphRows * w.unit;
    const double cx = anchor.x * config.canvas_width;
    const double cy = anchor.y * config.canvas_height;
    w.bbox = {cx - width / 2.0, cy - height / 2.0, cx + width / 2.0, cy + height / 2.0};

    if (w.bbox.x0 < 0.0 || w.bbox.y0 < 0.0 || w.bbox.x1 > config.canvas_width ||
        w.bbox.y1 > config.canvas_height) {
        throw LayoutError("word '" + w.text + "' does not fit the " +
                          std::to_string(config.canvas_width) + "x" +
                          std::to_string(config.canvas_height) + " canvas at font size " +
                          std::to_string(config.font_size));
    }

    for (std::size_t i = 0; i < w.text.size(); ++i) {
        const auto g = font::glyph(w.text[i]);
        if (!g) throw LayoutError("no glyph for character '" + std::string(1, w.text[i]) + "'");
        const double gx = w.bbox.x0 + static_cast<double>(i * font::kAdvance) * w.unit;
        for (int row = 0; row < font::kGlyphRows; ++row) {
            for (int col = 0; col < font::kGlyphCols; ++col) {
                if (((*g)[static_cast<std::size_t>(row)] >> (font::kGlyphCols - 1 - col)) & 1U) {
                    w.cells.push_back({gx + col * w.unit, w.bbox.y0 + row * w.unit,
                                       gx + (col + 1) * w.unit, w.bbox.y0 + (row + 1) * w.unit});
                }
            }
        }
    }
    return w;
}

void paint_word(Image& img, const WordLayout& word, bool antialias) {
    const int samples = antialias ? 4 : 1;
    const int full = samples * samples;

    const int px0 = std::max(0, static_cast<int>(std::floor(word.bbox.x0)));
    const int py0 = std::max(0, static_cast<int>(std::floor(word.bbox.y0)));
    const int px1 = std::min(img.width, static_cast<int>(std::ceil(word.bbox.x1)));
    const int py1 = std::min(img.height, static_cast<int>(std::ceil(word.bbox.y1)));
    if (px1 <= px0 || py1 <= py0) return;
    const int bw = px1 - px0;
    std::vector<int> coverage(static_cast<std::size_t>(bw) * static_cast<std::size_t>(py1 - py0), 0);

    for (const Box& cell : word.cells) {
        const int cx0 = std::max(px0, static_cast<int>(std::floor(cell.x0)));
        const int cy0 = std::max(py0, static_cast<int>(std::floor(cell.y0)));
        const int cx1 = std::min(px1, static_cast<int>(std::ceil(cell.x1)));
        const int cy1 = std::min(py1, static_cast<int>(std::ceil(cell.y1)));
        for (int y = cy0; y < cy1; ++y) {
            for (int x = cx0; x < cx1; ++x) {
                int hits = 0;
                for (int sy = 0; sy < samples; ++sy) {
                    const double py = y + (sy + 0.5) / samples;
                    if (py < cell.y0 || py >= cell.y1) continue;
                    for (int sx = 0; sx < samples; ++sx) {
                        const double px = x + (sx + 0.5) / samples;
                        if (px >= cell.x0 && px < cell.x1) ++hits;
                    }
                }
                coverage[static_cast<std::size_t>(y - py0) * static_cast<std::size_t>(bw) +
                         static_cast<std::size_t>(x - px0)] += hits;
            }
        }
    }

    const std::uint8_t ink[3]{word.fill.r, word.fill.g, word.fill.b};
    for (int y = py0; y < py1; ++y) {
        for (int x = px0; x < px1; ++x) {
            const int k = std::min(full, coverage[static_cast<std::size_t>(y - py0) *
                                                      static_cast<std::size_t>(bw) +
                                                  static_cast<std::size_t>(x - px0)]);
            if (k == 0) continue;
            auto* p = &img.rgb[(static_cast<std::size_t>(y) * static_cast<std::size_t>(img.width) +
                                static_cast<std::size_t>(x)) * 3];
            for (int ch = 0; ch < 3; ++ch) {
                p[ch] = static_cast<std::uint8_t>((p[ch] * (full - k) + ink[ch] * k + full / 2) / full);
            }
        }
    }
}

}  // namespace

StimulusLayout layout_stimulus(const StimulusSpec& spec, const RenderConfig& config) {
    config.validate();
    return {layout_word(spec.word1, config.word1_anchor, config),
            layout_word(spec.word2, config.word2_anchor, config)};
}

Image rasterize(const StimulusSpec& spec, const RenderConfig& config) {
    const auto layout = layout_stimulus(spec, config);
    Image img;
    img.width = config.canvas_width;
    img.height = config.canvas_height;
    img.rgb.resize(static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height) * 3);
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        img.rgb[i] = config.background.r;
        img.rgb[i + 1] = config.background.g;
        img.rgb[i + 2] = config.background.b;
    }
    paint_word(img, layout.word1, config.antialias);
    paint_word(img, layout.word2, config.antialias);
    return img;
}

std::vector<std::uint8_t> render_stimulus(const StimulusSpec& spec, const RenderConfig& config) {
    return encode_png(rasterize(spec, config));
}

std::string rgb_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

namespace {

std::string fixed3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

std::string render_svg(const StimulusSpec& spec, const RenderConfig& config) {
    const auto layout = layout_stimulus(spec, config);
    const std::string w = std::to_string(config.canvas_width);
    const std::string h = std::to_string(config.canvas_height);
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + w +
           "\" height=\"" + h + "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
    out += "  <rect x=\"0\" y=\"0\" width=\"" + w + "\" height=\"" + h + "\" fill=\"" +
           rgb_hex(config.background) + "\"/>\n";
    const WordLayout* words[2]{&layout.word1, &layout.word2};
    for (int i = 0; i < 2; ++i) {
        const auto& word = *words[i];
        out += "  <text id=\"word" + std::to_string(i + 1) + "\" x=\"" + fixed3(word.bbox.x0) +
               "\" y=\"" + fixed3(word.bbox.y1) + "\" font-family=\"" + config.font_id +
               "\" font-size=\"" + fixed3(config.font_size) + "\" fill=\"" + rgb_hex(word.fill) +
               "\">" + word.text + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

std::vector<SvgWord> parse_svg_words(std::string_view svg) {
    static const std::regex text_re(R"(<text\b([^>]*)>([^<]*)</text>)");
    static const std::regex attr_re(R"re(([a-zA-Z-]+)="([^"]*)")re");
    std::vector<SvgWord> out;
    const std::string doc(svg);
    for (auto it = std::sregex_iterator(doc.begin(), doc.end(), text_re);
         it != std::sregex_iterator(); ++it) {
        SvgWord word;
        word.text = (*it)[2].str();
        const std::string attrs = (*it)[1].str();
        for (auto a = std::sregex_iterator(attrs.begin(), attrs.end(), attr_re);
             a != std::sregex_iterator(); ++a) {
            const std::string key = (*a)[1].str();
            const std::string value = (*a)[2].str();
            if (key == "id") {
                word.id = value;
            } else if (key == "x") {
                word.x = std::stod(value);
            } else if (key == "y") {
                word.y = std::stod(value);
            } else if (key == "font-size") {
                word.font_size = std::stod(value);
            } else if (key == "fill") {
                unsigned r = 0, g = 0, b = 0;
                if (std::sscanf(value.c_str(), "#%02x%02x%02x", &r, &g, &b) != 3) {
                    throw Error("bad fill '" + value + "' in svg");
                }
                word.fill = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                             static_cast<std::uint8_t>(b)};
            }
        }
        out.push_back(std::move(word));
    }
    return out;
}

Box svg_word_box(const SvgWord& word) {
    const double unit = word.font_size / font::kUnitsPerEm;
    return {word.x, word.y - font::kGlyphRows * unit,
            word.x + font::text_width_units(word.text) * unit, word.y};
}

}  // namespace seqstroop
