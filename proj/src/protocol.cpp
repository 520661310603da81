#include "seqstroop/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace seqstroop {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Files

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    write_binary_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// ---------------------------------------------------------------------------
// Prompts

namespace {

constexpr std::string_view kQuestion = "What are the ink colors of the two words?";

}  // namespace

PromptPair build_prompts(Arrangement arrangement, bool system_supported) {
    const bool lr = arrangement == Arrangement::LeftRight;
    const std::string span = lr ? "left to right" : "top to bottom";
    const std::string first = lr ? "left" : "top";
    const std::string second = lr ? "right" : "bottom";
    const std::string answer_format = "Answer in exactly two words: first the " + first +
                                      " ink color, then the " + second + " ink color.";
    PromptPair p;
    if (system_supported) {
        p.system = "You are a participant in a cognitive task. You will see an image with two words "
                   "positioned from " + span + ". Your task is to name the color of the ink each "
                   "word is printed in. Do not read what the words say. Only report the actual ink "
                   "colors. " + answer_format;
        p.user = std::string(kQuestion);
    } else {
        p.user = "Name the ink color of each word. Do not read what the words say. " +
                 answer_format + " " + std::string(kQuestion);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Manifest

const ManifestTrial* Manifest::find(std::string_view trial_id) const {
    for (const auto& t : trials) {
        if (t.spec.id == trial_id) return &t;
    }
    return nullptr;
}

ManifestTrial make_trial(StimulusSpec spec, const PromptPair& prompts, std::string_view image_dir) {
    ManifestTrial t;
    t.image = (std::filesystem::path(image_dir) / (spec.id + ".png")).generic_string();
    t.prompts = prompts;
    t.expected_first = spec.word1.ink;
    t.expected_second = spec.word2.ink;
    t.spec = std::move(spec);
    return t;
}

void validate_manifest(const Manifest& m) {
    if (m.experiment_id.empty()) throw ValidationError("experiment_id", "", "must not be empty");
    try {
        validate_colorset(m.colorset);
        m.render_config.validate();
    } catch (const InvalidInput& e) {
        throw ValidationError("colorset/render_config", "", e.what());
    }
    std::unordered_set<std::string> ids;
    for (const auto& t : m.trials) {
        const auto& s = t.spec;
        if (!ids.insert(s.id).second) throw ValidationError("id", s.id, "duplicate trial id");
        if (s.arrangement != m.arrangement) {
            throw ValidationError("arrangement", s.id, "trial arrangement differs from manifest");
        }
        if (!disjoint(s.word1, s.word2)) {
            throw ValidationError("word2", s.id, "words share a color");
        }
        if (s.id != make_spec_id(s.arrangement, s.word1, s.word2)) {
            throw ValidationError("id", s.id, "id does not match the trial's words");
        }
        if (s.condition != classify_condition(s.word1, s.word2)) {
            throw ValidationError("condition", s.id, "condition label inconsistent with words");
        }
        if (t.expected_first != s.word1.ink) {
            throw ValidationError("expected_first", s.id, "must equal word1 ink");
        }
        if (t.expected_second != s.word2.ink) {
            throw ValidationError("expected_second", s.id, "must equal word2 ink");
        }
        if (t.image.empty()) throw ValidationError("image", s.id, "must not be empty");
    }
}

namespace {

ojson rgb_json(Rgb c) { return ojson::array({c.r, c.g, c.b}); }

ojson config_json(const RenderConfig& c) {
    ojson j;
    j["canvas_width"] = c.canvas_width;
    j["canvas_height"] = c.canvas_height;
    j["background"] = rgb_json(c.background);
    j["font_size"] = c.font_size;
    j["font_id"] = c.font_id;
    j["word1_anchor"] = ojson::array({c.word1_anchor.x, c.word1_anchor.y});
    j["word2_anchor"] = ojson::array({c.word2_anchor.x, c.word2_anchor.y});
    j["antialias"] = c.antialias;
    return j;
}

// Typed field access that reports the field path and trial on failure.
class Reader {
public:
    Reader(const ojson& obj, std::string path, std::string trial = {})
        : obj_(obj), path_(std::move(path)), trial_(std::move(trial)) {
        if (!obj_.is_object()) fail("", "expected an object");
    }

    [[noreturn]] void fail(std::string_view field, const std::string& msg) const {
        throw ValidationError(join(field), trial_, msg);
    }

    const ojson& at(std::string_view field) const {
        auto it = obj_.find(std::string(field));
        if (it == obj_.end()) fail(field, "missing field");
        return *it;
    }
    bool has(std::string_view field) const {
        auto it = obj_.find(std::string(field));
        return it != obj_.end() && !it->is_null();
    }
    std::string str(std::string_view field) const {
        const auto& v = at(field);
        if (!v.is_string()) fail(field, "expected a string");
        return v.get<std::string>();
    }
    double num(std::string_view field) const {
        const auto& v = at(field);
        if (!v.is_number()) fail(field, "expected a number");
        return v.get<double>();
    }
    std::int64_t integer(std::string_view field) const {
        const auto& v = at(field);
        if (!v.is_number_integer()) fail(field, "expected an integer");
        return v.get<std::int64_t>();
    }
    bool boolean(std::string_view field) const {
        const auto& v = at(field);
        if (!v.is_boolean()) fail(field, "expected a boolean");
        return v.get<bool>();
    }
    const ojson& array(std::string_view field) const {
        const auto& v = at(field);
        if (!v.is_array()) fail(field, "expected an array");
        return v;
    }
    Reader child(std::string_view field) const { return Reader(at(field), join(field), trial_); }
    const std::string& trial() const { return trial_; }
    std::string join(std::string_view field) const {
        if (field.empty()) return path_;
        return path_.empty() ? std::string(field) : path_ + "." + std::string(field);
    }

private:
    const ojson& obj_;
    std::string path_;
    std::string trial_;
};

Rgb parse_rgb(const Reader& r, std::string_view field) {
    const auto& a = r.array(field);
    if (a.size() != 3) r.fail(field, "expected [r, g, b]");
    Rgb c;
    std::uint8_t* ch[3]{&c.r, &c.g, &c.b};
    for (std::size_t i = 0; i < 3; ++i) {
        if (!a[i].is_number_integer() || a[i].get<int>() < 0 || a[i].get<int>() > 255) {
            r.fail(field, "channel out of range 0..255");
        }
        *ch[i] = static_cast<std::uint8_t>(a[i].get<int>());
    }
    return c;
}

Point parse_point(const Reader& r, std::string_view field) {
    const auto& a = r.array(field);
    if (a.size() != 2 || !a[0].is_number() || !a[1].is_number()) r.fail(field, "expected [x, y]");
    return {a[0].get<double>(), a[1].get<double>()};
}

RenderConfig parse_config(const Reader& r) {
    RenderConfig c;
    c.canvas_width = static_cast<int>(r.integer("canvas_width"));
    c.canvas_height = static_cast<int>(r.integer("canvas_height"));
    c.background = parse_rgb(r, "background");
    c.font_size = r.num("font_size");
    c.font_id = r.str("font_id");
    c.word1_anchor = parse_point(r, "word1_anchor");
    c.word2_anchor = parse_point(r, "word2_anchor");
    c.antialias = r.boolean("antialias");
    return c;
}

ColorTerm lookup_color(const Reader& r, std::string_view field,
                       const std::unordered_map<std::string, ColorTerm>& colors) {
    const std::string name = r.str(field);
    auto it = colors.find(name);
    if (it == colors.end()) r.fail(field, "color '" + name + "' not in colorset");
    return it->second;
}

WordStimulus parse_word(const Reader& r, const std::unordered_map<std::string, ColorTerm>& colors) {
    return {lookup_color(r, "ink", colors), lookup_color(r, "text", colors)};
}

}  // namespace

std::string manifest_to_json(const Manifest& m) {
    validate_manifest(m);
    ojson j;
    j["schema_version"] = kManifestSchemaVersion;
    j["experiment_id"] = m.experiment_id;
    j["arrangement"] = std::string(to_string(m.arrangement));
    ojson colors = ojson::array();
    for (const auto& c : m.colorset) colors.push_back({{"name", c.name}, {"rgb", rgb_json(c.rgb)}});
    j["colorset"] = std::move(colors);
    j["render_config"] = config_json(m.render_config);
    ojson trials = ojson::array();
    for (const auto& t : m.trials) {
        ojson tj;
        tj["id"] = t.spec.id;
        tj["condition"] = std::string(to_string(t.spec.condition));
        tj["word1"] = {{"ink", t.spec.word1.ink.name}, {"text", t.spec.word1.text.name}};
        tj["word2"] = {{"ink", t.spec.word2.ink.name}, {"text", t.spec.word2.text.name}};
        tj["image"] = t.image;
        ojson prompts;
        prompts["system"] = t.prompts.system ? ojson(*t.prompts.system) : ojson(nullptr);
        prompts["user"] = t.prompts.user;
        tj["prompts"] = std::move(prompts);
        tj["expected_first"] = t.expected_first.name;
        tj["expected_second"] = t.expected_second.name;
        trials.push_back(std::move(tj));
    }
    j["trials"] = std::move(trials);
    return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text) {
    ojson doc;
    try {
        doc = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("", "", std::string("malformed JSON: ") + e.what());
    }
    const Reader root(doc, "");
    if (root.integer("schema_version") != kManifestSchemaVersion) {
        root.fail("schema_version", "unsupported schema version");
    }
    Manifest m;
    m.experiment_id = root.str("experiment_id");
    const auto arrangement = parse_arrangement(root.str("arrangement"));
    if (!arrangement) root.fail("arrangement", "expected left-right or top-bottom");
    m.arrangement = *arrangement;

    std::unordered_map<std::string, ColorTerm> colors;
    const auto& cs = root.array("colorset");
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const Reader cr(cs[i], "colorset[" + std::to_string(i) + "]");
        ColorTerm c{cr.str("name"), parse_rgb(cr, "rgb")};
        if (colors.count(c.name) != 0) cr.fail("name", "duplicate color '" + c.name + "'");
        colors.emplace(c.name, c);
        m.colorset.push_back(std::move(c));
    }
    m.render_config = parse_config(root.child("render_config"));

    std::unordered_set<std::string> ids;
    const auto& trials = root.array("trials");
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const std::string path = "trials[" + std::to_string(i) + "]";
        std::string trial_id;
        if (trials[i].is_object() && trials[i].contains("id") && trials[i]["id"].is_string()) {
            trial_id = trials[i]["id"].get<std::string>();
        }
        const Reader tr(trials[i], path, trial_id);
        ManifestTrial t;
        t.spec.id = tr.str("id");
        if (!ids.insert(t.spec.id).second) tr.fail("id", "duplicate trial id '" + t.spec.id + "'");
        t.spec.arrangement = m.arrangement;
        const std::string label = tr.str("condition");
        const auto cond = parse_condition(label);
        if (!cond) tr.fail("condition", "unknown condition label '" + label + "'");
        t.spec.condition = *cond;
        t.spec.word1 = parse_word(tr.child("word1"), colors);
        t.spec.word2 = parse_word(tr.child("word2"), colors);
        t.image = tr.str("image");
        const Reader pr = tr.child("prompts");
        if (!pr.at("system").is_null()) t.prompts.system = pr.str("system");
        t.prompts.user = pr.str("user");
        t.expected_first = lookup_color(tr, "expected_first", colors);
        t.expected_second = lookup_color(tr, "expected_second", colors);
        m.trials.push_back(std::move(t));
    }
    validate_manifest(m);
    return m;
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
    write_text_file(path, manifest_to_json(manifest));
}

Manifest read_manifest(const std::filesystem::path& path) {
    return manifest_from_json(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Records

namespace {

void require_finite(double v, std::string_view field, const std::string& trial) {
    if (!std::isfinite(v)) throw ValidationError(std::string(field), trial, "must be finite");
}

}  // namespace

std::string record_to_json_line(const TrialRecord& r) {
    require_finite(r.logprob_second_correct, "logprob_second_correct", r.trial_id);
    ojson j;
    j["trial_id"] = r.trial_id;
    j["model_id"] = r.model_id;
    j["answer_text"] = r.answer_text;
    j["logprob_second_correct"] = r.logprob_second_correct;
    if (r.logprob_first_correct) {
        require_finite(*r.logprob_first_correct, "logprob_first_correct", r.trial_id);
        j["logprob_first_correct"] = *r.logprob_first_correct;
    }
    if (r.topk_second) {
        ojson top = ojson::array();
        for (const auto& t : *r.topk_second) {
            require_finite(t.logprob, "topk_second", r.trial_id);
            top.push_back(ojson::array({t.token, t.logprob}));
        }
        j["topk_second"] = std::move(top);
    }
    if (r.ablation_id) j["ablation_id"] = *r.ablation_id;
    return j.dump();
}

TrialRecord record_from_json_line(std::string_view line) {
    ojson doc;
    try {
        doc = ojson::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("", "", std::string("malformed JSON record: ") + e.what());
    }
    std::string trial_id;
    if (doc.is_object() && doc.contains("trial_id") && doc["trial_id"].is_string()) {
        trial_id = doc["trial_id"].get<std::string>();
    }
    const Reader r(doc, "", trial_id);
    TrialRecord rec;
    rec.trial_id = r.str("trial_id");
    rec.model_id = r.str("model_id");
    rec.answer_text = r.str("answer_text");
    rec.logprob_second_correct = r.num("logprob_second_correct");
    if (r.has("logprob_first_correct")) rec.logprob_first_correct = r.num("logprob_first_correct");
    if (r.has("topk_second")) {
        std::vector<TopToken> top;
        for (const auto& item : r.array("topk_second")) {
            if (!item.is_array() || item.size() != 2 || !item[0].is_string() || !item[1].is_number()) {
                r.fail("topk_second", "expected [token, logprob] pairs");
            }
            top.push_back({item[0].get<std::string>(), item[1].get<double>()});
        }
        rec.topk_second = std::move(top);
    }
    if (r.has("ablation_id")) rec.ablation_id = r.str("ablation_id");
    return rec;
}

std::string records_to_jsonl(std::span<const TrialRecord> records) {
    std::string out;
    for (const auto& r : records) {
        out += record_to_json_line(r);
        out += '\n';
    }
    return out;
}

std::vector<TrialRecord> records_from_jsonl(std::string_view text) {
    std::vector<TrialRecord> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
        try {
            out.push_back(record_from_json_line(line));
        } catch (const ValidationError& e) {
            throw ValidationError(e.field(), e.trial_id(),
                                  "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_records(std::span<const TrialRecord> records, const std::filesystem::path& path) {
    write_text_file(path, records_to_jsonl(records));
}

std::vector<TrialRecord> read_records(const std::filesystem::path& path) {
    return records_from_jsonl(read_text_file(path));
}

// ---------------------------------------------------------------------------
// SSAF

std::string_view to_string(ActivationFormatErrorKind kind) noexcept {
    switch (kind) {
        case ActivationFormatErrorKind::BadMagic: return "bad-magic";
        case ActivationFormatErrorKind::UnsupportedVersion: return "unsupported-version";
        case ActivationFormatErrorKind::BadHeader: return "bad-header";
        case ActivationFormatErrorKind::Truncated: return "truncated-record";
        case ActivationFormatErrorKind::TrailingData: return "trailing-data";
        case ActivationFormatErrorKind::DuplicateKey: return "duplicate-key";
        case ActivationFormatErrorKind::NonFiniteValue: return "non-finite-value";
    }
    return "unknown";
}

namespace {

constexpr char kMagic[4]{'S', 'S', 'A', 'F'};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T v) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
}

template <typename T>
T get_le(const std::uint8_t* p) {
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(T{p[i]} << (8 * i));
    return v;
}

void check_activation_invariants(const SparseActivationSet& set) {
    std::vector<std::tuple<std::uint16_t, std::uint32_t, std::uint32_t>> keys;
    keys.reserve(set.records.size());
    for (const auto& r : set.records) {
        if (!std::isfinite(r.value)) {
            throw ActivationFormatError(ActivationFormatErrorKind::NonFiniteValue,
                                        "trial " + set.trial_id);
        }
        keys.emplace_back(r.layer, r.token_index, r.feature_id);
    }
    std::sort(keys.begin(), keys.end());
    const auto dup = std::adjacent_find(keys.begin(), keys.end());
    if (dup != keys.end()) {
        throw ActivationFormatError(
            ActivationFormatErrorKind::DuplicateKey,
            "trial " + set.trial_id + " layer " + std::to_string(std::get<0>(*dup)) + " token " +
                std::to_string(std::get<1>(*dup)) + " feature " + std::to_string(std::get<2>(*dup)));
    }
}

}  // namespace

std::size_t ssaf_header_size(std::string_view trial_id) noexcept {
    return 8 + 2 + trial_id.size() + 8;
}

std::vector<std::uint8_t> encode_activations(const SparseActivationSet& set) {
    if (set.trial_id.size() > 0xffff) throw InvalidInput("trial_id longer than 65535 bytes");
    check_activation_invariants(set);
    std::vector<std::uint8_t> out;
    out.reserve(ssaf_header_size(set.trial_id) + set.records.size() * kSsafRecordSize);
    out.insert(out.end(), kMagic, kMagic + 4);
    out.insert(out.end(), {kSsafVersion, 0, 0, 0});
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(set.trial_id.size()));
    out.insert(out.end(), set.trial_id.begin(), set.trial_id.end());
    put_le<std::uint64_t>(out, set.records.size());
    for (const auto& r : set.records) {
        put_le<std::uint16_t>(out, r.layer);
        put_le<std::uint32_t>(out, r.token_index);
        put_le<std::uint32_t>(out, r.feature_id);
        std::uint64_t bits = 0;
        std::memcpy(&bits, &r.value, sizeof bits);
        put_le<std::uint64_t>(out, bits);
    }
    return out;
}

SparseActivationSet decode_activations(std::span<const std::uint8_t> bytes) {
    using K = ActivationFormatErrorKind;
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
        throw ActivationFormatError(K::BadMagic, "expected 'SSAF'");
    }
    if (bytes.size() < 10) throw ActivationFormatError(K::Truncated, "header shorter than 10 bytes");
    if (bytes[4] != kSsafVersion) {
        throw ActivationFormatError(K::UnsupportedVersion, "version " + std::to_string(bytes[4]));
    }
    if (bytes[5] != 0 || bytes[6] != 0 || bytes[7] != 0) {
        throw ActivationFormatError(K::BadHeader, "reserved bytes must be zero");
    }
    const std::size_t id_len = get_le<std::uint16_t>(bytes.data() + 8);
    if (bytes.size() < 10 + id_len + 8) {
        throw ActivationFormatError(K::Truncated, "header cut short");
    }
    SparseActivationSet set;
    set.trial_id.assign(reinterpret_cast<const char*>(bytes.data() + 10), id_len);
    const std::uint64_t count = get_le<std::uint64_t>(bytes.data() + 10 + id_len);
    const std::size_t body = bytes.size() - (10 + id_len + 8);
    if (body % kSsafRecordSize != 0 || count > body / kSsafRecordSize) {
        throw ActivationFormatError(K::Truncated, "declared " + std::to_string(count) +
                                                      " records, body holds " +
                                                      std::to_string(body) + " bytes");
    }
    if (count < body / kSsafRecordSize) {
        throw ActivationFormatError(K::TrailingData, "bytes after the declared records");
    }
    set.records.reserve(count);
    const std::uint8_t* p = bytes.data() + 10 + id_len + 8;
    for (std::uint64_t i = 0; i < count; ++i, p += kSsafRecordSize) {
        ActivationRecord r;
        r.layer = get_le<std::uint16_t>(p);
        r.token_index = get_le<std::uint32_t>(p + 2);
        r.feature_id = get_le<std::uint32_t>(p + 6);
        const std::uint64_t bits = get_le<std::uint64_t>(p + 10);
        std::memcpy(&r.value, &bits, sizeof bits);
        set.records.push_back(r);
    }
    check_activation_invariants(set);
    return set;
}

void write_activations(const SparseActivationSet& set, const std::filesystem::path& path) {
    write_binary_file(path, encode_activations(set));
}

SparseActivationSet read_activations(const std::filesystem::path& path) {
    return decode_activations(read_binary_file(path));
}

// ---------------------------------------------------------------------------
// Ablation plans

void validate_plan(const AblationPlan& plan) {
    if (plan.ablation_id.empty()) throw ValidationError("ablation_id", "", "must not be empty");
    if (plan.mode != "zero") throw ValidationError("mode", "", "only \"zero\" is supported");
    if (plan.features.empty()) throw ValidationError("features", "", "must not be empty");
    std::set<FeatureKey> seen;
    for (const auto& f : plan.features) {
        if (!seen.insert(f).second) {
            throw ValidationError("features", "", "duplicate feature (layer " +
                                                      std::to_string(f.layer) + ", id " +
                                                      std::to_string(f.feature_id) + ")");
        }
    }
}

std::string plan_to_json(const AblationPlan& plan) {
    validate_plan(plan);
    ojson j;
    j["ablation_id"] = plan.ablation_id;
    j["mode"] = plan.mode;
    ojson features = ojson::array();
    for (const auto& f : plan.features) {
        features.push_back({{"layer", f.layer}, {"feature_id", f.feature_id}});
    }
    j["features"] = std::move(features);
    return j.dump(2) + "\n";
}

AblationPlan plan_from_json(std::string_view text) {
    ojson doc;
    try {
        doc = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("", "", std::string("malformed JSON: ") + e.what());
    }
    const Reader r(doc, "");
    AblationPlan plan;
    plan.ablation_id = r.str("ablation_id");
    plan.mode = r.str("mode");
    const auto& features = r.array("features");
    for (std::size_t i = 0; i < features.size(); ++i) {
        const Reader fr(features[i], "features[" + std::to_string(i) + "]");
        const auto layer = fr.integer("layer");
        const auto id = fr.integer("feature_id");
        if (layer < 0 || layer > 0xffff) fr.fail("layer", "out of range");
        if (id < 0 || id > 0xffffffffLL) fr.fail("feature_id", "out of range");
        plan.features.push_back({static_cast<std::uint16_t>(layer), static_cast<std::uint32_t>(id)});
    }
    validate_plan(plan);
    return plan;
}

void write_plan(const AblationPlan& plan, const std::filesystem::path& path) {
    write_text_file(path, plan_to_json(plan));
}

AblationPlan read_plan(const std::filesystem::path& path) {
    return plan_from_json(read_text_file(path));
}

// ---------------------------------------------------------------------------
// Validation

std::map<Condition, std::size_t> ValidationReport::missing_by_condition() const {
    std::map<Condition, std::size_t> out;
    for (Condition c : kAllConditions) out[c] = 0;
    for (const auto& m : missing) ++out[m.condition];
    return out;
}

std::string ValidationReport::to_json() const {
    ojson j;
    j["ok"] = empty();
    j["unknown_trial_ids"] = unknown_trial_ids;
    ojson pos = ojson::array();
    for (const auto& v : positive_logprobs) {
        pos.push_back({{"trial_id", v.trial_id}, {"field", v.field}, {"value", v.value}});
    }
    j["positive_logprobs"] = std::move(pos);
    ojson dups = ojson::array();
    for (const auto& d : duplicates) {
        dups.push_back({{"trial_id", d.trial_id}, {"model_id", d.model_id}, {"ablation_id", d.ablation_id}});
    }
    j["duplicates"] = std::move(dups);
    ojson miss = ojson::array();
    for (const auto& m : missing) {
        miss.push_back({{"model_id", m.model_id},
                        {"ablation_id", m.ablation_id},
                        {"trial_id", m.trial_id},
                        {"condition", std::string(to_string(m.condition))}});
    }
    j["missing"] = std::move(miss);
    ojson counts;
    for (const auto& [c, n] : missing_by_condition()) counts[std::string(to_string(c))] = n;
    j["missing_by_condition"] = std::move(counts);
    return j.dump(2) + "\n";
}

ValidationReport validate_records(std::span<const TrialRecord> records, const Manifest& manifest) {
    ValidationReport report;
    std::unordered_set<std::string> known;
    for (const auto& t : manifest.trials) known.insert(t.spec.id);

    using Group = std::pair<std::string, std::string>;
    std::set<std::tuple<std::string, std::string, std::string>> seen;
    std::map<Group, std::unordered_set<std::string>> covered;
    for (const auto& r : records) {
        const std::string ablation = r.ablation_id.value_or("");
        if (known.count(r.trial_id) == 0) report.unknown_trial_ids.push_back(r.trial_id);
        if (!(r.logprob_second_correct <= 0.0)) {
            report.positive_logprobs.push_back({r.trial_id, "logprob_second_correct", r.logprob_second_correct});
        }
        if (r.logprob_first_correct && !(*r.logprob_first_correct <= 0.0)) {
            report.positive_logprobs.push_back({r.trial_id, "logprob_first_correct", *r.logprob_first_correct});
        }
        if (r.topk_second) {
            for (const auto& t : *r.topk_second) {
                if (!(t.logprob <= 0.0)) {
                    report.positive_logprobs.push_back({r.trial_id, "topk_second", t.logprob});
                }
            }
        }
        if (!seen.emplace(r.trial_id, r.model_id, ablation).second) {
            report.duplicates.push_back({r.trial_id, r.model_id, ablation});
        }
        covered[{r.model_id, ablation}].insert(r.trial_id);
    }
    if (covered.empty()) covered[{"", ""}];
    for (const auto& [group, ids] : covered) {
        for (const auto& t : manifest.trials) {
            if (ids.count(t.spec.id) == 0) {
                report.missing.push_back({group.first, group.second, t.spec.id, t.spec.condition});
            }
        }
    }
    return report;
}

}  // namespace seqstroop
