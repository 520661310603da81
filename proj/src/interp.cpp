#include "seqstroop/interp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <regex>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "seqstroop/hash.hpp"
#include "seqstroop/kernels.hpp"

namespace seqstroop::interp {

using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Predicates

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

bool in_colorset(std::string_view name, std::span<const ColorTerm> colorset) {
    return std::any_of(colorset.begin(), colorset.end(),
                       [&](const ColorTerm& c) { return c.name == name; });
}

const std::string& slot_value(Slot slot, const StimulusSpec& spec) {
    switch (slot) {
        case Slot::C1: return spec.word1.ink.name;
        case Slot::T1: return spec.word1.text.name;
        case Slot::C2: return spec.word2.ink.name;
        case Slot::T2: return spec.word2.text.name;
    }
    return spec.word1.ink.name;
}

std::string_view slot_name(Slot s) {
    switch (s) {
        case Slot::C1: return "c1";
        case Slot::T1: return "t1";
        case Slot::C2: return "c2";
        case Slot::T2: return "t2";
    }
    return "??";
}

std::optional<Slot> parse_slot(std::string_view s) {
    for (Slot slot : {Slot::C1, Slot::T1, Slot::C2, Slot::T2}) {
        if (slot_name(slot) == s) return slot;
    }
    return std::nullopt;
}

}  // namespace

TrialPredicate parse_predicate(std::string_view text, std::span<const ColorTerm> colorset) {
    static const std::regex atom_re(R"(^\s*([A-Za-z][A-Za-z0-9]*)\s*(==|!=)\s*([A-Za-z][A-Za-z0-9]*)\s*$)");
    TrialPredicate pred;
    std::string rest(text);
    // Accept the A(...) wrapper used in summary-tensor notation.
    static const std::regex wrapper_re(R"(^\s*A\s*\((.*)\)\s*$)");
    std::smatch wm;
    if (std::regex_match(rest, wm, wrapper_re)) rest = wm[1].str();
    // A blank predicate selects every trial.
    if (rest.find_first_not_of(" \t") == std::string::npos) return pred;

    std::size_t start = 0;
    while (start <= rest.size()) {
        const auto comma = rest.find(',', start);
        const std::string atom = rest.substr(start, comma == std::string::npos ? std::string::npos
                                                                                : comma - start);
        start = comma == std::string::npos ? rest.size() + 1 : comma + 1;
        if (atom.find_first_not_of(" \t") == std::string::npos) {
            throw InvalidInput("empty atom in predicate '" + std::string(text) + "'");
        }
        std::smatch m;
        if (!std::regex_match(atom, m, atom_re)) {
            throw InvalidInput("cannot parse predicate atom '" + atom + "'");
        }
        const std::string lhs = lower(m[1].str());
        const bool equal = m[2].str() == "==";
        const std::string rhs = m[3].str();
        const auto ls = parse_slot(lhs);
        if (!ls) throw InvalidInput("unknown slot '" + m[1].str() + "' (expected c1, t1, c2, t2)");
        if (const auto rs = parse_slot(lower(rhs))) {
            const bool same_word = (*ls == Slot::C1 && *rs == Slot::T1) ||
                                   (*ls == Slot::T1 && *rs == Slot::C1) ||
                                   (*ls == Slot::C2 && *rs == Slot::T2) ||
                                   (*ls == Slot::T2 && *rs == Slot::C2);
            if (!same_word) {
                throw InvalidInput("relational atoms compare ink and text of one word: '" + atom + "'");
            }
            pred.congruency_atoms.push_back({(*ls == Slot::C1 || *ls == Slot::T1) ? 1 : 2, equal});
            continue;
        }
        const std::string color = lower(rhs);
        if (!in_colorset(color, colorset)) throw InvalidInput("unknown color '" + rhs + "' in predicate");
        pred.slot_atoms.push_back({*ls, color, equal});
    }
    return pred;
}

std::string to_string(const TrialPredicate& pred) {
    std::string out;
    auto sep = [&out] {
        if (!out.empty()) out += ", ";
    };
    for (const auto& a : pred.slot_atoms) {
        sep();
        const bool text_slot = a.slot == Slot::T1 || a.slot == Slot::T2;
        out += std::string(slot_name(a.slot)) + (a.equal ? " == " : " != ") +
               (text_slot ? upper(a.color) : a.color);
    }
    for (const auto& a : pred.congruency_atoms) {
        sep();
        out += "c" + std::to_string(a.word) + (a.equal ? " == " : " != ") + "t" +
               std::to_string(a.word);
    }
    return out;
}

bool eval_predicate(const TrialPredicate& pred, const StimulusSpec& spec,
                    std::span<const ColorTerm> colorset) {
    bool result = true;
    for (const auto& a : pred.slot_atoms) {
        if (!in_colorset(a.color, colorset)) throw InvalidInput("unknown color '" + a.color + "'");
        if ((slot_value(a.slot, spec) == a.color) != a.equal) result = false;
    }
    for (const auto& a : pred.congruency_atoms) {
        const auto& w = a.word == 1 ? spec.word1 : spec.word2;
        if (w.congruent() != a.equal) result = false;
    }
    return result;
}

bool satisfiable(const TrialPredicate& pred, std::span<const ColorTerm> colorset) {
    const auto specs = enumerate_sequences(colorset, Arrangement::LeftRight);
    return std::any_of(specs.begin(), specs.end(),
                       [&](const StimulusSpec& s) { return eval_predicate(pred, s, colorset); });
}

std::size_t count_matching(const TrialPredicate& pred, std::span<const StimulusSpec> specs,
                           std::span<const ColorTerm> colorset) {
    return static_cast<std::size_t>(std::count_if(specs.begin(), specs.end(), [&](const StimulusSpec& s) {
        return eval_predicate(pred, s, colorset);
    }));
}

// ---------------------------------------------------------------------------
// Summary tensors

TokenSpan TokenSpan::parse(std::string_view text) {
    if (text == "all") return everything();
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw InvalidInput("token span must be 'all' or 'LO:HI'");
    try {
        const auto b = std::stoul(std::string(text.substr(0, colon)));
        const auto e = std::stoul(std::string(text.substr(colon + 1)));
        if (e <= b) throw InvalidInput("token span end must exceed begin");
        return range(static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(e));
    } catch (const std::logic_error&) {
        throw InvalidInput("bad token span '" + std::string(text) + "'");
    }
}

std::string TokenSpan::to_string() const {
    if (all) return "all";
    return std::to_string(begin) + ":" + std::to_string(end);
}

namespace {

const StimulusSpec& spec_for(const Manifest& manifest, const std::string& trial_id) {
    const auto* t = manifest.find(trial_id);
    if (!t) throw InvalidInput("activation set for unknown trial '" + trial_id + "'");
    return t->spec;
}

}  // namespace

SummaryTensor summary_tensor(std::span<const SparseActivationSet> activations,
                             const Manifest& manifest, const TrialPredicate& pred_a,
                             const std::optional<TrialPredicate>& pred_b, const TokenSpan& span,
                             double prune_epsilon) {
    SummaryTensor out;
    out.pred_a = to_string(pred_a);
    if (pred_b) out.pred_b = to_string(*pred_b);
    out.token_span = span;

    std::unordered_map<std::string, const StimulusSpec*> specs;
    for (const auto& t : manifest.trials) specs.emplace(t.spec.id, &t.spec);

    std::set<std::uint32_t> tokens;
    if (span.all) {
        for (const auto& set : activations) {
            for (const auto& r : set.records) tokens.insert(r.token_index);
        }
        out.span_length = tokens.size();
    } else {
        out.span_length = span.end - span.begin;
    }
    auto in_span = [&](std::uint32_t tok) {
        return span.all ? true : (tok >= span.begin && tok < span.end);
    };

    // 0 = pred_a, 1 = pred_b; a trial may fall in both.
    std::vector<const SparseActivationSet*> groups[2];
    for (const auto& set : activations) {
        auto it = specs.find(set.trial_id);
        if (it == specs.end()) throw InvalidInput("activation set for unknown trial '" + set.trial_id + "'");
        if (eval_predicate(pred_a, *it->second, manifest.colorset)) groups[0].push_back(&set);
        if (pred_b && eval_predicate(*pred_b, *it->second, manifest.colorset)) groups[1].push_back(&set);
    }
    out.trials_a = groups[0].size();
    out.trials_b = groups[1].size();
    if (out.trials_a == 0) throw EmptySelectionError(out.pred_a);
    if (pred_b && out.trials_b == 0) throw EmptySelectionError(*out.pred_b);
    if (out.span_length == 0) return out;

    std::map<FeatureKey, std::size_t> index;
    for (int g = 0; g < 2; ++g) {
        for (const auto* set : groups[g]) {
            for (const auto& r : set->records) {
                if (in_span(r.token_index)) index.emplace(r.key(), 0);
            }
        }
    }
    std::vector<FeatureKey> keys;
    keys.reserve(index.size());
    for (auto& [k, i] : index) {
        i = keys.size();
        keys.push_back(k);
    }

    const double inv_len = 1.0 / static_cast<double>(out.span_length);
    std::vector<double> sums[2]{std::vector<double>(keys.size(), 0.0),
                                std::vector<double>(keys.size(), 0.0)};
    std::vector<double> trial(keys.size(), 0.0);
    std::vector<std::size_t> touched;
    for (int g = 0; g < 2; ++g) {
        for (const auto* set : groups[g]) {
            for (const auto& r : set->records) {
                if (!in_span(r.token_index)) continue;
                const auto i = index.at(r.key());
                if (trial[i] == 0.0) touched.push_back(i);
                trial[i] += r.value;
            }
            std::sort(touched.begin(), touched.end());
            touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
            for (auto i : touched) {
                sums[g][i] += trial[i] * inv_len;
                trial[i] = 0.0;
            }
            touched.clear();
        }
    }

    std::vector<double> diff(keys.size());
    const double sa = 1.0 / static_cast<double>(out.trials_a);
    const double sb = pred_b ? -1.0 / static_cast<double>(out.trials_b) : 0.0;
    kernels::axpby(diff, sums[0], sa, sums[1], sb);

    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (std::abs(diff[i]) >= prune_epsilon) out.entries.emplace(keys[i], diff[i]);
    }
    return out;
}

std::vector<FeatureKey> select_features(const SummaryTensor& tensor, std::size_t top_k) {
    if (top_k == 0) throw InvalidInput("top_k must be at least 1");
    std::vector<std::pair<FeatureKey, double>> items(tensor.entries.begin(), tensor.entries.end());
    const auto k = std::min(top_k, items.size());
    std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(k), items.end(),
                      [](const auto& x, const auto& y) {
                          const double ax = std::abs(x.second);
                          const double ay = std::abs(y.second);
                          if (ax != ay) return ax > ay;
                          return x.first < y.first;
                      });
    std::vector<FeatureKey> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.push_back(items[i].first);
    return out;
}

// ---------------------------------------------------------------------------
// Coactivation graph

std::optional<double> CoactivationGraph::score(const FeatureKey& x, const FeatureKey& y) const {
    const auto ix = std::lower_bound(nodes.begin(), nodes.end(), x);
    const auto iy = std::lower_bound(nodes.begin(), nodes.end(), y);
    if (ix == nodes.end() || *ix != x || iy == nodes.end() || *iy != y) return std::nullopt;
    auto a = static_cast<std::size_t>(ix - nodes.begin());
    auto b = static_cast<std::size_t>(iy - nodes.begin());
    if (a > b) std::swap(a, b);
    const auto e = std::lower_bound(edges.begin(), edges.end(), Edge{a, b, 0.0},
                                    [](const Edge& l, const Edge& r) {
                                        return std::tie(l.a, l.b) < std::tie(r.a, r.b);
                                    });
    if (e == edges.end() || e->a != a || e->b != b) return std::nullopt;
    return e->score;
}

CoactivationGraph coactivation_graph(std::span<const SparseActivationSet> activations,
                                     std::span<const FeatureKey> nodes, const GraphOptions& options) {
    if (nodes.empty()) throw InvalidInput("coactivation graph needs at least one node");
    CoactivationGraph g;
    g.nodes.assign(nodes.begin(), nodes.end());
    std::sort(g.nodes.begin(), g.nodes.end());
    g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());

    std::map<FeatureKey, std::size_t> node_index;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) node_index.emplace(g.nodes[i], i);

    // Assign one bit per (trial, token) at which any node is active.
    std::vector<std::pair<std::size_t, std::size_t>> hits;  // (node, bit)
    std::size_t bits = 0;
    for (const auto& set : activations) {
        std::map<std::uint32_t, std::size_t> token_bit;
        for (const auto& r : set.records) {
            if (!(r.value > options.activation_threshold)) continue;
            const auto it = node_index.find(r.key());
            if (it == node_index.end()) continue;
            auto [tb, inserted] = token_bit.emplace(r.token_index, bits);
            if (inserted) ++bits;
            hits.emplace_back(it->second, tb->second);
        }
    }

    const std::size_t words = (bits + 63) / 64;
    std::vector<std::uint64_t> matrix(g.nodes.size() * words, 0);
    for (const auto& [node, bit] : hits) {
        matrix[node * words + bit / 64] |= std::uint64_t{1} << (bit % 64);
    }
    g.occurrences.resize(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        const std::span<const std::uint64_t> row(matrix.data() + i * words, words);
        g.occurrences[i] = kernels::set_counts(row, row).intersection;
    }

    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.occurrences[i] == 0) continue;
        const std::span<const std::uint64_t> ri(matrix.data() + i * words, words);
        for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
            if (g.occurrences[j] == 0) continue;
            const std::span<const std::uint64_t> rj(matrix.data() + j * words, words);
            const auto c = kernels::set_counts(ri, rj);
            const double jaccard = static_cast<double>(c.intersection) / static_cast<double>(c.union_);
            if (jaccard >= options.min_jaccard) g.edges.push_back({i, j, jaccard});
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Supernodes

std::string supernode_id(std::span<const FeatureKey> sorted_members) {
    std::uint64_t h = kFnvOffset;
    std::uint16_t lo = 0xffff, hi = 0;
    for (const auto& m : sorted_members) {
        h = fnv1a64(std::to_string(m.layer) + ":" + std::to_string(m.feature_id) + ";", h);
        lo = std::min(lo, m.layer);
        hi = std::max(hi, m.layer);
    }
    if (sorted_members.empty()) lo = 0;
    return "sn-l" + std::to_string(lo) + "-" + std::to_string(hi) + "-" + hex64(h).substr(0, 12);
}

std::vector<Supernode> extract_supernodes(const CoactivationGraph& graph, std::size_t min_size) {
    std::vector<std::size_t> parent(graph.nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&parent](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const auto& e : graph.edges) {
        const auto ra = find(e.a);
        const auto rb = find(e.b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
    std::map<std::size_t, std::vector<FeatureKey>> components;  // keyed by smallest index
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) components[find(i)].push_back(graph.nodes[i]);

    std::vector<Supernode> out;
    for (auto& [root, members] : components) {
        if (members.size() < std::max<std::size_t>(min_size, 1)) continue;
        Supernode s;
        s.members = std::move(members);
        s.id = supernode_id(s.members);
        auto [lo, hi] = std::minmax_element(s.members.begin(), s.members.end(),
                                            [](const FeatureKey& x, const FeatureKey& y) {
                                                return x.layer < y.layer;
                                            });
        s.layer_span = {lo->layer, hi->layer};
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<OverlapEntry> supernode_overlap(std::span<const Supernode> a, std::span<const Supernode> b) {
    std::vector<OverlapEntry> out;
    for (const auto& x : a) {
        for (const auto& y : b) {
            OverlapEntry e;
            e.a_id = x.id;
            e.b_id = y.id;
            std::set_intersection(x.members.begin(), x.members.end(), y.members.begin(),
                                  y.members.end(), std::back_inserter(e.shared));
            const auto uni = x.members.size() + y.members.size() - e.shared.size();
            e.jaccard = uni == 0 ? 0.0 : static_cast<double>(e.shared.size()) / static_cast<double>(uni);
            e.a_span = x.layer_span;
            e.b_span = y.layer_span;
            out.push_back(std::move(e));
        }
    }
    return out;
}

AblationPlan ablation_plan(const Supernode& supernode) {
    if (supernode.members.empty()) throw InvalidInput("cannot ablate an empty supernode");
    AblationPlan plan;
    plan.ablation_id = "ablate-" + supernode_id(supernode.members).substr(3);
    plan.mode = "zero";
    plan.features = supernode.members;
    return plan;
}

// ---------------------------------------------------------------------------
// Analyses

AnalysisSpec analysis_preset(std::string_view name, const WordSpans& spans,
                             std::span<const ColorTerm> colorset) {
    AnalysisSpec spec;
    spec.name = std::string(name);
    if (name == "conflict") {
        spec.pred_a = parse_predicate("c1 != t1, c2 != t2", colorset);
        spec.pred_b = parse_predicate("c1 == t1, c2 != t2", colorset);
        spec.span = spans.word2;
        return spec;
    }
    const auto colon = name.find(':');
    if (colon == std::string_view::npos) throw InvalidInput("unknown analysis '" + spec.name + "'");
    const auto kind = name.substr(0, colon);
    const auto c = lower(name.substr(colon + 1));
    const auto C = upper(c);
    const std::string baseline = "c1 != " + c + ", t1 != " + C + ", c2 != " + c + ", t2 != " + C;
    if (kind == "color") {
        spec.pred_a = parse_predicate("c1 == " + c + ", t1 != " + C + ", c2 != " + c + ", t2 != " + C, colorset);
    } else if (kind == "text") {
        spec.pred_a = parse_predicate("c1 != " + c + ", t1 == " + C + ", c2 != " + c + ", t2 != " + C, colorset);
    } else {
        throw InvalidInput("unknown analysis '" + spec.name + "'");
    }
    spec.pred_b = parse_predicate(baseline, colorset);
    spec.span = spans.word1;
    return spec;
}

AnalysisResult run_analysis(const AnalysisSpec& spec, std::span<const SparseActivationSet> activations,
                            const Manifest& manifest, const AnalysisOptions& options) {
    AnalysisResult result;
    result.spec = spec;
    result.tensor = summary_tensor(activations, manifest, spec.pred_a, spec.pred_b, spec.span,
                                   options.prune_epsilon);
    if (result.tensor.entries.empty()) return result;
    result.selected = select_features(result.tensor, options.top_k);

    std::vector<SparseActivationSet> matched;
    for (const auto& set : activations) {
        const auto& s = spec_for(manifest, set.trial_id);
        if (eval_predicate(spec.pred_a, s, manifest.colorset) ||
            (spec.pred_b && eval_predicate(*spec.pred_b, s, manifest.colorset))) {
            matched.push_back(set);
        }
    }
    result.graph = coactivation_graph(matched, result.selected, options.graph);
    result.supernodes = extract_supernodes(result.graph, options.min_size);
    return result;
}

namespace {

ojson members_json(std::span<const FeatureKey> members) {
    ojson arr = ojson::array();
    for (const auto& m : members) arr.push_back(ojson::array({m.layer, m.feature_id}));
    return arr;
}

ojson supernode_json(const Supernode& s) {
    return {{"id", s.id},
            {"size", s.members.size()},
            {"layer_span", {s.layer_span.first, s.layer_span.second}},
            {"members", members_json(s.members)}};
}

}  // namespace

std::string supernodes_report_json(std::span<const AnalysisResult> analyses,
                                   std::span<const std::pair<std::string, std::string>> overlap_pairs,
                                   const AnalysisOptions& options) {
    ojson j;
    j["parameters"] = {{"top_k", options.top_k},
                       {"min_size", options.min_size},
                       {"prune_epsilon", options.prune_epsilon},
                       {"activation_threshold", options.graph.activation_threshold},
                       {"min_jaccard", options.graph.min_jaccard}};
    ojson arr = ojson::array();
    for (const auto& a : analyses) {
        ojson aj;
        aj["name"] = a.spec.name;
        aj["pred_a"] = a.tensor.pred_a;
        aj["pred_b"] = a.tensor.pred_b ? ojson(*a.tensor.pred_b) : ojson(nullptr);
        aj["token_span"] = a.spec.span.to_string();
        aj["trials_a"] = a.tensor.trials_a;
        aj["trials_b"] = a.tensor.trials_b;
        aj["tensor_entries"] = a.tensor.entries.size();
        aj["selected"] = a.selected.size();
        aj["edges"] = a.graph.edges.size();
        ojson sns = ojson::array();
        for (const auto& s : a.supernodes) sns.push_back(supernode_json(s));
        aj["supernodes"] = std::move(sns);
        arr.push_back(std::move(aj));
    }
    j["analyses"] = std::move(arr);

    ojson overlaps = ojson::array();
    for (const auto& [na, nb] : overlap_pairs) {
        const auto fa = std::find_if(analyses.begin(), analyses.end(),
                                     [&](const AnalysisResult& r) { return r.spec.name == na; });
        const auto fb = std::find_if(analyses.begin(), analyses.end(),
                                     [&](const AnalysisResult& r) { return r.spec.name == nb; });
        if (fa == analyses.end() || fb == analyses.end()) continue;
        ojson entries = ojson::array();
        for (const auto& e : supernode_overlap(fa->supernodes, fb->supernodes)) {
            entries.push_back({{"a_id", e.a_id},
                               {"b_id", e.b_id},
                               {"intersection", e.shared.size()},
                               {"jaccard", e.jaccard},
                               {"shared", members_json(e.shared)},
                               {"a_layer_span", {e.a_span.first, e.a_span.second}},
                               {"b_layer_span", {e.b_span.first, e.b_span.second}}});
        }
        overlaps.push_back({{"a", na}, {"b", nb}, {"entries", std::move(entries)}});
    }
    j["overlaps"] = std::move(overlaps);
    return j.dump(2) + "\n";
}

std::vector<Supernode> supernodes_from_report(std::string_view json, std::string_view analysis) {
    ojson doc;
    try {
        doc = ojson::parse(json);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("", "", std::string("malformed supernodes report: ") + e.what());
    }
    if (!doc.contains("analyses") || !doc["analyses"].is_array()) {
        throw ValidationError("analyses", "", "missing analyses array");
    }
    for (const auto& a : doc["analyses"]) {
        if (!a.contains("name") || a["name"] != analysis) continue;
        std::vector<Supernode> out;
        try {
            for (const auto& s : a.at("supernodes")) {
                Supernode sn;
                sn.id = s.at("id").get<std::string>();
                for (const auto& m : s.at("members")) {
                    sn.members.push_back({m.at(0).get<std::uint16_t>(), m.at(1).get<std::uint32_t>()});
                }
                sn.layer_span = {s.at("layer_span").at(0).get<std::uint16_t>(),
                                 s.at("layer_span").at(1).get<std::uint16_t>()};
                out.push_back(std::move(sn));
            }
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("supernodes", "", std::string("bad supernode entry: ") + e.what());
        }
        return out;
    }
    throw ValidationError("analyses", "", "no analysis named '" + std::string(analysis) + "'");
}

}  // namespace seqstroop::interp
