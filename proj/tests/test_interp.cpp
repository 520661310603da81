#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include <json.hpp>

#include "seqstroop/error.hpp"
#include "seqstroop/interp.hpp"
#include "seqstroop/refmodel.hpp"
#include "support.hpp"

using namespace seqstroop;
using namespace seqstroop::interp;

namespace {

Manifest manifest_for(std::span<const ColorTerm> colors = canonical_colors()) {
    Manifest m;
    m.experiment_id = "interp";
    m.colorset.assign(colors.begin(), colors.end());
    m.render_config = RenderConfig::defaults(Arrangement::LeftRight);
    const auto prompts = build_prompts(Arrangement::LeftRight, true);
    for (auto& s : enumerate_sequences(m.colorset, Arrangement::LeftRight)) {
        m.trials.push_back(make_trial(std::move(s), prompts));
    }
    return m;
}

StimulusSpec spec_of(const char* i1, const char* t1, const char* i2, const char* t2) {
    return make_spec(Arrangement::LeftRight, {canonical_color(i1), canonical_color(t1)},
                     {canonical_color(i2), canonical_color(t2)});
}

// Occurrence sets built directly from the dumps, for the Jaccard oracle.
using Occ = std::set<std::pair<std::string, std::uint32_t>>;

std::map<FeatureKey, Occ> occurrences(std::span<const SparseActivationSet> dumps) {
    std::map<FeatureKey, Occ> out;
    for (const auto& d : dumps) {
        for (const auto& r : d.records) {
            if (r.value > 0.0) out[r.key()].insert({d.trial_id, r.token_index});
        }
    }
    return out;
}

double jaccard(const Occ& a, const Occ& b) {
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    const std::size_t uni = a.size() + b.size() - inter;
    return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// Occurrence sets for a hand-built graph: feature i occupies tokens in `tokens[i]` of one trial.
std::vector<SparseActivationSet> dumps_from(const std::vector<std::vector<std::uint32_t>>& tokens) {
    SparseActivationSet s{"t", {}};
    for (std::size_t f = 0; f < tokens.size(); ++f) {
        for (auto tok : tokens[f]) s.records.push_back({1, tok, static_cast<std::uint32_t>(f), 1.0});
    }
    return {s};
}

std::vector<FeatureKey> keys(std::size_t n) {
    std::vector<FeatureKey> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({1, static_cast<std::uint32_t>(i)});
    return out;
}

std::vector<std::set<FeatureKey>> partition(const std::vector<Supernode>& sns) {
    std::vector<std::set<FeatureKey>> out;
    for (const auto& s : sns) out.emplace_back(s.members.begin(), s.members.end());
    return out;
}

}  // namespace

TEST_CASE("predicate evaluation examples") {
    const auto p = parse_predicate("c1 == red, t1 != RED, c2 != red, t2 != RED");
    CHECK(eval_predicate(p, spec_of("red", "green", "blue", "pink")));
    CHECK_FALSE(eval_predicate(p, spec_of("red", "red", "blue", "pink")));
    CHECK(to_string(p) == "c1 == red, t1 != RED, c2 != red, t2 != RED");
    CHECK(parse_predicate("A(c1 != t1, c2 != t2)") == parse_predicate("c1!=t1,c2!=t2"));
    CHECK(parse_predicate("  ") == TrialPredicate{});
}

TEST_CASE("predicate counts on the full enumeration") {
    const auto m = manifest_for();
    std::vector<StimulusSpec> specs;
    for (const auto& t : m.trials) specs.push_back(t.spec);
    CHECK(count_matching(parse_predicate("c1 == t1, c2 == t2"), specs) == 30);
    CHECK(count_matching(parse_predicate("c1 != t1, c2 != t2"), specs) == 360);
    CHECK(count_matching(parse_predicate("c1 == t1, c2 != t2"), specs) == 120);
    CHECK(count_matching(parse_predicate(""), specs) == 630);
    // Selection agrees with the stored condition labels.
    for (const auto& s : specs) {
        CHECK(eval_predicate(parse_predicate("c1 != t1, c2 != t2"), s) == (s.condition == Condition::II));
    }
}

TEST_CASE("satisfiability matches enumeration") {
    SplitMix64 rng(4);
    const auto cs = parse_colorset("red,blue,green,yellow");
    const auto specs = enumerate_sequences(cs, Arrangement::LeftRight);
    const char* slots[]{"c1", "t1", "c2", "t2"};
    for (int i = 0; i < 300; ++i) {
        std::string text;
        for (std::size_t k = 0, n = 1 + rng.below(4); k < n; ++k) {
            if (!text.empty()) text += ", ";
            if (rng.below(4) == 0) {
                const std::string w = rng.below(2) ? "1" : "2";
                text += "c" + w + (rng.below(2) ? " == " : " != ") + "t" + w;
            } else {
                text += std::string(slots[rng.below(4)]) + (rng.below(2) ? " == " : " != ") + cs[rng.below(4)].name;
            }
        }
        TrialPredicate p;
        try {
            p = parse_predicate(text, cs);
        } catch (const InvalidInput&) {
            continue;
        }
        CAPTURE(text);
        CHECK(satisfiable(p, cs) == (count_matching(p, specs, cs) > 0));
    }
}

TEST_CASE("predicate parsing rejects bad input") {
    CHECK_THROWS_AS(parse_predicate("c3 == red"), InvalidInput);
    CHECK_THROWS_AS(parse_predicate("c1 == purple"), InvalidInput);
    CHECK_THROWS_AS(parse_predicate("c1 = red"), InvalidInput);
    CHECK_THROWS_AS(parse_predicate("c1 == red,,"), InvalidInput);
    CHECK_THROWS_AS(parse_predicate("c1 != t2"), InvalidInput);
}

TEST_CASE("summary tensor: one trial per predicate") {
    Manifest m = manifest_for();
    const auto a = m.trials[0].spec;  // CC
    const auto b = m.find("left-right-red-blue-green-yellow")->spec;
    const std::vector<SparseActivationSet> dumps{{a.id, {{3, 0, 7, 2.0}}}, {b.id, {{3, 0, 7, 0.5}}}};
    const auto t = summary_tensor(dumps, m, parse_predicate("c1 == t1, c2 == t2"),
                                  parse_predicate("c1 != t1, c2 != t2"), TokenSpan::range(0, 1));
    REQUIRE(t.entries.size() == 1);
    CHECK(t.entries.at({3, 7}) == 1.5);
    CHECK(t.trials_a == 1);
    CHECK(t.trials_b == 1);

    const auto same = summary_tensor(dumps, m, parse_predicate("c1 == t1"), parse_predicate("c1 == t1"));
    CHECK(same.entries.empty());

    CHECK_THROWS_AS(summary_tensor(dumps, m, parse_predicate("c1 == pink, t1 == blue"), std::nullopt),
                    EmptySelectionError);
}

TEST_CASE("summary tensor averages over the token span with absent keys as zero") {
    Manifest m = manifest_for();
    const auto a = m.trials[0].spec;
    const std::vector<SparseActivationSet> dumps{{a.id, {{0, 0, 1, 4.0}, {0, 3, 1, 2.0}, {0, 9, 1, 100.0}}}};
    const auto t = summary_tensor(dumps, m, parse_predicate(""), std::nullopt, TokenSpan::range(0, 4));
    CHECK(t.entries.at({0, 1}) == 1.5);
    CHECK(t.span_length == 4);
    CHECK(TokenSpan::parse("2:4") == TokenSpan::range(2, 4));
    CHECK(TokenSpan::parse("all") == TokenSpan::everything());
    CHECK(TokenSpan::range(2, 4).to_string() == "2:4");
    CHECK_THROWS_AS(TokenSpan::parse("4:2"), InvalidInput);
}

TEST_CASE("planted conflict entry is 3.0 - 1.0") {
    const auto m = manifest_for();
    const auto dumps = refmodel::generate_synthetic_dump(m, {});
    const auto spec = analysis_preset("conflict", refmodel::SyntheticLayout::word_spans());
    const auto t = summary_tensor(dumps, m, spec.pred_a, spec.pred_b, spec.span);
    const auto planted = refmodel::planted_groups({});
    for (const auto& k : planted.conflict) CHECK(std::abs(t.entries.at(k) - 2.0) <= 1e-9);
}

TEST_CASE("property: summary tensor is linear in the activation values") {
    const auto m = manifest_for();
    refmodel::SyntheticDumpConfig cfg;
    cfg.noise_activation_prob = 0.2;
    const auto dumps = refmodel::generate_synthetic_dump(m, cfg);
    const auto spec = analysis_preset("text:red", refmodel::SyntheticLayout::word_spans());
    const auto base = summary_tensor(dumps, m, spec.pred_a, spec.pred_b, TokenSpan::everything(), 0.0);
    for (double s : {0.5, 3.0, 1e3}) {
        auto scaled = dumps;
        for (auto& d : scaled)
            for (auto& r : d.records) r.value *= s;
        const auto t = summary_tensor(scaled, m, spec.pred_a, spec.pred_b, TokenSpan::everything(), 0.0);
        REQUIRE(t.entries.size() == base.entries.size());
        for (const auto& [k, v] : base.entries) CHECK(t.entries.at(k) == doctest::Approx(v * s).epsilon(1e-9));
    }
}

TEST_CASE("feature selection by magnitude with a stable tie-break") {
    SummaryTensor t;
    t.entries = {{{1, 1}, 0.5}, {{1, 2}, -3.0}, {{2, 0}, 2.0}};
    CHECK(select_features(t, 2) == std::vector<FeatureKey>{{1, 2}, {2, 0}});
    CHECK(select_features(t, 10).size() == 3);
    t.entries = {{{5, 1}, 1.0}, {{2, 9}, -1.0}, {{3, 0}, 4.0}};
    CHECK(select_features(t, 2) == std::vector<FeatureKey>{{3, 0}, {2, 9}});
}

TEST_CASE("coactivation Jaccard examples") {
    // f0 and f1 identical; f2 disjoint; f3 (4 tokens) and f4 (6 tokens) share 3.
    const auto d = dumps_from({{0, 1}, {0, 1}, {7}, {10, 11, 12, 13}, {11, 12, 13, 14, 15, 16}});
    const auto g = coactivation_graph(d, keys(5), {0.0, 0.4});
    CHECK(g.score({1, 0}, {1, 1}) == 1.0);
    CHECK_FALSE(g.score({1, 0}, {1, 2}).has_value());
    REQUIRE(g.score({1, 3}, {1, 4}).has_value());
    CHECK(*g.score({1, 3}, {1, 4}) == doctest::Approx(3.0 / 7.0));
    const auto strict = coactivation_graph(d, keys(5), {0.0, 0.43});
    CHECK_FALSE(strict.score({1, 3}, {1, 4}).has_value());
}

TEST_CASE("activation threshold filters occurrences") {
    SparseActivationSet s{"t", {{1, 0, 0, 0.2}, {1, 0, 1, 0.9}, {1, 1, 0, 0.9}, {1, 1, 1, 0.9}}};
    const std::vector<SparseActivationSet> d{s};
    CHECK(*coactivation_graph(d, keys(2), {0.0, 0.0}).score({1, 0}, {1, 1}) == 1.0);
    CHECK(*coactivation_graph(d, keys(2), {0.5, 0.0}).score({1, 0}, {1, 1}) == 0.5);
}

TEST_CASE("component extraction examples") {
    const auto edgeless = coactivation_graph(dumps_from({{0}, {1}, {2}, {3}, {4}}), keys(5));
    CHECK(extract_supernodes(edgeless, 1).size() == 5);
    CHECK(extract_supernodes(edgeless, 2).empty());

    // Path 0-1-2 through shared tokens at threshold 1/3; 3 isolated.
    const auto path = coactivation_graph(dumps_from({{0, 1}, {1, 2}, {2, 3}, {9}}), keys(4), {0.0, 0.3});
    const auto sns = extract_supernodes(path, 2);
    REQUIRE(sns.size() == 1);
    CHECK(sns[0].members == std::vector<FeatureKey>{{1, 0}, {1, 1}, {1, 2}});
    CHECK(sns[0].id.starts_with("sn-l1-1-"));
}

TEST_CASE("property: graphs are symmetric and extraction ignores input order") {
    SplitMix64 rng(12);
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 2 + rng.below(14);
        std::vector<std::vector<std::uint32_t>> toks(n);
        for (auto& t : toks)
            for (std::uint32_t k = 0; k < 12; ++k)
                if (rng.below(3) == 0) t.push_back(k);
        const auto d = dumps_from(toks);
        const double tau = 0.1 + 0.5 * rng.uniform();
        auto order = keys(n);
        const auto g = coactivation_graph(d, order, {0.0, tau});
        for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
        const auto g2 = coactivation_graph(d, order, {0.0, tau});
        CHECK(extract_supernodes(g, 1) == extract_supernodes(g2, 1));
        const auto occ = occurrences(d);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const FeatureKey a{1, static_cast<std::uint32_t>(i)}, b{1, static_cast<std::uint32_t>(j)};
                CHECK(g.score(a, b) == g.score(b, a));
                if (i == j) continue;
                const auto sc = g.score(a, b);
                const double oracle = occ.count(a) && occ.count(b) ? jaccard(occ.at(a), occ.at(b)) : 0.0;
                if (sc) {
                    CHECK(*sc == doctest::Approx(oracle));
                    CHECK(*sc >= tau);
                } else {
                    CHECK(oracle < tau);
                }
            }
        }
        for (const auto& e : g.edges) {
            CHECK(e.a < e.b);
            CHECK(e.score >= 0.0);
            CHECK(e.score <= 1.0);
        }
    }
}

TEST_CASE("property: raising min_jaccard refines the partition") {
    SplitMix64 rng(13);
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 3 + rng.below(20);
        std::vector<std::vector<std::uint32_t>> toks(n);
        for (auto& t : toks)
            for (std::uint32_t k = 0; k < 10; ++k)
                if (rng.below(2) == 0) t.push_back(k);
        const auto d = dumps_from(toks);
        const double lo = 0.6 * rng.uniform();
        const double hi = lo + (1.0 - lo) * rng.uniform();
        const auto coarse = partition(extract_supernodes(coactivation_graph(d, keys(n), {0.0, lo}), 1));
        const auto fine = partition(extract_supernodes(coactivation_graph(d, keys(n), {0.0, hi}), 1));
        for (const auto& f : fine) {
            const auto home = std::count_if(coarse.begin(), coarse.end(), [&](const auto& c) {
                return std::includes(c.begin(), c.end(), f.begin(), f.end());
            });
            CHECK(home == 1);
        }
        // Components of one extraction are pairwise disjoint.
        std::set<FeatureKey> seen;
        for (const auto& c : coarse)
            for (const auto& k : c) CHECK(seen.insert(k).second);
    }
}

TEST_CASE("supernode overlap") {
    const Supernode a{supernode_id(std::vector<FeatureKey>{{1, 1}, {2, 2}}), {{1, 1}, {2, 2}}, {1, 2}};
    const Supernode b{supernode_id(std::vector<FeatureKey>{{2, 2}, {3, 3}, {4, 4}}), {{2, 2}, {3, 3}, {4, 4}}, {2, 4}};
    const std::vector<Supernode> la{a, b};
    const auto same = supernode_overlap(la, la);
    REQUIRE(same.size() == 4);
    CHECK(same[0].jaccard == 1.0);
    CHECK(same[3].jaccard == 1.0);
    CHECK(same[1].shared == std::vector<FeatureKey>{{2, 2}});
    CHECK(same[1].jaccard == doctest::Approx(0.25));
    const Supernode c{"x", {{9, 9}}, {9, 9}};
    const std::vector<Supernode> lc{c};
    for (const auto& e : supernode_overlap(la, lc)) CHECK(e.shared.empty());
}

TEST_CASE("ablation plans from supernodes") {
    const std::vector<FeatureKey> members{{24, 400}, {24, 402}, {25, 401}, {25, 403}};
    const Supernode s{supernode_id(members), members, {24, 25}};
    const auto p = ablation_plan(s);
    CHECK(p.features == members);
    CHECK(p.mode == "zero");
    CHECK(p.ablation_id == ablation_plan(s).ablation_id);
    CHECK(p.ablation_id.starts_with("ablate-l24-25-"));
    for (const auto& f : p.features) CHECK((f.layer == 24 || f.layer == 25));
    CHECK_THROWS_AS(ablation_plan(Supernode{"sn-empty", {}, {0, 0}}), InvalidInput);
}

TEST_CASE("planted groups are recovered and overlap by two") {
    const auto m = manifest_for();
    const refmodel::SyntheticDumpConfig cfg;
    const auto dumps = refmodel::generate_synthetic_dump(m, cfg);
    const auto planted = refmodel::planted_groups(cfg);
    const auto spans = refmodel::SyntheticLayout::word_spans();

    std::map<std::string, AnalysisResult> results;
    for (const char* name : {"color:red", "text:red", "conflict"}) {
        results[name] = run_analysis(analysis_preset(name, spans), dumps, m);
    }
    REQUIRE(results["color:red"].supernodes.size() == 1);
    REQUIRE(results["text:red"].supernodes.size() == 1);
    REQUIRE(results["conflict"].supernodes.size() == 1);
    CHECK(results["color:red"].supernodes[0].members == planted.color);
    CHECK(results["text:red"].supernodes[0].members == planted.text);
    CHECK(results["conflict"].supernodes[0].members == planted.conflict);
    CHECK(results["conflict"].supernodes[0].layer_span == std::pair<std::uint16_t, std::uint16_t>{24, 25});

    const auto ov = supernode_overlap(results["color:red"].supernodes, results["text:red"].supernodes);
    REQUIRE(ov.size() == 1);
    CHECK(ov[0].shared == planted.shared);
    CHECK(ov[0].shared.size() == 2);

    // Oracle: within-group Jaccard >= 0.9, planted vs noise <= 0.1 over the matched trials.
    for (const char* name : {"color:red", "text:red", "conflict"}) {
        const auto& r = results[name];
        std::vector<SparseActivationSet> matched;
        for (const auto& d : dumps) {
            const auto& s = m.find(d.trial_id)->spec;
            if (eval_predicate(r.spec.pred_a, s) || eval_predicate(*r.spec.pred_b, s)) matched.push_back(d);
        }
        const auto occ = occurrences(matched);
        const auto& group = r.supernodes[0].members;
        for (const auto& x : group)
            for (const auto& y : group) CHECK(jaccard(occ.at(x), occ.at(y)) >= 0.9);
        for (const auto& x : group)
            for (const auto& nz : planted.noise)
                if (occ.count(nz)) CHECK(jaccard(occ.at(x), occ.at(nz)) <= 0.1);
    }

    const std::vector<AnalysisResult> all{results["color:red"], results["text:red"], results["conflict"]};
    const std::vector<std::pair<std::string, std::string>> pairs{{"color:red", "text:red"}};
    const auto json = supernodes_report_json(all, pairs, {});
    const auto j = nlohmann::json::parse(json);
    CHECK(j["overlaps"][0]["entries"][0]["intersection"] == 2);
    CHECK(supernodes_from_report(json, "conflict") == results["conflict"].supernodes);
    CHECK_THROWS_AS(supernodes_from_report(json, "nope"), ValidationError);
}

TEST_CASE("unknown presets are rejected") {
    const auto spans = refmodel::SyntheticLayout::word_spans();
    CHECK_THROWS_AS(analysis_preset("shape:red", spans), InvalidInput);
    CHECK_THROWS_AS(analysis_preset("color:purple", spans), InvalidInput);
    CHECK(analysis_preset("text:blue", spans).pred_a == parse_predicate("c1 != blue, t1 == BLUE, c2 != blue, t2 != BLUE"));
}
