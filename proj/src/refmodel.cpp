#include "seqstroop/refmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "seqstroop/rng.hpp"

namespace seqstroop::refmodel {

void RefModelParams::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(alpha) || !finite(beta) || !finite(gamma) || !finite(g0) || !finite(kappa) ||
        !finite(lambda)) {
        throw InvalidInput("reference model parameters must be finite");
    }
    if (gamma < 0.0 || gamma > 1.0) throw InvalidInput("gamma must lie in [0, 1]");
    if (g0 < 0.0 || g0 > 1.0) throw InvalidInput("g0 must lie in [0, 1]");
    if (kappa < 0.0) throw InvalidInput("kappa must be non-negative");
    if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");
}

std::vector<std::string> RefModelParams::warnings() const {
    std::vector<std::string> out;
    if (!(beta > alpha)) {
        out.emplace_back("beta <= alpha: the word route is no more automatic than the color route");
    }
    return out;
}

std::vector<double> log_softmax(std::span<const double> logits) {
    std::vector<double> out(logits.size());
    if (logits.empty()) return out;
    const double m = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - m);
    const double lse = m + std::log(sum);
    for (std::size_t i = 0; i < logits.size(); ++i) out[i] = logits[i] - lse;
    return out;
}

namespace {

PositionLogprobs position(const WordStimulus& word, double control, const RefModelParams& p,
                          std::span<const ColorTerm> colorset) {
    PositionLogprobs out;
    out.control = control;
    std::vector<double> logits(colorset.size(), 0.0);
    for (std::size_t i = 0; i < colorset.size(); ++i) {
        double e = 0.0;
        if (colorset[i].name == word.ink.name) e += p.alpha * control;
        if (colorset[i].name == word.text.name) e += p.beta * (1.0 - p.gamma * control);
        logits[i] = p.lambda * e;
    }
    out.logprobs = log_softmax(logits);
    return out;
}

}  // namespace

RefLogprobs ref_logprobs(const StimulusSpec& spec, const RefModelParams& params,
                         std::span<const ColorTerm> colorset) {
    params.validate();
    const double g1 = params.g0;
    const double conflict1 = spec.word1.congruent() ? 0.0 : 1.0;
    const double g2 = std::min(1.0, params.g0 + params.kappa * conflict1);
    return {position(spec.word1, g1, params, colorset), position(spec.word2, g2, params, colorset)};
}

// ---------------------------------------------------------------------------

void SyntheticDumpConfig::validate() const {
    if (shared_features > color_group || shared_features > text_group) {
        throw InvalidInput("shared features cannot exceed either group size");
    }
    if (!(noise_activation_prob >= 0.0 && noise_activation_prob <= 1.0)) {
        throw InvalidInput("noise_activation_prob must lie in [0, 1]");
    }
    if (!(feature_amplitude > 0.0) || !(conflict_incongruent > 0.0) || !(conflict_congruent > 0.0)) {
        throw InvalidInput("planted amplitudes must be positive");
    }
    if (target_color.empty()) throw InvalidInput("target_color must be set");
}

PlantedGroups planted_groups(const SyntheticDumpConfig& c) {
    c.validate();
    PlantedGroups g;
    const std::size_t color_only = c.color_group - c.shared_features;
    const std::size_t text_only = c.text_group - c.shared_features;
    // Early and late bands alternate so each group spans several layers.
    for (std::size_t i = 0; i < color_only; ++i) {
        const auto layer = static_cast<std::uint16_t>(i % 2 == 0 ? 8 + (i / 2) % 4 : 19 + (i / 2) % 15);
        g.color.push_back({layer, static_cast<std::uint32_t>(100 + i)});
    }
    for (std::size_t i = 0; i < text_only; ++i) {
        const auto layer = static_cast<std::uint16_t>(i % 2 == 0 ? 3 + (i / 2) % 13 : 19 + (i / 2) % 15);
        g.text.push_back({layer, static_cast<std::uint32_t>(200 + i)});
    }
    for (std::size_t i = 0; i < c.shared_features; ++i) {
        g.shared.push_back({static_cast<std::uint16_t>(20 + i % 14), static_cast<std::uint32_t>(300 + i)});
    }
    for (std::size_t i = 0; i < c.conflict_group; ++i) {
        g.conflict.push_back({static_cast<std::uint16_t>(24 + i % 2), static_cast<std::uint32_t>(400 + i)});
    }
    for (std::size_t i = 0; i < c.noise_features; ++i) {
        g.noise.push_back({static_cast<std::uint16_t>(i % 36), static_cast<std::uint32_t>(1000 + i)});
    }
    g.color.insert(g.color.end(), g.shared.begin(), g.shared.end());
    g.text.insert(g.text.end(), g.shared.begin(), g.shared.end());
    for (auto* v : {&g.color, &g.text, &g.shared, &g.conflict, &g.noise}) std::sort(v->begin(), v->end());
    return g;
}

namespace {

struct PlantedIndex {
    std::vector<FeatureKey> color_only, text_only, shared, conflict, noise;

    explicit PlantedIndex(const SyntheticDumpConfig& c) {
        auto g = planted_groups(c);
        shared = g.shared;
        conflict = g.conflict;
        noise = g.noise;
        std::set<FeatureKey> sh(shared.begin(), shared.end());
        for (const auto& k : g.color) {
            if (!sh.count(k)) color_only.push_back(k);
        }
        for (const auto& k : g.text) {
            if (!sh.count(k)) text_only.push_back(k);
        }
    }
};

void emit(std::vector<ActivationRecord>& out, const FeatureKey& k, std::uint32_t token, double value) {
    out.push_back({k.layer, token, k.feature_id, value});
}

}  // namespace

SparseActivationSet synthetic_dump(const StimulusSpec& spec, const SyntheticDumpConfig& config) {
    config.validate();
    const PlantedIndex idx(config);
    SparseActivationSet set;
    set.trial_id = spec.id;
    auto& recs = set.records;

    const WordStimulus* words[2]{&spec.word1, &spec.word2};
    const std::uint32_t starts[2]{SyntheticLayout::kWord1, SyntheticLayout::kWord2};
    for (int w = 0; w < 2; ++w) {
        const std::uint32_t ink_tok = starts[w];
        const std::uint32_t text_tok = starts[w] + 1;
        const bool ink_hit = words[w]->ink.name == config.target_color;
        const bool text_hit = words[w]->text.name == config.target_color;
        if (ink_hit) {
            for (const auto& k : idx.color_only) emit(recs, k, ink_tok, config.feature_amplitude);
            for (const auto& k : idx.shared) emit(recs, k, ink_tok, config.feature_amplitude);
        }
        if (text_hit) {
            for (const auto& k : idx.text_only) emit(recs, k, text_tok, config.feature_amplitude);
            for (const auto& k : idx.shared) emit(recs, k, text_tok, config.feature_amplitude);
        }
    }
    const double conflict = spec.word1.congruent() ? config.conflict_congruent : config.conflict_incongruent;
    for (const auto& k : idx.conflict) {
        emit(recs, k, SyntheticLayout::kWord2, conflict);
        emit(recs, k, SyntheticLayout::kWord2 + 1, conflict);
    }

    if (config.noise_activation_prob > 0.0) {
        auto rng = SplitMix64::keyed(config.seed, spec.id);
        for (const auto& k : idx.noise) {
            for (std::uint32_t tok = 0; tok < SyntheticLayout::kTokens; ++tok) {
                const double u = rng.uniform();
                const double v = 0.05 + 0.95 * rng.uniform();
                if (u < config.noise_activation_prob) emit(recs, k, tok, v);
            }
        }
    }

    std::sort(recs.begin(), recs.end(), [](const ActivationRecord& a, const ActivationRecord& b) {
        return std::tie(a.layer, a.token_index, a.feature_id) < std::tie(b.layer, b.token_index, b.feature_id);
    });
    return set;
}

std::vector<SparseActivationSet> generate_synthetic_dump(const Manifest& manifest,
                                                         const SyntheticDumpConfig& config) {
    std::vector<SparseActivationSet> out;
    out.reserve(manifest.trials.size());
    for (const auto& t : manifest.trials) out.push_back(synthetic_dump(t.spec, config));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::size_t argmax(std::span<const double> v) {
    return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::size_t index_of(std::span<const ColorTerm> colorset, const std::string& name) {
    for (std::size_t i = 0; i < colorset.size(); ++i) {
        if (colorset[i].name == name) return i;
    }
    throw InvalidInput("color '" + name + "' missing from colorset");
}

}  // namespace

MockRun run_mock_experiment(const Manifest& manifest, const RefModelParams& params,
                            std::uint64_t seed, SyntheticDumpConfig dump_config,
                            const std::optional<AblationPlan>& ablation) {
    params.validate();
    dump_config.seed = seed;
    dump_config.validate();

    RefModelParams effective = params;
    std::set<FeatureKey> ablated;
    if (ablation) {
        validate_plan(*ablation);
        ablated.insert(ablation->features.begin(), ablation->features.end());
        const auto conflict = planted_groups(dump_config).conflict;
        const auto hit = static_cast<double>(std::count_if(
            conflict.begin(), conflict.end(), [&](const FeatureKey& k) { return ablated.count(k) > 0; }));
        if (!conflict.empty()) effective.kappa *= 1.0 - hit / static_cast<double>(conflict.size());
    }

    const auto& colors = manifest.colorset;
    MockRun run;
    run.records.reserve(manifest.trials.size());
    run.dumps.reserve(manifest.trials.size());
    for (const auto& t : manifest.trials) {
        const auto lp = ref_logprobs(t.spec, effective, colors);
        const std::size_t a1 = argmax(lp.first.logprobs);
        const std::size_t a2 = argmax(lp.second.logprobs);

        TrialRecord r;
        r.trial_id = t.spec.id;
        r.model_id = std::string(kModelId);
        r.answer_text = colors[a1].name + " " + colors[a2].name;
        r.logprob_first_correct = lp.first.logprobs[index_of(colors, t.expected_first.name)];
        r.logprob_second_correct = lp.second.logprobs[index_of(colors, t.expected_second.name)];
        std::vector<std::size_t> order(colors.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return lp.second.logprobs[x] > lp.second.logprobs[y];
        });
        std::vector<TopToken> top;
        for (std::size_t i = 0; i < std::min<std::size_t>(3, order.size()); ++i) {
            top.push_back({colors[order[i]].name, lp.second.logprobs[order[i]]});
        }
        r.topk_second = std::move(top);
        if (ablation) r.ablation_id = ablation->ablation_id;
        run.records.push_back(std::move(r));

        auto dump = synthetic_dump(t.spec, dump_config);
        if (!ablated.empty()) {
            std::erase_if(dump.records, [&](const ActivationRecord& a) { return ablated.count(a.key()) > 0; });
        }
        run.dumps.push_back(std::move(dump));
    }
    return run;
}

}  // namespace seqstroop::refmodel
