#pragma once

// Dual-route conflict-monitoring reference model and a synthetic activation
// generator with planted feature groups. Both are deterministic fixtures for
// exercising the behavior and interp pipelines offline.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seqstroop/interp.hpp"
#include "seqstroop/protocol.hpp"
#include "seqstroop/stimulus.hpp"

namespace seqstroop::refmodel {

struct RefModelParams {
    double alpha = 1.0;   // color-route gain
    double beta = 1.4;    // word-route gain
    double gamma = 0.5;   // word suppression per unit control, [0,1]
    double g0 = 0.5;      // baseline control, [0,1]
    double kappa = 0.4;   // conflict-to-control gain, >= 0
    double lambda = 3.0;  // logit temperature, > 0

    /// Throws InvalidInput on out-of-range values.
    void validate() const;
    /// Soft checks, e.g. beta <= alpha (reading no longer dominant).
    std::vector<std::string> warnings() const;
};

struct PositionLogprobs {
    double control = 0.0;          // g_i
    std::vector<double> logprobs;  // over the colorset, in colorset order
};

struct RefLogprobs {
    PositionLogprobs first;
    PositionLogprobs second;
};

/// g1 = g0, g2 = min(1, g0 + kappa * [word1 incongruent]);
/// e(x) = alpha*g*[x == ink] + beta*(1 - gamma*g)*[x == text];
/// logprobs = log_softmax(lambda * e).
RefLogprobs ref_logprobs(const StimulusSpec& spec, const RefModelParams& params,
                         std::span<const ColorTerm> colorset = canonical_colors());

/// Numerically stable log-softmax.
std::vector<double> log_softmax(std::span<const double> logits);

// ---------------------------------------------------------------------------
// Synthetic activations

/// Token grid per trial: [0,2) prompt, word 1 at {2,3}, word 2 at {4,5}. The
/// first token of a word carries its ink, the second its text.
struct SyntheticLayout {
    static constexpr std::uint32_t kTokens = 6;
    static constexpr std::uint32_t kWord1 = 2;
    static constexpr std::uint32_t kWord2 = 4;

    static interp::WordSpans word_spans() {
        return {interp::TokenSpan::range(kWord1, kWord1 + 2), interp::TokenSpan::range(kWord2, kWord2 + 2)};
    }
};

struct SyntheticDumpConfig {
    std::size_t color_group = 6;  // includes the shared features
    std::size_t text_group = 8;   // includes the shared features
    std::size_t conflict_group = 4;
    std::size_t shared_features = 2;
    std::size_t noise_features = 50;
    double noise_activation_prob = 0.05;
    double conflict_incongruent = 3.0;  // when word 1 is incongruent
    double conflict_congruent = 1.0;
    double feature_amplitude = 1.0;
    std::string target_color{"red"};
    std::uint64_t seed = 7;

    void validate() const;
};

struct PlantedGroups {
    std::vector<FeatureKey> color;  // sorted, includes shared
    std::vector<FeatureKey> text;   // sorted, includes shared
    std::vector<FeatureKey> shared;
    std::vector<FeatureKey> conflict;
    std::vector<FeatureKey> noise;
};

PlantedGroups planted_groups(const SyntheticDumpConfig& config);

/// Color features fire on the ink token of words inked in the target color,
/// text features on the text token of words reading the target color, shared
/// features on both. Conflict features fire on both word-2 tokens with an
/// amplitude set by word 1's congruency. Noise features fire independently per
/// token from a per-trial stream keyed by (seed, trial_id).
SparseActivationSet synthetic_dump(const StimulusSpec& spec, const SyntheticDumpConfig& config);

std::vector<SparseActivationSet> generate_synthetic_dump(const Manifest& manifest,
                                                         const SyntheticDumpConfig& config);

// ---------------------------------------------------------------------------
// Mock experiment

struct MockRun {
    std::vector<TrialRecord> records;
    std::vector<SparseActivationSet> dumps;
};

inline constexpr std::string_view kModelId = "refmodel";

/// Greedy answers from ref_logprobs; dumps from the synthetic generator with
/// `seed` overriding the config seed. An ablation plan zeroes its features in
/// the dumps and scales kappa by the fraction of conflict features it spares.
MockRun run_mock_experiment(const Manifest& manifest, const RefModelParams& params,
                            std::uint64_t seed, SyntheticDumpConfig dump_config = {},
                            const std::optional<AblationPlan>& ablation = std::nullopt);

}  // namespace seqstroop::refmodel
