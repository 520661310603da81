#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqstroop/error.hpp"
#include "seqstroop/protocol.hpp"
#include "seqstroop/stimulus.hpp"

namespace seqstroop {

enum class AnswerOutcome : std::uint8_t { Correct, StroopError, Other };

std::string_view to_string(AnswerOutcome o) noexcept;

struct AnswerClassification {
    AnswerOutcome first = AnswerOutcome::Other;
    AnswerOutcome second = AnswerOutcome::Other;
    bool ink_anomaly = false;

    friend bool operator==(const AnswerClassification&, const AnswerClassification&) = default;
};

/// Lowercase, punctuation-stripped word tokens.
std::vector<std::string> normalize_answer(std::string_view answer_text);

/// Position k is correct if the k-th color token names word k's ink, a Stroop
/// error if it names word k's text on an incongruent word, otherwise other.
AnswerClassification classify_answer(std::string_view answer_text, const StimulusSpec& spec,
                                     std::span<const ColorTerm> colorset);

struct ConditionStats {
    Condition condition = Condition::CC;
    std::size_t n = 0;
    std::optional<double> mean_logprob_second;  // absent when n == 0
    std::optional<double> accuracy_second;
    std::optional<double> stroop_rate_second;
    std::optional<double> other_rate_second;

    friend bool operator==(const ConditionStats&, const ConditionStats&) = default;
};

/// Records restricted to one model and ablation (nullopt = unablated).
std::vector<TrialRecord> filter_records(std::span<const TrialRecord> records,
                                        std::string_view model_id,
                                        const std::optional<std::string>& ablation_id);

std::vector<AnswerClassification> classify_records(std::span<const TrialRecord> records,
                                                   const Manifest& manifest);

/// One entry per condition in CC, CI, IC, II order. Sums are taken over sorted
/// values, so the result does not depend on record order.
std::vector<ConditionStats> aggregate(std::span<const TrialRecord> records, const Manifest& manifest,
                                      std::span<const AnswerClassification> classifications);

std::vector<ConditionStats> aggregate(std::span<const TrialRecord> records, const Manifest& manifest);

class MissingConditionError : public Error {
public:
    explicit MissingConditionError(Condition c)
        : Error("no trials for condition " + std::string(to_string(c))), condition_(c) {}
    Condition condition() const noexcept { return condition_; }

private:
    Condition condition_;
};

struct BootstrapOptions {
    std::size_t resamples = 10000;
    double confidence = 0.95;
    std::uint64_t seed = 20240601;
};

struct AdaptationReport {
    double mean_ci = 0.0;
    double mean_ii = 0.0;
    double delta_logprob = 0.0;                 // mean(II) - mean(CI)
    std::optional<double> gratton_interaction;  // (CI - CC) - (II - IC); needs CC and IC
    std::pair<double, double> bootstrap_interval{0.0, 0.0};
    BootstrapOptions bootstrap;
    bool ceiling_flag = false;

    bool adaptation() const noexcept { return delta_logprob > 0.0; }
    std::string to_json() const;
};

/// Throws MissingConditionError when CI or II has no trials.
AdaptationReport conflict_adaptation(std::span<const ConditionStats> stats,
                                     std::span<const TrialRecord> records, const Manifest& manifest,
                                     const BootstrapOptions& options = {});

/// Percentile bootstrap of mean(ii) - mean(ci), resampling within each group.
std::pair<double, double> bootstrap_delta(std::span<const double> ci, std::span<const double> ii,
                                          const BootstrapOptions& options);

/// Ratio after/before of second-position Stroop error rates.
double fold_change(double before_rate, double after_rate);
double fold_change(const ConditionStats& before, const ConditionStats& after);

/// Condition table: header plus one row per stats entry.
std::string emit_condition_table(std::span<const ConditionStats> stats);
std::vector<ConditionStats> parse_condition_table(std::string_view csv);

/// Metric/value table for an adaptation report.
std::string emit_adaptation_table(const AdaptationReport& report);

std::string stats_to_json(std::span<const ConditionStats> stats);

/// Per-condition baseline vs ablated comparison; fold is empty where the
/// baseline Stroop rate is zero, so absolute rates must be read instead.
std::string emit_ablation_table(std::span<const ConditionStats> before,
                                std::span<const ConditionStats> after);

/// Order-independent mean: sorts a copy before summing.
double stable_mean(std::span<const double> values);

}  // namespace seqstroop
