#pragma once

// File formats shared with the model runner: manifest JSON, trial records as
// JSON lines, SSAF sparse activation dumps, and ablation plan JSON.

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqstroop/error.hpp"
#include "seqstroop/render.hpp"
#include "seqstroop/stimulus.hpp"

namespace seqstroop {

inline constexpr int kManifestSchemaVersion = 1;

// ---------------------------------------------------------------------------
// Prompts

struct PromptPair {
    std::optional<std::string> system;
    std::string user;

    friend bool operator==(const PromptPair&, const PromptPair&) = default;
};

/// With system-prompt support the full task instructions go in `system` and
/// `user` carries only the question; otherwise `user` carries an abbreviated
/// instruction followed by the question.
PromptPair build_prompts(Arrangement arrangement, bool system_supported);

// ---------------------------------------------------------------------------
// Manifest

struct ManifestTrial {
    StimulusSpec spec;
    std::string image;  // relative to the manifest's directory
    PromptPair prompts;
    ColorTerm expected_first;
    ColorTerm expected_second;

    friend bool operator==(const ManifestTrial&, const ManifestTrial&) = default;
};

struct Manifest {
    std::string experiment_id;
    std::vector<ColorTerm> colorset;
    Arrangement arrangement = Arrangement::LeftRight;
    RenderConfig render_config;
    std::vector<ManifestTrial> trials;

    const ManifestTrial* find(std::string_view trial_id) const;

    friend bool operator==(const Manifest&, const Manifest&) = default;
};

/// Builds a trial with image `<id>.png` under `image_dir` and expected answers
/// taken from the inks.
ManifestTrial make_trial(StimulusSpec spec, const PromptPair& prompts,
                         std::string_view image_dir = "images");

std::string manifest_to_json(const Manifest& manifest);
/// Throws ValidationError naming the field and trial.
Manifest manifest_from_json(std::string_view text);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

/// Invariant checks shared by the reader and writer.
void validate_manifest(const Manifest& manifest);

// ---------------------------------------------------------------------------
// Trial records

struct TopToken {
    std::string token;
    double logprob = 0.0;

    friend bool operator==(const TopToken&, const TopToken&) = default;
};

struct TrialRecord {
    std::string trial_id;
    std::string model_id;
    std::string answer_text;
    double logprob_second_correct = 0.0;  // natural log
    std::optional<double> logprob_first_correct;
    std::optional<std::vector<TopToken>> topk_second;
    std::optional<std::string> ablation_id;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

std::string record_to_json_line(const TrialRecord& record);
TrialRecord record_from_json_line(std::string_view line);
std::string records_to_jsonl(std::span<const TrialRecord> records);
std::vector<TrialRecord> records_from_jsonl(std::string_view text);
void write_records(std::span<const TrialRecord> records, const std::filesystem::path& path);
std::vector<TrialRecord> read_records(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Sparse activations (SSAF)

struct FeatureKey {
    std::uint16_t layer = 0;
    std::uint32_t feature_id = 0;

    friend constexpr auto operator<=>(const FeatureKey&, const FeatureKey&) = default;
};

struct ActivationRecord {
    std::uint16_t layer = 0;
    std::uint32_t token_index = 0;
    std::uint32_t feature_id = 0;
    double value = 0.0;

    FeatureKey key() const noexcept { return {layer, feature_id}; }
    friend bool operator==(const ActivationRecord&, const ActivationRecord&) = default;
};

struct SparseActivationSet {
    std::string trial_id;
    std::vector<ActivationRecord> records;

    friend bool operator==(const SparseActivationSet&, const SparseActivationSet&) = default;
};

inline constexpr std::size_t kSsafRecordSize = 18;
inline constexpr std::uint8_t kSsafVersion = 0x01;

enum class ActivationFormatErrorKind {
    BadMagic,
    UnsupportedVersion,
    BadHeader,
    Truncated,
    TrailingData,
    DuplicateKey,
    NonFiniteValue,
};

std::string_view to_string(ActivationFormatErrorKind kind) noexcept;

class ActivationFormatError : public Error {
public:
    ActivationFormatError(ActivationFormatErrorKind kind, const std::string& message)
        : Error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}
    ActivationFormatErrorKind kind() const noexcept { return kind_; }

private:
    ActivationFormatErrorKind kind_;
};

/// Size of the header for a given trial id: 8 + 2 + id bytes + 8.
std::size_t ssaf_header_size(std::string_view trial_id) noexcept;

/// Throws ActivationFormatError(DuplicateKey/NonFiniteValue) on invariant violations.
std::vector<std::uint8_t> encode_activations(const SparseActivationSet& set);
SparseActivationSet decode_activations(std::span<const std::uint8_t> bytes);
void write_activations(const SparseActivationSet& set, const std::filesystem::path& path);
SparseActivationSet read_activations(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Ablation plans

struct AblationPlan {
    std::string ablation_id;
    std::string mode{"zero"};
    std::vector<FeatureKey> features;

    friend bool operator==(const AblationPlan&, const AblationPlan&) = default;
};

void validate_plan(const AblationPlan& plan);
std::string plan_to_json(const AblationPlan& plan);
AblationPlan plan_from_json(std::string_view text);
void write_plan(const AblationPlan& plan, const std::filesystem::path& path);
AblationPlan read_plan(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Record validation

struct LogprobViolation {
    std::string trial_id;
    std::string field;
    double value = 0.0;
};

struct DuplicateRecord {
    std::string trial_id;
    std::string model_id;
    std::string ablation_id;
};

struct MissingTrial {
    std::string model_id;
    std::string ablation_id;
    std::string trial_id;
    Condition condition = Condition::CC;
};

struct ValidationReport {
    std::vector<std::string> unknown_trial_ids;
    std::vector<LogprobViolation> positive_logprobs;
    std::vector<DuplicateRecord> duplicates;
    std::vector<MissingTrial> missing;

    bool empty() const noexcept {
        return unknown_trial_ids.empty() && positive_logprobs.empty() && duplicates.empty() &&
               missing.empty();
    }
    /// Missing trials per condition, all four conditions present.
    std::map<Condition, std::size_t> missing_by_condition() const;
    std::string to_json() const;
};

/// Missing trials are reported per (model_id, ablation_id) group present in
/// `records`; with no records at all every manifest trial is missing.
ValidationReport validate_records(std::span<const TrialRecord> records, const Manifest& manifest);

// ---------------------------------------------------------------------------

std::string read_text_file(const std::filesystem::path& path);
std::vector<std::uint8_t> read_binary_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);
void write_binary_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace seqstroop
