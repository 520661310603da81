#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "seqstroop/behavior.hpp"
#include "seqstroop/interp.hpp"
#include "seqstroop/refmodel.hpp"
#include "seqstroop/stimulus.hpp"

namespace seqstroop::app {

inline constexpr std::string_view kVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

struct GenConfig {
    std::filesystem::path out;
    std::vector<Arrangement> arrangements{Arrangement::LeftRight, Arrangement::TopBottom};
    std::vector<ColorTerm> colorset = canonical_colors();
    std::optional<double> font_size;
    bool antialias = false;
    bool system_prompt = true;
    bool svg = false;
    std::uint64_t seed = 0;
    std::string experiment_id{"seqstroop"};
};

/// Writes `<out>/<arrangement>/manifest.json` and `images/<id>.png` per arrangement.
void cmd_gen(const GenConfig& config);

struct MockRunConfig {
    std::filesystem::path manifest;
    std::filesystem::path out;
    refmodel::RefModelParams params;
    refmodel::SyntheticDumpConfig dumps;
    std::uint64_t seed = 7;
    std::optional<std::filesystem::path> ablation;
};

/// Writes `<out>/records.jsonl` and `<out>/dumps/<trial_id>.ssaf`.
void cmd_mock_run(const MockRunConfig& config);

struct AnalyzeConfig {
    std::filesystem::path manifest;
    std::filesystem::path records;
    std::filesystem::path out;
    std::optional<std::string> model_id;
    std::optional<std::string> ablation_id;
    std::optional<std::filesystem::path> ablated_records;
    BootstrapOptions bootstrap;
};

/// Returns kExitValidation (after writing validation_report.json) when the
/// records fail validation.
int cmd_analyze(const AnalyzeConfig& config);

struct SupernodesConfig {
    std::filesystem::path manifest;
    std::filesystem::path dumps;
    std::filesystem::path out;
    std::vector<std::string> analyses{"color:red", "text:red", "conflict"};
    std::optional<std::string> pred_a;  // custom analysis, added as "custom"
    std::optional<std::string> pred_b;
    interp::TokenSpan span;
    interp::WordSpans word_spans = refmodel::SyntheticLayout::word_spans();
    interp::AnalysisOptions options;
};

/// Writes `<out>/supernodes.json` with every analysis plus color/text overlaps.
void cmd_supernodes(const SupernodesConfig& config);

struct AblatePlanConfig {
    std::filesystem::path supernodes;
    std::filesystem::path out;
    std::string analysis{"conflict"};
    std::optional<std::string> supernode_id;
    std::size_t index = 0;  // used when no id is given
};

/// Writes `<out>/ablation_plan.json`.
void cmd_ablate_plan(const AblatePlanConfig& config);

/// Loads `<dir>/<trial_id>.ssaf` for every manifest trial that has one.
std::vector<SparseActivationSet> load_dumps(const Manifest& manifest, const std::filesystem::path& dir);

}  // namespace seqstroop::app
