#include "seqstroop/commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <system_error>
#include <thread>

#include <json.hpp>

#include "seqstroop/render.hpp"

namespace seqstroop::app {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

void require_file(const fs::path& path, std::string_view what) {
    if (!fs::is_regular_file(path)) {
        throw IoError(std::string(what) + " not found: " + path.string());
    }
}

void require_dir(const fs::path& path, std::string_view what) {
    if (!fs::is_directory(path)) {
        throw IoError(std::string(what) + " is not a directory: " + path.string());
    }
}

// Stable key order, no timestamps: identical inputs give identical bytes.
void write_metadata(const fs::path& out, std::string_view subcommand, ordered_json params) {
    ordered_json meta;
    meta["tool"] = "seqstroop";
    meta["version"] = kVersion;
    meta["subcommand"] = subcommand;
    meta["parameters"] = std::move(params);
    write_text_file(out / "run_metadata.json", meta.dump(2) + "\n");
}

ordered_json params_json(const refmodel::RefModelParams& p) {
    ordered_json j;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
    j["g0"] = p.g0;
    j["kappa"] = p.kappa;
    j["lambda"] = p.lambda;
    return j;
}

ordered_json dumps_json(const refmodel::SyntheticDumpConfig& c) {
    ordered_json j;
    j["color_group"] = c.color_group;
    j["text_group"] = c.text_group;
    j["conflict_group"] = c.conflict_group;
    j["shared_features"] = c.shared_features;
    j["noise_features"] = c.noise_features;
    j["noise_activation_prob"] = c.noise_activation_prob;
    j["conflict_incongruent"] = c.conflict_incongruent;
    j["conflict_congruent"] = c.conflict_congruent;
    j["target_color"] = c.target_color;
    return j;
}

// Renders on a small worker pool; results are indexed by spec so output order
// and bytes do not depend on scheduling.
std::vector<std::vector<std::uint8_t>> render_all(std::span<const StimulusSpec> specs, const RenderConfig& rc) {
    std::vector<std::vector<std::uint8_t>> out(specs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto work = [&] {
        for (std::size_t i = next++; i < specs.size(); i = next++) {
            try {
                out[i] = render_stimulus(specs[i], rc);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned n = std::clamp(std::thread::hardware_concurrency(), 1u, 16u);
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(work);
    work();
    pool.clear();
    if (failure) std::rethrow_exception(failure);
    return out;
}

std::string colorset_csv(std::span<const ColorTerm> colors) {
    std::string out;
    for (const auto& c : colors) {
        if (!out.empty()) out += ',';
        out += c.name;
    }
    return out;
}

}  // namespace

void cmd_gen(const GenConfig& config) {
    validate_colorset(config.colorset);
    if (config.arrangements.empty()) throw InvalidInput("at least one arrangement is required");
    ensure_dir(config.out);

    for (Arrangement arr : config.arrangements) {
        RenderConfig rc = RenderConfig::defaults(arr);
        if (config.font_size) rc.font_size = *config.font_size;
        rc.antialias = config.antialias;
        rc.validate();

        const fs::path dir = config.out / std::string(to_string(arr));
        ensure_dir(dir / "images");

        Manifest m;
        m.experiment_id = config.experiment_id + "-" + std::string(to_string(arr));
        m.colorset = config.colorset;
        m.arrangement = arr;
        m.render_config = rc;
        const auto prompts = build_prompts(arr, config.system_prompt);
        auto specs = enumerate_sequences(config.colorset, arr);
        const auto pngs = render_all(specs, rc);
        for (std::size_t i = 0; i < specs.size(); ++i) {
            auto& spec = specs[i];
            write_binary_file(dir / "images" / (spec.id + ".png"), pngs[i]);
            if (config.svg) write_text_file(dir / "images" / (spec.id + ".svg"), render_svg(spec, rc));
            m.trials.push_back(make_trial(std::move(spec), prompts));
        }
        write_manifest(m, dir / "manifest.json");
    }

    ordered_json p;
    ordered_json arrs = ordered_json::array();
    for (Arrangement a : config.arrangements) arrs.push_back(to_string(a));
    p["arrangements"] = arrs;
    p["colors"] = colorset_csv(config.colorset);
    p["font_size"] = config.font_size ? ordered_json(*config.font_size) : ordered_json(nullptr);
    p["antialias"] = config.antialias;
    p["system_prompt"] = config.system_prompt;
    p["svg"] = config.svg;
    p["seed"] = config.seed;
    write_metadata(config.out, "gen", std::move(p));
}

void cmd_mock_run(const MockRunConfig& config) {
    require_file(config.manifest, "manifest");
    if (config.ablation) require_file(*config.ablation, "ablation plan");
    const Manifest manifest = read_manifest(config.manifest);
    std::optional<AblationPlan> plan;
    if (config.ablation) plan = read_plan(*config.ablation);
    ensure_dir(config.out / "dumps");

    const auto run = refmodel::run_mock_experiment(manifest, config.params, config.seed, config.dumps, plan);
    write_records(run.records, config.out / "records.jsonl");
    for (const auto& d : run.dumps) write_activations(d, config.out / "dumps" / (d.trial_id + ".ssaf"));

    ordered_json p;
    p["manifest"] = config.manifest.filename().string();
    p["seed"] = config.seed;
    p["model"] = params_json(config.params);
    p["dumps"] = dumps_json(config.dumps);
    p["ablation_id"] = plan ? ordered_json(plan->ablation_id) : ordered_json(nullptr);
    write_metadata(config.out, "mock-run", std::move(p));
}

namespace {

std::string pick_model(std::span<const TrialRecord> records, const std::optional<std::string>& wanted) {
    std::set<std::string> models;
    for (const auto& r : records) models.insert(r.model_id);
    if (wanted) {
        if (!models.count(*wanted)) throw InvalidInput("no records for model '" + *wanted + "'");
        return *wanted;
    }
    if (models.size() != 1) {
        std::string list;
        for (const auto& m : models) list += (list.empty() ? "" : ", ") + m;
        throw InvalidInput("records hold " + std::to_string(models.size()) +
                           " models; choose one with --model (" + list + ")");
    }
    return *models.begin();
}

std::optional<std::string> single_ablation(std::span<const TrialRecord> records, const std::string& model) {
    std::set<std::string> ids;
    for (const auto& r : records) {
        if (r.model_id == model && r.ablation_id) ids.insert(*r.ablation_id);
    }
    if (ids.size() > 1) throw InvalidInput("ablated records hold more than one ablation_id");
    if (ids.empty()) return std::nullopt;
    return *ids.begin();
}

}  // namespace

int cmd_analyze(const AnalyzeConfig& config) {
    require_file(config.manifest, "manifest");
    require_file(config.records, "records");
    if (config.ablated_records) require_file(*config.ablated_records, "ablated records");
    const Manifest manifest = read_manifest(config.manifest);
    const auto all = read_records(config.records);
    ensure_dir(config.out);

    const auto report = validate_records(all, manifest);
    write_text_file(config.out / "validation_report.json", report.to_json() + "\n");
    if (!report.empty()) return kExitValidation;

    const std::string model = pick_model(all, config.model_id);
    const auto records = filter_records(all, model, config.ablation_id);
    if (records.empty()) throw InvalidInput("no records left after filtering by model and ablation");
    const auto stats = aggregate(records, manifest);
    write_text_file(config.out / "condition_stats.csv", emit_condition_table(stats));
    write_text_file(config.out / "condition_stats.json", stats_to_json(stats) + "\n");

    const auto adaptation = conflict_adaptation(stats, records, manifest, config.bootstrap);
    write_text_file(config.out / "adaptation.csv", emit_adaptation_table(adaptation));
    write_text_file(config.out / "adaptation_report.json", adaptation.to_json() + "\n");

    std::optional<std::string> ablated_id;
    if (config.ablated_records) {
        const auto abl_all = read_records(*config.ablated_records);
        const auto abl_report = validate_records(abl_all, manifest);
        write_text_file(config.out / "ablated_validation_report.json", abl_report.to_json() + "\n");
        if (!abl_report.empty()) return kExitValidation;
        ablated_id = single_ablation(abl_all, model);
        if (!ablated_id) throw InvalidInput("ablated records carry no ablation_id for model '" + model + "'");
        const auto abl = filter_records(abl_all, model, ablated_id);
        const auto abl_stats = aggregate(abl, manifest);
        write_text_file(config.out / "ablation_comparison.csv", emit_ablation_table(stats, abl_stats));
    }

    ordered_json p;
    p["manifest"] = config.manifest.filename().string();
    p["records"] = config.records.filename().string();
    p["model_id"] = model;
    p["ablation_id"] = config.ablation_id ? ordered_json(*config.ablation_id) : ordered_json(nullptr);
    p["ablated_ablation_id"] = ablated_id ? ordered_json(*ablated_id) : ordered_json(nullptr);
    p["bootstrap_resamples"] = config.bootstrap.resamples;
    p["bootstrap_confidence"] = config.bootstrap.confidence;
    p["bootstrap_seed"] = config.bootstrap.seed;
    write_metadata(config.out, "analyze", std::move(p));
    return kExitOk;
}

std::vector<SparseActivationSet> load_dumps(const Manifest& manifest, const fs::path& dir) {
    std::vector<SparseActivationSet> out;
    for (const auto& t : manifest.trials) {
        const fs::path p = dir / (t.spec.id + ".ssaf");
        if (!fs::is_regular_file(p)) continue;
        auto set = read_activations(p);
        if (set.trial_id != t.spec.id) {
            throw ValidationError("trial_id", t.spec.id, "dump header names trial '" + set.trial_id + "'");
        }
        out.push_back(std::move(set));
    }
    return out;
}

void cmd_supernodes(const SupernodesConfig& config) {
    require_file(config.manifest, "manifest");
    require_dir(config.dumps, "dump directory");
    if (config.pred_b && !config.pred_a) {
        throw InvalidInput("--pred-b requires --pred-a");
    }
    const Manifest manifest = read_manifest(config.manifest);

    std::vector<interp::AnalysisSpec> specs;
    for (const auto& name : config.analyses) {
        specs.push_back(interp::analysis_preset(name, config.word_spans, manifest.colorset));
    }
    if (config.pred_a) {
        interp::AnalysisSpec custom;
        custom.name = "custom";
        custom.pred_a = interp::parse_predicate(*config.pred_a, manifest.colorset);
        if (config.pred_b) custom.pred_b = interp::parse_predicate(*config.pred_b, manifest.colorset);
        custom.span = config.span;
        specs.push_back(std::move(custom));
    }
    if (specs.empty()) throw InvalidInput("no analyses requested");

    const auto dumps = load_dumps(manifest, config.dumps);
    if (dumps.empty()) throw InvalidInput("no activation dumps found in " + config.dumps.string());
    ensure_dir(config.out);

    std::vector<interp::AnalysisResult> results;
    for (const auto& s : specs) results.push_back(interp::run_analysis(s, dumps, manifest, config.options));

    // Pair every color analysis with every text analysis.
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const auto& a : specs) {
        if (!a.name.starts_with("color:")) continue;
        for (const auto& b : specs) {
            if (b.name.starts_with("text:")) pairs.emplace_back(a.name, b.name);
        }
    }
    write_text_file(config.out / "supernodes.json",
                    interp::supernodes_report_json(results, pairs, config.options) + "\n");

    ordered_json p;
    p["manifest"] = config.manifest.filename().string();
    p["dumps_loaded"] = dumps.size();
    ordered_json names = ordered_json::array();
    for (const auto& s : specs) names.push_back(s.name);
    p["analyses"] = names;
    p["word1_span"] = config.word_spans.word1.to_string();
    p["word2_span"] = config.word_spans.word2.to_string();
    p["top_k"] = config.options.top_k;
    p["min_jaccard"] = config.options.graph.min_jaccard;
    p["activation_threshold"] = config.options.graph.activation_threshold;
    p["min_size"] = config.options.min_size;
    write_metadata(config.out, "supernodes", std::move(p));
}

void cmd_ablate_plan(const AblatePlanConfig& config) {
    require_file(config.supernodes, "supernodes report");
    const auto sns = interp::supernodes_from_report(read_text_file(config.supernodes), config.analysis);
    const interp::Supernode* chosen = nullptr;
    if (config.supernode_id) {
        auto it = std::find_if(sns.begin(), sns.end(),
                               [&](const interp::Supernode& s) { return s.id == *config.supernode_id; });
        if (it == sns.end()) throw InvalidInput("no supernode '" + *config.supernode_id + "' in " + config.analysis);
        chosen = &*it;
    } else {
        if (config.index >= sns.size()) {
            throw InvalidInput("analysis '" + config.analysis + "' has " + std::to_string(sns.size()) +
                               " supernodes; index " + std::to_string(config.index) + " is out of range");
        }
        chosen = &sns[config.index];
    }
    ensure_dir(config.out);
    write_plan(interp::ablation_plan(*chosen), config.out / "ablation_plan.json");

    ordered_json p;
    p["supernodes"] = config.supernodes.filename().string();
    p["analysis"] = config.analysis;
    p["supernode_id"] = chosen->id;
    write_metadata(config.out, "ablate-plan", std::move(p));
}

}  // namespace seqstroop::app
