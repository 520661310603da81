// seqstroop: stimulus generation, mock runs and analyses for the sequential
// two-word Stroop task.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "seqstroop/commands.hpp"
#include "seqstroop/error.hpp"

namespace {

using namespace seqstroop;

std::vector<Arrangement> parse_arrangements(const std::string& s) {
    if (s == "both") return {Arrangement::LeftRight, Arrangement::TopBottom};
    auto a = parse_arrangement(s);
    if (!a) throw InvalidInput("unknown arrangement '" + s + "' (left-right, top-bottom or both)");
    return {*a};
}

void add_refmodel_flags(CLI::App* cmd, refmodel::RefModelParams& p) {
    cmd->add_option("--alpha", p.alpha, "Color-route gain")->capture_default_str();
    cmd->add_option("--beta", p.beta, "Word-route gain")->capture_default_str();
    cmd->add_option("--gamma", p.gamma, "Word suppression per unit control")->capture_default_str();
    cmd->add_option("--g0", p.g0, "Baseline control")->capture_default_str();
    cmd->add_option("--kappa", p.kappa, "Conflict-to-control gain")->capture_default_str();
    cmd->add_option("--lambda", p.lambda, "Logit temperature")->capture_default_str();
}

void add_graph_flags(CLI::App* cmd, interp::AnalysisOptions& o) {
    cmd->add_option("--top-k", o.top_k, "Features kept per summary tensor")->capture_default_str();
    cmd->add_option("--min-jaccard", o.graph.min_jaccard, "Edge threshold")->capture_default_str();
    cmd->add_option("--activation-threshold", o.graph.activation_threshold,
                    "Occurrence threshold on activation values")
        ->capture_default_str();
    cmd->add_option("--min-size", o.min_size, "Smallest supernode kept")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sequential two-word Stroop stimuli, reference model and feature analyses"};
    app.set_version_flag("--version", std::string(app::kVersion));
    app.require_subcommand(1);

    // gen
    app::GenConfig gen;
    std::string gen_arrangement = "both";
    std::string gen_colors;
    double gen_font_size = 0.0;
    auto* gen_cmd = app.add_subcommand("gen", "Enumerate stimuli, render images and write manifests");
    gen_cmd->add_option("--out", gen.out, "Output directory")->required();
    gen_cmd->add_option("--arrangement", gen_arrangement, "left-right, top-bottom or both")->capture_default_str();
    gen_cmd->add_option("--colors", gen_colors, "Comma-separated subset of the canonical colors");
    gen_cmd->add_option("--font-size", gen_font_size, "Font size in pixels (default 48)");
    gen_cmd->add_flag("--antialias", gen.antialias, "4x4 supersampled glyph edges");
    gen_cmd->add_flag("--svg", gen.svg, "Also write an SVG next to each PNG");
    gen_cmd->add_flag("!--no-system-prompt", gen.system_prompt, "Use the abbreviated user-only prompt");
    gen_cmd->add_option("--seed", gen.seed, "Recorded in run metadata; generation is seed-free")->capture_default_str();

    // mock-run
    app::MockRunConfig mock;
    std::string mock_ablation;
    auto* mock_cmd = app.add_subcommand("mock-run", "Reference-model records and synthetic activation dumps");
    mock_cmd->add_option("--manifest", mock.manifest, "Manifest JSON")->required();
    mock_cmd->add_option("--out", mock.out, "Output directory")->required();
    mock_cmd->add_option("--seed", mock.seed, "Noise seed for the synthetic dumps")->capture_default_str();
    mock_cmd->add_option("--ablation", mock_ablation, "Ablation plan JSON");
    mock_cmd->add_option("--noise-prob", mock.dumps.noise_activation_prob, "Noise activation probability")
        ->capture_default_str();
    add_refmodel_flags(mock_cmd, mock.params);

    // analyze
    app::AnalyzeConfig an;
    std::string an_model, an_ablation, an_ablated;
    auto* an_cmd = app.add_subcommand("analyze", "Condition statistics and conflict adaptation");
    an_cmd->add_option("--manifest", an.manifest, "Manifest JSON")->required();
    an_cmd->add_option("--records", an.records, "Trial records JSONL")->required();
    an_cmd->add_option("--out", an.out, "Output directory")->required();
    an_cmd->add_option("--model", an_model, "Model id when records hold several");
    an_cmd->add_option("--ablation-id", an_ablation, "Analyze this ablation instead of the unablated run");
    an_cmd->add_option("--ablated-records", an_ablated, "Ablated records for a fold-change table");
    an_cmd->add_option("--seed", an.bootstrap.seed, "Bootstrap seed")->capture_default_str();
    an_cmd->add_option("--resamples", an.bootstrap.resamples, "Bootstrap resamples")->capture_default_str();
    an_cmd->add_option("--confidence", an.bootstrap.confidence, "Bootstrap interval level")->capture_default_str();

    // supernodes
    app::SupernodesConfig sn;
    std::vector<std::string> sn_analyses;
    std::string sn_pred_a, sn_pred_b, sn_span = "all", sn_w1 = "2:4", sn_w2 = "4:6";
    auto* sn_cmd = app.add_subcommand("supernodes", "Summary tensors, coactivation graphs and supernodes");
    sn_cmd->add_option("--manifest", sn.manifest, "Manifest JSON")->required();
    sn_cmd->add_option("--dumps", sn.dumps, "Directory of <trial_id>.ssaf files")->required();
    sn_cmd->add_option("--out", sn.out, "Output directory")->required();
    sn_cmd->add_option("--analysis", sn_analyses,
                       "Preset: color:<c>, text:<c> or conflict (repeatable; default color:red text:red conflict)");
    sn_cmd->add_option("--pred-a", sn_pred_a, "Custom predicate, e.g. \"c1 == red, t1 != red\"");
    sn_cmd->add_option("--pred-b", sn_pred_b, "Custom baseline predicate");
    sn_cmd->add_option("--span", sn_span, "Token span of the custom analysis: all or LO:HI")->capture_default_str();
    sn_cmd->add_option("--word1-span", sn_w1, "Token span of word 1")->capture_default_str();
    sn_cmd->add_option("--word2-span", sn_w2, "Token span of word 2")->capture_default_str();
    add_graph_flags(sn_cmd, sn.options);

    // ablate-plan
    app::AblatePlanConfig ap;
    std::string ap_id;
    auto* ap_cmd = app.add_subcommand("ablate-plan", "Zero-ablation plan for one supernode");
    ap_cmd->add_option("--supernodes", ap.supernodes, "supernodes.json from the supernodes subcommand")->required();
    ap_cmd->add_option("--out", ap.out, "Output directory")->required();
    ap_cmd->add_option("--analysis", ap.analysis, "Analysis holding the supernode")->capture_default_str();
    ap_cmd->add_option("--supernode", ap_id, "Supernode id");
    ap_cmd->add_option("--index", ap.index, "Supernode index when no id is given")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // CLI11 returns 0 for --help and --version, 106/109 etc. for usage errors.
        const int rc = app.exit(e);
        return rc == 0 ? app::kExitOk : app::kExitValidation;
    }

    try {
        if (gen_cmd->parsed()) {
            gen.arrangements = parse_arrangements(gen_arrangement);
            if (!gen_colors.empty()) gen.colorset = parse_colorset(gen_colors);
            if (gen_cmd->count("--font-size")) gen.font_size = gen_font_size;
            app::cmd_gen(gen);
        } else if (mock_cmd->parsed()) {
            if (!mock_ablation.empty()) mock.ablation = mock_ablation;
            for (const auto& w : mock.params.warnings()) std::cerr << "warning: " << w << "\n";
            app::cmd_mock_run(mock);
        } else if (an_cmd->parsed()) {
            if (!an_model.empty()) an.model_id = an_model;
            if (!an_ablation.empty()) an.ablation_id = an_ablation;
            if (!an_ablated.empty()) an.ablated_records = an_ablated;
            const int rc = app::cmd_analyze(an);
            if (rc != app::kExitOk) {
                std::cerr << "error: records failed validation; see "
                          << (an.out / "validation_report.json").string() << "\n";
            }
            return rc;
        } else if (sn_cmd->parsed()) {
            if (!sn_analyses.empty() || !sn_pred_a.empty()) sn.analyses = sn_analyses;
            if (!sn_pred_a.empty()) sn.pred_a = sn_pred_a;
            if (!sn_pred_b.empty()) sn.pred_b = sn_pred_b;
            sn.span = interp::TokenSpan::parse(sn_span);
            sn.word_spans = {interp::TokenSpan::parse(sn_w1), interp::TokenSpan::parse(sn_w2)};
            app::cmd_supernodes(sn);
        } else if (ap_cmd->parsed()) {
            if (!ap_id.empty()) ap.supernode_id = ap_id;
            app::cmd_ablate_plan(ap);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return app::kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return app::kExitValidation;
    }
    return app::kExitOk;
}
