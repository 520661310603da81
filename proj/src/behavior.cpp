#include "seqstroop/behavior.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "json.hpp"
#include "seqstroop/rng.hpp"

namespace seqstroop {

using ojson = nlohmann::ordered_json;

std::string_view to_string(AnswerOutcome o) noexcept {
    switch (o) {
        case AnswerOutcome::Correct: return "correct";
        case AnswerOutcome::StroopError: return "stroop_error";
        case AnswerOutcome::Other: return "other";
    }
    return "other";
}

std::vector<std::string> normalize_answer(std::string_view answer_text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : answer_text) {
        const auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur += static_cast<char>(std::tolower(c));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

namespace {

AnswerOutcome judge(const std::optional<std::string>& reported, const WordStimulus& word) {
    if (!reported) return AnswerOutcome::Other;
    if (*reported == word.ink.name) return AnswerOutcome::Correct;
    if (!word.congruent() && *reported == word.text.name) return AnswerOutcome::StroopError;
    return AnswerOutcome::Other;
}

}  // namespace

AnswerClassification classify_answer(std::string_view answer_text, const StimulusSpec& spec,
                                     std::span<const ColorTerm> colorset) {
    AnswerClassification out;
    std::optional<std::string> reported[2];
    std::size_t found = 0;
    for (auto& tok : normalize_answer(answer_text)) {
        if (tok == "ink") out.ink_anomaly = true;
        if (found < 2 && std::any_of(colorset.begin(), colorset.end(),
                                     [&](const ColorTerm& c) { return c.name == tok; })) {
            reported[found++] = std::move(tok);
        }
    }
    out.first = judge(reported[0], spec.word1);
    out.second = judge(reported[1], spec.word2);
    return out;
}

double stable_mean(std::span<const double> values) {
    if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : sorted) sum += v;
    return sum / static_cast<double>(sorted.size());
}

std::vector<TrialRecord> filter_records(std::span<const TrialRecord> records,
                                        std::string_view model_id,
                                        const std::optional<std::string>& ablation_id) {
    std::vector<TrialRecord> out;
    for (const auto& r : records) {
        if (r.model_id == model_id && r.ablation_id == ablation_id) out.push_back(r);
    }
    return out;
}

namespace {

const ManifestTrial& require_trial(const Manifest& manifest, const std::string& trial_id) {
    const auto* t = manifest.find(trial_id);
    if (!t) throw InvalidInput("record references unknown trial '" + trial_id + "'");
    return *t;
}

std::size_t index_of(Condition c) { return static_cast<std::size_t>(c); }

// Second-position logprobs grouped by condition.
std::array<std::vector<double>, 4> logprobs_by_condition(std::span<const TrialRecord> records,
                                                         const Manifest& manifest) {
    std::array<std::vector<double>, 4> out;
    for (const auto& r : records) {
        const auto& t = require_trial(manifest, r.trial_id);
        out[index_of(t.spec.condition)].push_back(r.logprob_second_correct);
    }
    return out;
}

}  // namespace

std::vector<AnswerClassification> classify_records(std::span<const TrialRecord> records,
                                                   const Manifest& manifest) {
    std::vector<AnswerClassification> out;
    out.reserve(records.size());
    for (const auto& r : records) {
        out.push_back(classify_answer(r.answer_text, require_trial(manifest, r.trial_id).spec,
                                      manifest.colorset));
    }
    return out;
}

std::vector<ConditionStats> aggregate(std::span<const TrialRecord> records, const Manifest& manifest,
                                      std::span<const AnswerClassification> classifications) {
    if (classifications.size() != records.size()) {
        throw InvalidInput("one classification per record is required");
    }
    std::array<std::vector<double>, 4> logprobs;
    std::array<std::array<std::size_t, 3>, 4> outcomes{};
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto c = index_of(require_trial(manifest, records[i].trial_id).spec.condition);
        logprobs[c].push_back(records[i].logprob_second_correct);
        ++outcomes[c][static_cast<std::size_t>(classifications[i].second)];
    }
    std::vector<ConditionStats> stats;
    for (Condition cond : kAllConditions) {
        const auto c = index_of(cond);
        ConditionStats s;
        s.condition = cond;
        s.n = logprobs[c].size();
        if (s.n > 0) {
            const auto n = static_cast<double>(s.n);
            s.mean_logprob_second = stable_mean(logprobs[c]);
            s.accuracy_second = static_cast<double>(outcomes[c][0]) / n;
            s.stroop_rate_second = static_cast<double>(outcomes[c][1]) / n;
            s.other_rate_second = static_cast<double>(outcomes[c][2]) / n;
        }
        stats.push_back(s);
    }
    return stats;
}

std::vector<ConditionStats> aggregate(std::span<const TrialRecord> records, const Manifest& manifest) {
    return aggregate(records, manifest, classify_records(records, manifest));
}

std::pair<double, double> bootstrap_delta(std::span<const double> ci, std::span<const double> ii,
                                          const BootstrapOptions& options) {
    if (ci.empty() || ii.empty()) throw InvalidInput("bootstrap needs both groups non-empty");
    if (options.resamples == 0) throw InvalidInput("bootstrap needs at least one resample");
    if (!(options.confidence > 0.0 && options.confidence < 1.0)) {
        throw InvalidInput("confidence must lie in (0, 1)");
    }
    SplitMix64 rng(options.seed);
    auto resample_mean = [&rng](std::span<const double> xs) {
        double sum = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) sum += xs[rng.below(xs.size())];
        return sum / static_cast<double>(xs.size());
    };
    std::vector<double> deltas(options.resamples);
    for (auto& d : deltas) {
        const double m_ci = resample_mean(ci);
        const double m_ii = resample_mean(ii);
        d = m_ii - m_ci;
    }
    std::sort(deltas.begin(), deltas.end());
    auto quantile = [&deltas](double p) {
        const double pos = p * static_cast<double>(deltas.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, deltas.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return deltas[lo] + (deltas[hi] - deltas[lo]) * frac;
    };
    const double tail = (1.0 - options.confidence) / 2.0;
    return {quantile(tail), quantile(1.0 - tail)};
}

AdaptationReport conflict_adaptation(std::span<const ConditionStats> stats,
                                     std::span<const TrialRecord> records, const Manifest& manifest,
                                     const BootstrapOptions& options) {
    auto groups = logprobs_by_condition(records, manifest);
    for (Condition c : {Condition::CI, Condition::II}) {
        if (groups[index_of(c)].empty()) throw MissingConditionError(c);
    }

    // Differences are taken on values centered at a shared reference (the
    // smallest logprob present), so a constant shift of every logprob leaves
    // them bit-identical whenever the shifted inputs are representable.
    double ref = std::numeric_limits<double>::infinity();
    for (const auto& g : groups) {
        for (double v : g) ref = std::min(ref, v);
    }
    std::array<std::vector<double>, 4> centered;
    for (std::size_t c = 0; c < 4; ++c) {
        for (double v : groups[c]) centered[c].push_back(v - ref);
    }
    auto centered_mean = [&](Condition c) { return stable_mean(centered[index_of(c)]); };

    AdaptationReport report;
    report.bootstrap = options;
    report.mean_ci = stable_mean(groups[index_of(Condition::CI)]);
    report.mean_ii = stable_mean(groups[index_of(Condition::II)]);
    report.delta_logprob = centered_mean(Condition::II) - centered_mean(Condition::CI);
    if (!groups[index_of(Condition::CC)].empty() && !groups[index_of(Condition::IC)].empty()) {
        report.gratton_interaction =
            (centered_mean(Condition::CI) - centered_mean(Condition::CC)) -
            (centered_mean(Condition::II) - centered_mean(Condition::IC));
    }
    report.bootstrap_interval =
        bootstrap_delta(centered[index_of(Condition::CI)], centered[index_of(Condition::II)], options);

    report.ceiling_flag = stats.size() >= 4;
    for (Condition c : kAllConditions) {
        const auto it = std::find_if(stats.begin(), stats.end(),
                                     [c](const ConditionStats& s) { return s.condition == c; });
        if (it == stats.end() || it->n == 0 || it->accuracy_second != 1.0) report.ceiling_flag = false;
    }
    return report;
}

std::string AdaptationReport::to_json() const {
    ojson j;
    j["mean_logprob_ci"] = mean_ci;
    j["mean_logprob_ii"] = mean_ii;
    j["delta_logprob"] = delta_logprob;
    j["conflict_adaptation"] = adaptation();
    j["gratton_interaction"] = gratton_interaction ? ojson(*gratton_interaction) : ojson(nullptr);
    j["bootstrap_interval"] = {bootstrap_interval.first, bootstrap_interval.second};
    j["bootstrap"] = {{"method", "percentile"},
                      {"resamples", bootstrap.resamples},
                      {"confidence", bootstrap.confidence},
                      {"seed", bootstrap.seed}};
    j["ceiling_flag"] = ceiling_flag;
    return j.dump(2) + "\n";
}

double fold_change(double before_rate, double after_rate) {
    if (!(before_rate > 0.0)) {
        throw InvalidInput(
            "baseline Stroop error rate is zero; fold change is undefined, report the absolute "
            "rates before and after ablation instead");
    }
    return after_rate / before_rate;
}

double fold_change(const ConditionStats& before, const ConditionStats& after) {
    if (!before.stroop_rate_second || !after.stroop_rate_second) {
        throw InvalidInput("condition " + std::string(to_string(before.condition)) + " has no trials");
    }
    return fold_change(*before.stroop_rate_second, *after.stroop_rate_second);
}

namespace {

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::optional<double> parse_opt(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    return std::stod(cell);
}

constexpr std::string_view kConditionHeader =
    "condition,n,mean_logprob_second,accuracy_second,stroop_rate_second,other_rate_second";

}  // namespace

std::string emit_condition_table(std::span<const ConditionStats> stats) {
    std::string out(kConditionHeader);
    out += '\n';
    for (const auto& s : stats) {
        out += std::string(to_string(s.condition)) + ',' + std::to_string(s.n) + ',' +
               opt_num(s.mean_logprob_second) + ',' + opt_num(s.accuracy_second) + ',' +
               opt_num(s.stroop_rate_second) + ',' + opt_num(s.other_rate_second) + '\n';
    }
    return out;
}

std::vector<ConditionStats> parse_condition_table(std::string_view csv) {
    std::istringstream in{std::string(csv)};
    std::string line;
    if (!std::getline(in, line) || line != kConditionHeader) {
        throw ValidationError("header", "", "unexpected condition table header");
    }
    std::vector<ConditionStats> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        if (cells.size() != 6) throw ValidationError("row", "", "expected 6 cells: " + line);
        const auto cond = parse_condition(cells[0]);
        if (!cond) throw ValidationError("condition", "", "unknown condition '" + cells[0] + "'");
        ConditionStats s;
        s.condition = *cond;
        s.n = std::stoull(cells[1]);
        s.mean_logprob_second = parse_opt(cells[2]);
        s.accuracy_second = parse_opt(cells[3]);
        s.stroop_rate_second = parse_opt(cells[4]);
        s.other_rate_second = parse_opt(cells[5]);
        out.push_back(s);
    }
    return out;
}

std::string emit_adaptation_table(const AdaptationReport& r) {
    std::string out = "metric,value\n";
    out += "mean_logprob_ci," + num(r.mean_ci) + '\n';
    out += "mean_logprob_ii," + num(r.mean_ii) + '\n';
    out += "delta_logprob," + num(r.delta_logprob) + '\n';
    out += "gratton_interaction," + opt_num(r.gratton_interaction) + '\n';
    out += "bootstrap_low," + num(r.bootstrap_interval.first) + '\n';
    out += "bootstrap_high," + num(r.bootstrap_interval.second) + '\n';
    out += "ceiling_flag," + std::string(r.ceiling_flag ? "1" : "0") + '\n';
    return out;
}

std::string stats_to_json(std::span<const ConditionStats> stats) {
    ojson arr = ojson::array();
    auto opt = [](const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); };
    for (const auto& s : stats) {
        arr.push_back({{"condition", std::string(to_string(s.condition))},
                       {"n", s.n},
                       {"mean_logprob_second", opt(s.mean_logprob_second)},
                       {"accuracy_second", opt(s.accuracy_second)},
                       {"stroop_rate_second", opt(s.stroop_rate_second)},
                       {"other_rate_second", opt(s.other_rate_second)}});
    }
    return arr.dump(2) + "\n";
}

std::string emit_ablation_table(std::span<const ConditionStats> before,
                                std::span<const ConditionStats> after) {
    std::string out =
        "condition,n_before,n_after,stroop_rate_before,stroop_rate_after,fold_change,"
        "accuracy_before,accuracy_after\n";
    for (const auto& b : before) {
        const auto a = std::find_if(after.begin(), after.end(),
                                    [&](const ConditionStats& s) { return s.condition == b.condition; });
        if (a == after.end()) continue;
        std::string fold;
        if (b.stroop_rate_second && a->stroop_rate_second && *b.stroop_rate_second > 0.0) {
            fold = num(fold_change(b, *a));
        }
        out += std::string(to_string(b.condition)) + ',' + std::to_string(b.n) + ',' +
               std::to_string(a->n) + ',' + opt_num(b.stroop_rate_second) + ',' +
               opt_num(a->stroop_rate_second) + ',' + fold + ',' + opt_num(b.accuracy_second) +
               ',' + opt_num(a->accuracy_second) + '\n';
    }
    return out;
}

}  // namespace seqstroop
