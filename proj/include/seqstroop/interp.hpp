#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqstroop/protocol.hpp"
#include "seqstroop/stimulus.hpp"

namespace seqstroop::interp {

// ---------------------------------------------------------------------------
// Trial predicates over (c1, t1, c2, t2): ink and text of each word.

enum class Slot : std::uint8_t { C1, T1, C2, T2 };

struct SlotAtom {
    Slot slot = Slot::C1;
    std::string color;
    bool equal = true;

    friend bool operator==(const SlotAtom&, const SlotAtom&) = default;
};

/// `c<word> == t<word>` or `c<word> != t<word>`.
struct CongruencyAtom {
    int word = 1;  // 1 or 2
    bool equal = true;

    friend bool operator==(const CongruencyAtom&, const CongruencyAtom&) = default;
};

struct TrialPredicate {
    std::vector<SlotAtom> slot_atoms;
    std::vector<CongruencyAtom> congruency_atoms;

    friend bool operator==(const TrialPredicate&, const TrialPredicate&) = default;
};

/// Parses "c1 == red, t1 != RED, c2 != t2". Color names are case-insensitive
/// and must belong to `colorset`. A blank string matches every trial. Throws
/// InvalidInput.
TrialPredicate parse_predicate(std::string_view text,
                               std::span<const ColorTerm> colorset = canonical_colors());

/// Canonical text form; text slots print uppercase.
std::string to_string(const TrialPredicate& pred);

/// Throws InvalidInput when an atom names a color outside `colorset`.
bool eval_predicate(const TrialPredicate& pred, const StimulusSpec& spec,
                    std::span<const ColorTerm> colorset = canonical_colors());

/// True iff some disjoint sequence over `colorset` satisfies `pred`.
bool satisfiable(const TrialPredicate& pred, std::span<const ColorTerm> colorset);

std::size_t count_matching(const TrialPredicate& pred, std::span<const StimulusSpec> specs,
                           std::span<const ColorTerm> colorset = canonical_colors());

// ---------------------------------------------------------------------------
// Summary tensors

/// Token positions averaged per trial. `all` uses every token index present
/// in any supplied dump; otherwise the half-open range [begin, end).
struct TokenSpan {
    bool all = true;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;

    static TokenSpan everything() { return {}; }
    static TokenSpan range(std::uint32_t b, std::uint32_t e) { return {false, b, e}; }

    /// "all" or "LO:HI".
    static TokenSpan parse(std::string_view text);
    std::string to_string() const;

    friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

inline constexpr double kDefaultPruneEpsilon = 1e-6;

struct SummaryTensor {
    std::map<FeatureKey, double> entries;
    std::string pred_a;
    std::optional<std::string> pred_b;  // absent for a plain mean
    std::size_t trials_a = 0;
    std::size_t trials_b = 0;
    TokenSpan token_span;
    std::size_t span_length = 0;
};

class EmptySelectionError : public Error {
public:
    explicit EmptySelectionError(std::string predicate)
        : Error("predicate selects no trials with activations: " + predicate),
          predicate_(std::move(predicate)) {}
    const std::string& predicate() const noexcept { return predicate_; }

private:
    std::string predicate_;
};

/// Mean over pred_a trials of the per-trial token-span mean, minus the same over
/// pred_b trials (when given). Absent keys count as zero; entries with
/// |value| < prune_epsilon are dropped.
SummaryTensor summary_tensor(std::span<const SparseActivationSet> activations,
                             const Manifest& manifest, const TrialPredicate& pred_a,
                             const std::optional<TrialPredicate>& pred_b,
                             const TokenSpan& span = TokenSpan::everything(),
                             double prune_epsilon = kDefaultPruneEpsilon);

/// Top `top_k` entries by |value|; ties go to the lower (layer, feature_id).
std::vector<FeatureKey> select_features(const SummaryTensor& tensor, std::size_t top_k);

// ---------------------------------------------------------------------------
// Coactivation graph

struct Edge {
    std::size_t a = 0;  // indices into CoactivationGraph::nodes, a < b
    std::size_t b = 0;
    double score = 0.0;  // Jaccard of occurrence sets

    friend bool operator==(const Edge&, const Edge&) = default;
};

struct CoactivationGraph {
    std::vector<FeatureKey> nodes;  // sorted, unique
    std::vector<Edge> edges;        // sorted by (a, b)
    std::vector<std::size_t> occurrences;  // occurrence-set size per node

    /// Score of the edge between two nodes, nullopt when absent.
    std::optional<double> score(const FeatureKey& x, const FeatureKey& y) const;
};

struct GraphOptions {
    double activation_threshold = 0.0;
    double min_jaccard = 0.5;
};

/// Edge between two nodes iff the Jaccard similarity of their (trial, token)
/// occurrence sets, {value > activation_threshold}, is at least min_jaccard.
CoactivationGraph coactivation_graph(std::span<const SparseActivationSet> activations,
                                     std::span<const FeatureKey> nodes,
                                     const GraphOptions& options = {});

// ---------------------------------------------------------------------------
// Supernodes

struct Supernode {
    std::string id;
    std::vector<FeatureKey> members;  // sorted
    std::pair<std::uint16_t, std::uint16_t> layer_span{0, 0};

    friend bool operator==(const Supernode&, const Supernode&) = default;
};

/// Deterministic id from the sorted member list.
std::string supernode_id(std::span<const FeatureKey> sorted_members);

/// Connected components with at least `min_size` members, ordered by smallest member.
std::vector<Supernode> extract_supernodes(const CoactivationGraph& graph, std::size_t min_size = 2);

struct OverlapEntry {
    std::string a_id;
    std::string b_id;
    std::vector<FeatureKey> shared;
    double jaccard = 0.0;
    std::pair<std::uint16_t, std::uint16_t> a_span;
    std::pair<std::uint16_t, std::uint16_t> b_span;
};

/// One entry per (a, b) pair, row-major in input order.
std::vector<OverlapEntry> supernode_overlap(std::span<const Supernode> a,
                                            std::span<const Supernode> b);

/// Zero-ablation of exactly the supernode's members. Throws InvalidInput when empty.
AblationPlan ablation_plan(const Supernode& supernode);

// ---------------------------------------------------------------------------
// Analyses and JSON reports

struct AnalysisOptions {
    std::size_t top_k = 300;
    std::size_t min_size = 2;
    double prune_epsilon = kDefaultPruneEpsilon;
    GraphOptions graph;
};

struct AnalysisSpec {
    std::string name;
    TrialPredicate pred_a;
    std::optional<TrialPredicate> pred_b;
    TokenSpan span;
};

/// Where the two words live in a dump's token sequence; used by the presets.
struct WordSpans {
    TokenSpan word1 = TokenSpan::range(2, 4);
    TokenSpan word2 = TokenSpan::range(4, 6);
};

/// Presets: "color:<c>" isolates ink c on word 1, "text:<c>" the text C on
/// word 1, "conflict" contrasts II against CI on word 2.
AnalysisSpec analysis_preset(std::string_view name, const WordSpans& spans,
                             std::span<const ColorTerm> colorset = canonical_colors());

struct AnalysisResult {
    AnalysisSpec spec;
    SummaryTensor tensor;
    std::vector<FeatureKey> selected;
    CoactivationGraph graph;
    std::vector<Supernode> supernodes;
};

/// summary_tensor -> select_features -> coactivation_graph -> extract_supernodes.
/// The graph is built over the dumps of trials matched by either predicate.
AnalysisResult run_analysis(const AnalysisSpec& spec,
                            std::span<const SparseActivationSet> activations,
                            const Manifest& manifest, const AnalysisOptions& options = {});

std::string supernodes_report_json(std::span<const AnalysisResult> analyses,
                                   std::span<const std::pair<std::string, std::string>> overlap_pairs,
                                   const AnalysisOptions& options);

/// Reads the supernodes of one analysis back from a report.
std::vector<Supernode> supernodes_from_report(std::string_view json, std::string_view analysis);

}  // namespace seqstroop::interp
