#pragma once

#include "kgnbr/oracle_models.hpp"
#include "kgnbr/verbalizer.hpp"

#include <string>
#include <vector>

namespace kgnbr {

// One query with its full (capped, sorted) verbalized neighborhood, before budget trimming.
struct AblationItem {
    DatasetRecord record;  // ids and target; input_text is rebuilt for every variant
    std::string task;
    std::vector<std::string> neighbors;
};

enum class AblationMode { RelevantFirst, Random };
AblationMode parse_ablation_mode(std::string_view s);

// ExactMatch: top candidate equals the target. TargetProbability: exp of the best log-prob
// assigned to the target text (0 when the target is not generated).
enum class AblationMetric { ExactMatch, TargetProbability };
AblationMetric parse_ablation_metric(std::string_view s);

double query_metric(const PredictionSet& p, std::string_view target_text, AblationMetric metric);

struct AblationPoint {
    std::size_t removed;
    double metric;  // mean over items
};

// Removal order per item. RelevantFirst: neighbors included in the baseline input by descending
// leave-one-out relevance (baseline metric minus metric without that neighbor; ties keep
// neighborhood order), then the rest in neighborhood order. Random: seeded shuffle keyed by
// query id.
std::vector<std::size_t> removal_order(const AblationItem& item, const ModelFn& model,
                                       AblationMode mode, AblationMetric metric,
                                       const TokenBudget& budget, std::uint64_t seed);

// For every removal count, drops that many neighbors (clamped to the neighborhood size),
// reassembles the input under the budget and averages the metric over items.
std::vector<AblationPoint> neighbor_ablation(std::span<const AblationItem> items,
                                             const ModelFn& model, AblationMode mode,
                                             std::span<const std::size_t> removals,
                                             std::uint64_t seed, AblationMetric metric,
                                             const TokenBudget& budget);

AblationItem make_ablation_item(const IndexedQuery& q, const KnowledgeGraph& neighborhood_graph,
                                const Verbalizer& verbalizer, const RelationSimilarity& similarity,
                                std::size_t cap);

}  // namespace kgnbr
