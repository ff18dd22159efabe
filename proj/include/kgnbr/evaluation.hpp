#pragma once

#include "kgnbr/dataset.hpp"
#include "kgnbr/kg_store.hpp"
#include "kgnbr/text_catalog.hpp"
#include "kgnbr/vector_file.hpp"
#include "kgnbr/verbalizer.hpp"

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kgnbr {

inline constexpr std::size_t kDefaultSampleSize = 50;
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct Candidate {
    std::string text;
    double log_prob = 0.0;  // summed token log-probabilities, <= 0
    friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct PredictionSet {
    std::string query_id;
    std::vector<Candidate> candidates;
    std::size_t k = kDefaultSampleSize;
    friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

// `{"query_id": ..., "candidates": [{"text": ..., "log_prob": ...}]}`. An adapter error entry
// (`"error"` field) parses as an empty candidate list.
std::string to_json_line(const PredictionSet& p);
PredictionSet parse_prediction_record(std::string_view line, std::size_t k = kDefaultSampleSize);
std::vector<PredictionSet> read_predictions(const std::string& path,
                                            std::size_t k = kDefaultSampleSize);
void write_predictions(std::span<const PredictionSet> predictions, const std::string& path);

// 1 iff the texts are byte-equal after NFC and trimming.
int exact_match(std::string_view generated, std::string_view target);

// Highest-scoring candidate (first on ties); nullptr when there are none.
const Candidate* top_candidate(const PredictionSet& p);

// Finite scores of generated entities; every other entity scores -inf.
struct EntityScores {
    std::unordered_map<std::string, double> finite;
    double score(const std::string& entity_id) const {
        auto it = finite.find(entity_id);
        return it == finite.end() ? kNegInf : it->second;
    }
};

// Candidates resolve to entities by exact reverse lookup of their text; unmatched candidates
// are dropped. Duplicates keep the maximum log-probability.
EntityScores scores_from_samples(const PredictionSet& p, const TextCatalog& catalog);

struct RankingResult {
    std::string query_id;
    std::optional<std::size_t> rank;  // nullopt: target was never generated (rank infinity)
    bool filtered = true;

    bool within(std::size_t k) const { return rank && *rank <= k; }
};

// rank = 1 + #{competitors e != target, e not filtered : score(e) >= score(target)}. Ties are
// pessimistic. A target scoring -inf is unranked. The target itself is never filtered.
RankingResult filtered_rank(const std::string& target_id, const EntityScores& scores,
                            const std::unordered_set<std::string>& filter,
                            const TextCatalog& catalog);

// Fraction of results within rank k. Throws InvalidArgument on an empty list or k == 0.
double hits_at_k(std::span<const RankingResult> ranks, std::size_t k);

// 1000 * em + hits1; both must lie in [0, 1].
double combined_metric(double em, double hits1);

struct MetricsReport {
    std::map<std::size_t, double> hits_at;
    double exact_match = 0.0;
    double combined = 0.0;
    std::size_t n_queries = 0;
};

std::string format_tsv(const MetricsReport& report);
std::string format_table(const MetricsReport& report);

struct ScoreOptions {
    std::vector<std::size_t> ks{1, 3, 10};
    bool filtered = true;
};

struct ScoreResult {
    MetricsReport report;
    std::vector<RankingResult> ranks;
};

// Sampled-ranking evaluation. Filter sets are the known answers of each query in
// `filter_graphs` (tails for forward queries, heads for inverse ones). Predictions are matched
// to records by query_id; a record without predictions scores -inf everywhere.
ScoreResult score_transductive(std::span<const DatasetRecord> records,
                               std::span<const PredictionSet> predictions,
                               const TextCatalog& catalog,
                               std::span<const KnowledgeGraph* const> filter_graphs,
                               const ScoreOptions& options);

// Unit-normalized entity vectors for exact flat search.
class EntityIndex {
public:
    static constexpr double kNormTolerance = 1e-5;

    // Throws InvalidArgument if any vector's norm is off by more than kNormTolerance.
    explicit EntityIndex(VectorTable table);

    std::size_t dim() const noexcept { return table_.dim; }
    std::size_t size() const noexcept { return table_.size(); }
    const VectorTable& table() const noexcept { return table_; }

private:
    VectorTable table_;
};

EntityIndex load_entity_index(const std::string& path);

// Exact top-k by inner product (cosine for unit vectors); ties by index order.
std::vector<std::pair<std::string, double>> nearest_entities(std::span<const double> query,
                                                             const EntityIndex& index,
                                                             std::size_t k);

// EM on the top candidate plus Hits@k from nearest-entity lookup of each query's generated
// vector (keyed by query_id in `generated`).
ScoreResult score_inductive(std::span<const DatasetRecord> records,
                            std::span<const PredictionSet> predictions,
                            const VectorTable& generated, const EntityIndex& index,
                            const ScoreOptions& options);

enum class TargetPosition { InTask, InNeighborhood, NotInInput };
std::string_view to_string(TargetPosition p);

// Case-sensitive substring test after NFC: task span first, then neighbor spans.
TargetPosition classify_target_position(const VerbalizedQuery& vq, std::string_view target_text);

struct TargetPositionCounts {
    std::size_t in_task = 0;
    std::size_t in_neighborhood = 0;
    std::size_t not_in_input = 0;
    std::size_t total() const noexcept { return in_task + in_neighborhood + not_in_input; }
};

TargetPositionCounts analyze_target_positions(std::span<const DatasetRecord> records);

}  // namespace kgnbr
