#pragma once

#include "kgnbr/neighborhood.hpp"
#include "kgnbr/verbalizer.hpp"

#include <functional>
#include <string>
#include <vector>

namespace kgnbr {

struct DatasetRecord {
    std::string query_id;
    std::string input_text;
    std::string target_text;
    std::string head_id;
    std::string relation_id;
    std::string target_id;
    bool inverse = false;

    friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

std::string to_json_line(const DatasetRecord& r);
// Throws Schema on a missing field or a field of the wrong type.
DatasetRecord parse_dataset_record(std::string_view line);
std::vector<DatasetRecord> read_dataset(const std::string& path);

struct IndexedQuery {
    std::uint32_t triple_index;
    Query query;

    // "<triple-index>:fwd" or "<triple-index>:inv".
    std::string id() const;
};

// Forward then inverse query for every triple, in triple order.
std::vector<IndexedQuery> emit_queries(const KnowledgeGraph& graph);

// Inverse of IndexedQuery::id(). Throws Schema on malformed ids.
std::pair<std::uint32_t, bool> parse_query_id(std::string_view id);

struct DatasetOptions {
    std::size_t cap = kDefaultNeighborCap;
    TokenBudget budget;
    std::size_t workers = 1;
};

// Builds the record for one query: neighborhood over `neighborhood_graph`, verbalized and
// trimmed to the budget.
DatasetRecord make_record(const IndexedQuery& q, const KnowledgeGraph& neighborhood_graph,
                          const Verbalizer& verbalizer, const RelationSimilarity& similarity,
                          const DatasetOptions& options);

struct WriteSummary {
    std::size_t written = 0;
    std::vector<std::pair<std::string, std::string>> skipped;  // (query_id, reason)
};

// Streams one JSON line per query to `out_path` (gzip when it ends in ".gz"). A query that fails
// to verbalize is skipped and logged. File content is independent of the worker count.
WriteSummary write_dataset(std::span<const IndexedQuery> queries,
                           const KnowledgeGraph& neighborhood_graph, const Verbalizer& verbalizer,
                           const RelationSimilarity& similarity, const DatasetOptions& options,
                           const std::string& out_path);

// Runs `fn(i)` for i in [0, n) on `workers` threads; exceptions are rethrown on the caller.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace kgnbr
