#pragma once

#include "kgnbr/kg_store.hpp"
#include "kgnbr/relation_similarity.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kgnbr {

inline constexpr std::size_t kDefaultNeighborCap = 512;

// (head, relation, ?) or, when `inverse` is set, the rewrite (tail, relation^-1, ?) of an
// original triple; `head` then holds the original tail. `target` is absent at pure inference.
struct Query {
    EntityId head;
    RelationId relation;
    bool inverse = false;
    std::optional<EntityId> target;
};

struct NeighborTriple {
    Triple triple;
    Direction direction;
    double similarity;
    std::uint32_t position;

    // The endpoint that is not the query head.
    EntityId other() const noexcept {
        return direction == Direction::Outgoing ? triple.tail : triple.head;
    }
};

struct Neighborhood {
    Query query;
    std::vector<NeighborTriple> neighbors;
};

// Similarity between vocabulary relations, resolved once per vocabulary relation. Relations
// without a matrix row are reported on use.
class RelationSimilarity {
public:
    RelationSimilarity(const SimilarityMatrix& matrix, const Vocabulary& vocab);

    double operator()(RelationId a, RelationId b) const;
    bool has_row(RelationId r) const noexcept {
        return r.value < rows_.size() && rows_[r.value] >= 0;
    }

private:
    const SimilarityMatrix* matrix_;
    const Vocabulary* vocab_;
    std::vector<std::int64_t> rows_;
};

// The query head's 1-hop neighborhood, minus the query edge itself in either orientation,
// sorted by (similarity desc, triple position asc, outgoing before incoming) and cut to `cap`.
// Similarity is taken against the original (non-inverted) query relation.
Neighborhood form_neighborhood(const Query& query, const KnowledgeGraph& graph,
                               const RelationSimilarity& similarity,
                               std::size_t cap = kDefaultNeighborCap);
Neighborhood form_neighborhood(const Query& query, const KnowledgeGraph& graph,
                               const SimilarityMatrix& matrix,
                               std::size_t cap = kDefaultNeighborCap);

// True if `t` is the edge a query must not see (either orientation of head-relation-target).
bool is_excluded_edge(const Query& query, const Triple& t) noexcept;

// One JSON line: query fields plus neighbor triples, directions and similarities.
std::string neighborhood_record(const std::string& query_id, const Neighborhood& nbh,
                                const Vocabulary& vocab);

}  // namespace kgnbr
