#include "kgnbr/neighborhood.hpp"

#include "kgnbr/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>

namespace kgnbr {

RelationSimilarity::RelationSimilarity(const SimilarityMatrix& matrix, const Vocabulary& vocab)
    : matrix_(&matrix), vocab_(&vocab), rows_(vocab.relation_count(), -1) {
    for (std::uint32_t r = 0; r < rows_.size(); ++r) {
        if (const auto* i = matrix.find(vocab.relation_name(RelationId{r})))
            rows_[r] = static_cast<std::int64_t>(*i);
    }
}

double RelationSimilarity::operator()(RelationId a, RelationId b) const {
    for (auto r : {a, b}) {
        if (!has_row(r)) {
            std::string name = r.value < vocab_->relation_count()
                                   ? vocab_->relation_name(r)
                                   : "#" + std::to_string(r.value);
            throw not_found("relation '" + name + "' has no similarity row");
        }
    }
    return matrix_->at(static_cast<std::size_t>(rows_[a.value]),
                       static_cast<std::size_t>(rows_[b.value]));
}

bool is_excluded_edge(const Query& query, const Triple& t) noexcept {
    if (!query.target || t.relation != query.relation) return false;
    const EntityId target = *query.target;
    return (t.head == query.head && t.tail == target) ||
           (t.head == target && t.tail == query.head);
}

Neighborhood form_neighborhood(const Query& query, const KnowledgeGraph& graph,
                               const RelationSimilarity& similarity, std::size_t cap) {
    // Throws for a relation without a similarity row.
    if (!similarity.has_row(query.relation)) similarity(query.relation, query.relation);

    Neighborhood nbh{query, {}};
    auto adj = adjacent(query.head, graph);  // NotFound for heads outside the vocabulary
    nbh.neighbors.reserve(adj.size());
    for (const auto& a : adj) {
        if (is_excluded_edge(query, a.triple)) continue;
        nbh.neighbors.push_back(
            {a.triple, a.direction, similarity(a.triple.relation, query.relation), a.position});
    }
    auto before = [](const NeighborTriple& x, const NeighborTriple& y) {
        if (x.similarity != y.similarity) return x.similarity > y.similarity;
        if (x.position != y.position) return x.position < y.position;
        return x.direction < y.direction;
    };
    auto& v = nbh.neighbors;
    if (v.size() > cap) {
        std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(cap), v.end(), before);
        v.resize(cap);
    } else {
        std::sort(v.begin(), v.end(), before);
    }
    return nbh;
}

Neighborhood form_neighborhood(const Query& query, const KnowledgeGraph& graph,
                               const SimilarityMatrix& matrix, std::size_t cap) {
    return form_neighborhood(query, graph, RelationSimilarity(matrix, graph.vocabulary()), cap);
}

std::string neighborhood_record(const std::string& query_id, const Neighborhood& nbh,
                                const Vocabulary& vocab) {
    nlohmann::ordered_json j;
    j["query_id"] = query_id;
    j["head_id"] = vocab.entity_name(nbh.query.head);
    j["relation_id"] = vocab.relation_name(nbh.query.relation);
    j["inverse"] = nbh.query.inverse;
    j["target_id"] = nbh.query.target ? vocab.entity_name(*nbh.query.target) : std::string();
    auto& arr = j["neighbors"] = nlohmann::ordered_json::array();
    for (const auto& n : nbh.neighbors) {
        nlohmann::ordered_json e;
        e["position"] = n.position;
        e["head"] = vocab.entity_name(n.triple.head);
        e["relation"] = vocab.relation_name(n.triple.relation);
        e["tail"] = vocab.entity_name(n.triple.tail);
        e["direction"] = to_string(n.direction);
        e["similarity"] = n.similarity;
        arr.push_back(std::move(e));
    }
    return j.dump();
}

}  // namespace kgnbr
