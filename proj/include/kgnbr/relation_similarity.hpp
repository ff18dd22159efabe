#pragma once

#include "kgnbr/vector_file.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgnbr {

// Pre-computed relation vectors (one per relation id), all of one dimension.
struct RelationEmbeddings {
    VectorTable table;
    std::size_t dim() const noexcept { return table.dim; }
    std::size_t size() const noexcept { return table.size(); }
};

RelationEmbeddings load_vectors(const std::string& path);

// Cosine similarity. A zero vector has similarity 0 with everything, itself included.
double cosine(std::span<const double> a, std::span<const double> b);

// Dense |R| x |R| cosine matrix. Row order is the embeddings' file order, which is also the
// catalog order used to break similarity ties.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    SimilarityMatrix(std::vector<std::string> order, std::vector<double> values);

    std::size_t size() const noexcept { return order_.size(); }
    const std::vector<std::string>& order() const noexcept { return order_; }
    const std::vector<double>& values() const noexcept { return values_; }

    double at(std::size_t i, std::size_t j) const { return values_[i * order_.size() + j]; }
    // Index of a relation in the catalog order; throws NotFound.
    std::size_t index_of(std::string_view relation) const;
    const std::size_t* find(std::string_view relation) const;

    double similarity(std::string_view a, std::string_view b) const {
        return at(index_of(a), index_of(b));
    }

private:
    std::vector<std::string> order_;
    std::vector<double> values_;
    std::unordered_map<std::string, std::size_t> index_;
};

SimilarityMatrix build_matrix(const RelationEmbeddings& emb);

// All relations, by descending similarity to `query`, ties by catalog order.
std::vector<std::string> rank_by_similarity(std::string_view query, const SimilarityMatrix& matrix);

// Binary cache of a matrix, keyed by the checksum of the embeddings it was built from.
void save_matrix(const SimilarityMatrix& matrix, std::uint64_t embeddings_checksum,
                 const std::string& path);
// Throws Schema if the file is not a matrix cache or its key differs from `expected_checksum`.
SimilarityMatrix load_matrix(const std::string& path, std::uint64_t expected_checksum);
// Reads a cache without checking its key.
SimilarityMatrix load_matrix(const std::string& path);

}  // namespace kgnbr
