#include "kgnbr/relation_similarity.hpp"

#include "kgnbr/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

namespace kgnbr {

RelationEmbeddings load_vectors(const std::string& path) { return {load_vector_table(path)}; }

double cosine(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw invalid_argument("cosine of vectors with lengths " + std::to_string(a.size()) +
                               " and " + std::to_string(b.size()));
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> order, std::vector<double> values)
    : order_(std::move(order)), values_(std::move(values)) {
    if (values_.size() != order_.size() * order_.size())
        throw invalid_argument("similarity matrix values do not match its order");
    for (std::size_t i = 0; i < order_.size(); ++i)
        if (!index_.emplace(order_[i], i).second)
            throw invalid_argument("duplicate relation '" + order_[i] + "' in matrix order");
}

const std::size_t* SimilarityMatrix::find(std::string_view relation) const {
    auto it = index_.find(std::string(relation));
    return it == index_.end() ? nullptr : &it->second;
}

std::size_t SimilarityMatrix::index_of(std::string_view relation) const {
    if (const auto* i = find(relation)) return *i;
    throw not_found("relation '" + std::string(relation) + "' has no similarity row");
}

SimilarityMatrix build_matrix(const RelationEmbeddings& emb) {
    const std::size_t n = emb.size();
    if (n == 0) throw invalid_argument("cannot build a similarity matrix from zero relations");
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = emb.table.row(i);
        norms[i] = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
    }
    std::vector<double> values(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        auto a = emb.table.row(i);
        for (std::size_t j = i; j < n; ++j) {
            double s = 0.0;
            if (i == j && norms[i] > 0) {
                s = 1.0;
            } else if (norms[i] > 0 && norms[j] > 0) {
                auto b = emb.table.row(j);
                s = std::clamp(std::inner_product(a.begin(), a.end(), b.begin(), 0.0) /
                                   (norms[i] * norms[j]),
                               -1.0, 1.0);
            }
            values[i * n + j] = s;
            values[j * n + i] = s;
        }
    }
    return SimilarityMatrix(emb.table.keys, std::move(values));
}

std::vector<std::string> rank_by_similarity(std::string_view query, const SimilarityMatrix& matrix) {
    const std::size_t q = matrix.index_of(query);
    std::vector<std::size_t> idx(matrix.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    // The query relation leads even when another relation's vector is parallel to it.
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if ((a == q) != (b == q)) return a == q;
        return matrix.at(q, a) > matrix.at(q, b);
    });
    std::vector<std::string> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(matrix.order()[i]);
    return out;
}

namespace {

constexpr char kMatrixMagic[8] = {'K', 'G', 'N', 'B', 'S', 'I', 'M', '1'};

void put_u64(std::ostream& os, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& is, const std::string& path) {
    unsigned char b[8];
    if (!is.read(reinterpret_cast<char*>(b), 8)) throw schema_error("truncated matrix cache " + path);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
    return v;
}

SimilarityMatrix read_matrix(const std::string& path, const std::uint64_t* expected) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open " + path);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMatrixMagic, 8) != 0)
        throw schema_error(path + " is not a similarity matrix cache");
    auto key = get_u64(is, path);
    if (expected && key != *expected)
        throw schema_error(path + " was built from different relation embeddings");
    auto n = get_u64(is, path);
    std::vector<std::string> order;
    order.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto len = get_u64(is, path);
        std::string s(len, '\0');
        if (len && !is.read(s.data(), static_cast<std::streamsize>(len)))
            throw schema_error("truncated matrix cache " + path);
        order.push_back(std::move(s));
    }
    std::vector<double> values(n * n);
    for (auto& v : values) {
        auto bits = get_u64(is, path);
        std::memcpy(&v, &bits, sizeof v);
    }
    return SimilarityMatrix(std::move(order), std::move(values));
}

}  // namespace

void save_matrix(const SimilarityMatrix& matrix, std::uint64_t embeddings_checksum,
                 const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot create " + path);
    os.write(kMatrixMagic, 8);
    put_u64(os, embeddings_checksum);
    put_u64(os, matrix.size());
    for (const auto& s : matrix.order()) {
        put_u64(os, s.size());
        os.write(s.data(), static_cast<std::streamsize>(s.size()));
    }
    for (double v : matrix.values()) {
        std::uint64_t bits;
        std::memcpy(&bits, &v, sizeof bits);
        put_u64(os, bits);
    }
    if (!os.flush()) throw io_error("write error in " + path);
}

SimilarityMatrix load_matrix(const std::string& path, std::uint64_t expected_checksum) {
    return read_matrix(path, &expected_checksum);
}

SimilarityMatrix load_matrix(const std::string& path) { return read_matrix(path, nullptr); }

}  // namespace kgnbr
