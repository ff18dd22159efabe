#pragma once

#include "kgnbr/dataset.hpp"
#include "kgnbr/kg_store.hpp"
#include "kgnbr/relation_similarity.hpp"
#include "kgnbr/text_catalog.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace kgnbr::testing {

// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("kgnbr-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const {
        auto p = file(name);
        std::ofstream(p, std::ios::binary) << content;
        return p;
    }

private:
    std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline SimilarityMatrix matrix_from(const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
    RelationEmbeddings emb;
    emb.table.dim = rows.front().second.size();
    for (const auto& [key, v] : rows) {
        emb.table.index.emplace(key, static_cast<std::uint32_t>(emb.table.keys.size()));
        emb.table.keys.push_back(key);
        emb.table.values.insert(emb.table.values.end(), v.begin(), v.end());
    }
    return build_matrix(emb);
}

// The Steve Jobs neighborhood example: place of birth, occupation and an incoming "founded by".
struct MiniGraph {
    KnowledgeGraph graph;
    TextCatalog catalog;
    SimilarityMatrix matrix;
};

inline MiniGraph steve_jobs_graph() {
    KnowledgeGraph::Builder b;
    b.add("Q19837", "P19", "Q47265");   // Steve Jobs, place of birth, Palo Alto
    b.add("Q19837", "P106", "Q131524"); // Steve Jobs, occupation, entrepreneur
    b.add("Q312", "P112", "Q19837");    // Apple, founded by, Steve Jobs
    MiniGraph m{std::move(b).build(),
                TextCatalog({{"Q19837", "Steve Jobs"},
                             {"Q47265", "Palo Alto"},
                             {"Q131524", "entrepreneur"},
                             {"Q312", "Apple"}},
                            {{"P19", "place of birth"}, {"P106", "occupation"}, {"P112", "founded by"}}),
                matrix_from({{"P19", {1.0, 0.0, 0.0}},
                             {"P106", {0.6, 0.8, 0.0}},
                             {"P112", {0.2, 0.0, 0.9}}})};
    return m;
}

// Random graph over a small id space; self-loops and reciprocal edges occur naturally.
struct RandomGraph {
    KnowledgeGraph graph;
    SimilarityMatrix matrix;
};

inline RandomGraph random_graph(std::mt19937_64& rng, std::size_t entities, std::size_t relations,
                                std::size_t triples, std::size_t dim = 4) {
    KnowledgeGraph::Builder b;
    std::uniform_int_distribution<std::size_t> ent(0, entities - 1), rel(0, relations - 1);
    for (std::size_t i = 0; i < triples; ++i)
        b.add("e" + std::to_string(ent(rng)), "r" + std::to_string(rel(rng)),
              "e" + std::to_string(ent(rng)));
    std::vector<std::pair<std::string, std::vector<double>>> rows;
    std::uniform_int_distribution<int> coarse(-2, 2);  // coarse values create similarity ties
    for (std::size_t r = 0; r < relations; ++r) {
        std::vector<double> v(dim);
        for (auto& x : v) x = coarse(rng);
        rows.emplace_back("r" + std::to_string(r), std::move(v));
    }
    return {std::move(b).build(), matrix_from(rows)};
}

// Corpus where exactly `hinted` of `n` queries have their target reachable through a single
// high-similarity neighbor ("mentions <target>"); the rest see only distractors.
struct PlantedCorpus {
    KnowledgeGraph graph;
    TextCatalog catalog;
    SimilarityMatrix matrix;
    std::vector<IndexedQuery> queries;
    std::size_t hinted = 0;
};

inline std::string pad3(std::size_t i) {
    std::string s = std::to_string(i);
    return std::string(3 - std::min<std::size_t>(3, s.size()), '0') + s;
}

inline PlantedCorpus planted_corpus(std::size_t n, std::size_t hinted, std::size_t distractors,
                                    std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<bool> is_hinted(n, false);
    std::fill(is_hinted.begin(), is_hinted.begin() + static_cast<std::ptrdiff_t>(hinted), true);
    for (std::size_t i = n; i > 1; --i) std::swap(is_hinted[i - 1], is_hinted[rng() % i]);

    const std::vector<std::string> distractor_rels{"R_D1", "R_D2", "R_D3"};
    KnowledgeGraph::Builder b;
    std::unordered_map<std::string, std::string> ent_text;
    std::vector<std::uint32_t> query_positions;
    for (std::size_t i = 0; i < n; ++i) {
        std::string h = "H" + pad3(i), t = "T" + pad3(i);
        ent_text[h] = "head " + pad3(i);
        ent_text[t] = "target " + pad3(i);
        query_positions.push_back(static_cast<std::uint32_t>(b.size()));
        b.add(h, "R_Q", t);
        for (std::size_t j = 0; j < distractors; ++j) {
            std::string d = "D" + pad3(i) + "_" + std::to_string(j);
            ent_text[d] = "thing " + pad3(i) + " " + std::to_string(j);
            if (j % 2 == 0) {
                b.add(h, distractor_rels[j % 3], d);
            } else {
                b.add(d, distractor_rels[j % 3], h);
            }
        }
        if (is_hinted[i]) b.add(h, "R_H", t);
    }
    PlantedCorpus c{std::move(b).build(),
                    TextCatalog(std::move(ent_text), {{"R_Q", "has answer"},
                                                      {"R_H", "mentions"},
                                                      {"R_D1", "related to"},
                                                      {"R_D2", "located near"},
                                                      {"R_D3", "member of"}}),
                    matrix_from({{"R_Q", {1.0, 0.0, 0.0}},
                                 {"R_H", {0.95, 0.31, 0.0}},
                                 {"R_D1", {0.5, 0.86, 0.0}},
                                 {"R_D2", {0.2, 0.97, 0.0}},
                                 {"R_D3", {0.0, 0.0, 1.0}}}),
                    {},
                    hinted};
    auto triples = c.graph.triples();
    for (auto pos : query_positions) {
        const auto& t = triples[pos];
        c.queries.push_back({pos, Query{t.head, t.relation, false, t.tail}});
    }
    return c;
}

}  // namespace kgnbr::testing
