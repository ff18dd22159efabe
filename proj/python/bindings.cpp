#include "kgnbr/cli.hpp"
#include "kgnbr/dataset.hpp"
#include "kgnbr/error.hpp"
#include "kgnbr/evaluation.hpp"
#include "kgnbr/kg_store.hpp"
#include "kgnbr/neighborhood.hpp"
#include "kgnbr/prompting.hpp"
#include "kgnbr/relation_similarity.hpp"
#include "kgnbr/text_catalog.hpp"
#include "kgnbr/verbalizer.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace kgnbr;

namespace {

TripleDialect parse_dialect(const std::string& s) {
    if (s == "tsv") return TripleDialect::Tsv;
    if (s == "loose") return TripleDialect::Loose;
    throw invalid_argument("unknown dialect '" + s + "'");
}

EntityId entity_of(const KnowledgeGraph& g, const std::string& id) {
    auto e = g.vocabulary().find_entity(id);
    if (!e) throw not_found("unknown entity " + id);
    return *e;
}

RelationId relation_of(const KnowledgeGraph& g, const std::string& id) {
    auto r = g.vocabulary().find_relation(id);
    if (!r) throw not_found("unknown relation " + id);
    return *r;
}

Query make_query(const KnowledgeGraph& g, const std::string& head, const std::string& relation,
                 const std::optional<std::string>& target, bool inverse) {
    Query q{entity_of(g, head), relation_of(g, relation), inverse, std::nullopt};
    if (target) q.target = entity_of(g, *target);
    return q;
}

TokenBudget make_budget(std::size_t max_tokens, const std::string& tokenizer) {
    return TokenBudget{max_tokens, make_tokenizer(tokenizer)};
}

py::tuple triple_tuple(const Vocabulary& v, const Triple& t) {
    return py::make_tuple(v.entity_name(t.head), v.relation_name(t.relation), v.entity_name(t.tail));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Knowledge-graph neighborhood verbalization and link-prediction evaluation";

    static py::exception<Error> base(m, "KgnbrError");
    static py::exception<Error> io(m, "IoError", base.ptr());
    static py::exception<Error> parse(m, "ParseError", base.ptr());
    static py::exception<Error> missing(m, "NotFoundError", base.ptr());
    static py::exception<Error> invalid(m, "InvalidArgumentError", base.ptr());
    static py::exception<Error> schema(m, "SchemaError", base.ptr());
    static py::exception<Error> model(m, "ModelError", base.ptr());
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            switch (e.kind()) {
                case ErrorKind::Io: io(e.what()); break;
                case ErrorKind::Parse: parse(e.what()); break;
                case ErrorKind::NotFound: missing(e.what()); break;
                case ErrorKind::InvalidArgument: invalid(e.what()); break;
                case ErrorKind::Schema: schema(e.what()); break;
                case ErrorKind::Model: model(e.what()); break;
            }
        }
    });

    py::class_<KnowledgeGraph, std::shared_ptr<KnowledgeGraph>>(m, "Graph")
        .def_static(
            "from_file",
            [](const std::string& path, const std::string& dialect) {
                return std::make_shared<KnowledgeGraph>(ingest_triples(path, parse_dialect(dialect)));
            },
            py::arg("path"), py::arg("dialect") = "tsv")
        .def_static("from_triples",
                    [](const std::vector<std::tuple<std::string, std::string, std::string>>& rows) {
                        KnowledgeGraph::Builder b;
                        for (const auto& [h, r, t] : rows) b.add(h, r, t);
                        return std::make_shared<KnowledgeGraph>(std::move(b).build());
                    })
        .def_static("load_snapshot", [](const std::string& path) {
            return std::make_shared<KnowledgeGraph>(load_snapshot(path));
        })
        .def("save_snapshot", [](const KnowledgeGraph& g, const std::string& path) { save_snapshot(g, path); })
        .def("write_tsv", [](const KnowledgeGraph& g, const std::string& path) { write_triples_tsv(g, path); })
        .def("stats",
             [](const KnowledgeGraph& g) {
                 auto s = stats(g);
                 return py::make_tuple(s.entity_count, s.relation_count, s.triple_count);
             })
        .def("triples",
             [](const KnowledgeGraph& g) {
                 py::list out;
                 for (const auto& t : g.triples()) out.append(triple_tuple(g.vocabulary(), t));
                 return out;
             })
        .def("adjacent",
             [](const KnowledgeGraph& g, const std::string& entity) {
                 py::list out;
                 for (const auto& a : adjacent(entity_of(g, entity), g))
                     out.append(py::make_tuple(triple_tuple(g.vocabulary(), a.triple),
                                               std::string(to_string(a.direction))));
                 return out;
             })
        .def("known_tails",
             [](const KnowledgeGraph& g, const std::string& head, const std::string& relation) {
                 std::vector<std::string> out;
                 auto h = g.vocabulary().find_entity(head);
                 auto r = g.vocabulary().find_relation(relation);
                 if (!h || !r) return out;
                 const KnowledgeGraph* gs[] = {&g};
                 for (auto e : known_tails(*h, *r, gs)) out.push_back(g.vocabulary().entity_name(e));
                 return out;
             })
        .def("__len__", [](const KnowledgeGraph& g) { return g.triples().size(); });

    py::class_<TextCatalog, std::shared_ptr<TextCatalog>>(m, "Catalog")
        .def(py::init([](std::unordered_map<std::string, std::string> entities,
                         std::unordered_map<std::string, std::string> relations) {
                 return std::make_shared<TextCatalog>(std::move(entities), std::move(relations));
             }),
             py::arg("entities"), py::arg("relations"))
        .def_static(
            "load",
            [](const std::string& labels, const std::string& relation_labels,
               const std::optional<std::string>& descriptions, const std::string& mode) {
                auto m = mode == "id" ? DisambiguationMode::IdOnly : DisambiguationMode::DescriptionThenId;
                if (mode != "id" && mode != "description")
                    throw invalid_argument("unknown disambiguation mode '" + mode + "'");
                return std::make_shared<TextCatalog>(
                    disambiguate(load_raw(labels, descriptions), load_raw(relation_labels), m));
            },
            py::arg("labels"), py::arg("relation_labels"), py::arg("descriptions") = std::nullopt,
            py::arg("mode") = "description")
        .def("entity_text", &TextCatalog::entity_text)
        .def("relation_text", &TextCatalog::relation_text)
        .def("entity_for_text",
             [](const TextCatalog& c, const std::string& text) -> std::optional<std::string> {
                 if (const auto* id = c.entity_for_text(text)) return *id;
                 return std::nullopt;
             })
        .def("entities", &TextCatalog::entities)
        .def("relations", &TextCatalog::relations);

    py::class_<SimilarityMatrix, std::shared_ptr<SimilarityMatrix>>(m, "SimilarityMatrix")
        .def_static("from_vectors", [](const std::string& path) {
            return std::make_shared<SimilarityMatrix>(build_matrix(load_vectors(path)));
        })
        .def_static("from_dict",
                    [](const std::vector<std::pair<std::string, std::vector<double>>>& rows) {
                        RelationEmbeddings emb;
                        if (rows.empty()) throw invalid_argument("no relation vectors");
                        emb.table.dim = rows.front().second.size();
                        for (const auto& [key, v] : rows) {
                            if (v.size() != emb.table.dim) throw invalid_argument("dimension mismatch at " + key);
                            emb.table.index.emplace(key, static_cast<std::uint32_t>(emb.table.keys.size()));
                            emb.table.keys.push_back(key);
                            emb.table.values.insert(emb.table.values.end(), v.begin(), v.end());
                        }
                        return std::make_shared<SimilarityMatrix>(build_matrix(emb));
                    })
        .def("order", &SimilarityMatrix::order)
        .def("similarity", &SimilarityMatrix::similarity)
        .def("rank", [](const SimilarityMatrix& m, const std::string& q) { return rank_by_similarity(q, m); })
        .def("__len__", &SimilarityMatrix::size);

    py::class_<EntityIndex, std::shared_ptr<EntityIndex>>(m, "EntityIndex")
        .def_static("from_file", [](const std::string& path) {
            return std::make_shared<EntityIndex>(load_entity_index(path));
        })
        .def("nearest",
             [](const EntityIndex& index, const std::vector<double>& query, std::size_t k) {
                 return nearest_entities(query, index, k);
             })
        .def("__len__", &EntityIndex::size);

    m.def("cosine", [](const std::vector<double>& a, const std::vector<double>& b) { return cosine(a, b); });

    m.def(
        "neighborhood",
        [](const KnowledgeGraph& g, const SimilarityMatrix& matrix, const std::string& head,
           const std::string& relation, const std::optional<std::string>& target, bool inverse,
           std::size_t cap) {
            auto nbh = form_neighborhood(make_query(g, head, relation, target, inverse), g, matrix, cap);
            py::list out;
            for (const auto& n : nbh.neighbors)
                out.append(py::make_tuple(triple_tuple(g.vocabulary(), n.triple),
                                          std::string(to_string(n.direction)), n.similarity));
            return out;
        },
        py::arg("graph"), py::arg("matrix"), py::arg("head"), py::arg("relation"),
        py::arg("target") = std::nullopt, py::arg("inverse") = false, py::arg("cap") = kDefaultNeighborCap);

    m.def(
        "verbalize",
        [](const KnowledgeGraph& g, const TextCatalog& catalog, const SimilarityMatrix& matrix,
           const std::string& head, const std::string& relation, const std::optional<std::string>& target,
           bool inverse, std::size_t cap, std::size_t max_tokens, const std::string& tokenizer) {
            Verbalizer vz(g.vocabulary(), catalog);
            auto nbh = form_neighborhood(make_query(g, head, relation, target, inverse), g, matrix, cap);
            auto vq = vz.assemble(nbh, make_budget(max_tokens, tokenizer));
            py::dict d;
            d["input_text"] = vq.input_text;
            d["target_text"] = vq.target_text;
            d["task"] = std::string(vq.task());
            std::vector<std::string> ns;
            for (std::size_t i = 0; i < vq.included_count; ++i) ns.emplace_back(vq.neighbor(i));
            d["neighbors"] = ns;
            d["included_count"] = vq.included_count;
            d["token_count"] = vq.token_count;
            return d;
        },
        py::arg("graph"), py::arg("catalog"), py::arg("matrix"), py::arg("head"), py::arg("relation"),
        py::arg("target") = std::nullopt, py::arg("inverse") = false, py::arg("cap") = kDefaultNeighborCap,
        py::arg("max_tokens") = kDefaultMaxTokens, py::arg("tokenizer") = "whitespace");

    m.def(
        "emit_dataset",
        [](const KnowledgeGraph& g, const TextCatalog& catalog, const SimilarityMatrix& matrix,
           const std::string& out_path, std::size_t cap, std::size_t max_tokens, const std::string& tokenizer,
           std::size_t workers) {
            Verbalizer vz(g.vocabulary(), catalog);
            RelationSimilarity sim(matrix, g.vocabulary());
            DatasetOptions opt{cap, make_budget(max_tokens, tokenizer), workers};
            WriteSummary s;
            {
                py::gil_scoped_release release;
                s = write_dataset(emit_queries(g), g, vz, sim, opt, out_path);
            }
            return py::make_tuple(s.written, s.skipped);
        },
        py::arg("graph"), py::arg("catalog"), py::arg("matrix"), py::arg("out_path"),
        py::arg("cap") = kDefaultNeighborCap, py::arg("max_tokens") = kDefaultMaxTokens,
        py::arg("tokenizer") = "whitespace", py::arg("workers") = 1);

    m.def("exact_match", [](const std::string& a, const std::string& b) { return exact_match(a, b); });

    m.def(
        "filtered_rank",
        [](const std::string& target, const std::unordered_map<std::string, double>& scores,
           const std::unordered_set<std::string>& filter, const TextCatalog& catalog) -> std::optional<std::size_t> {
            EntityScores s;
            for (const auto& [k, v] : scores)
                if (v != kNegInf) s.finite.emplace(k, v);
            return filtered_rank(target, s, filter, catalog).rank;
        },
        py::arg("target"), py::arg("scores"), py::arg("filter"), py::arg("catalog"));

    m.def(
        "hits_at_k",
        [](const std::vector<std::optional<std::size_t>>& ranks, std::size_t k) {
            std::vector<RankingResult> rs;
            for (const auto& r : ranks) rs.push_back({"", r, true});
            return hits_at_k(rs, k);
        },
        py::arg("ranks"), py::arg("k"));

    m.def("combined_metric", &combined_metric, py::arg("em"), py::arg("hits1"));

    m.def("classify_target_position", [](const std::string& input_text, const std::string& target) {
        return std::string(to_string(classify_target_position(split_input(input_text), target)));
    });

    m.def(
        "build_prompt",
        [](const std::string& input_text, bool with_neighbors) {
            auto p = build_prompt(split_input(input_text), with_neighbors);
            return py::make_tuple(p.system_text, p.user_text);
        },
        py::arg("input_text"), py::arg("with_neighbors") = false);
    m.def("parse_answer", [](const std::string& s) { return parse_answer(s); });
    m.def("normalize_answer", [](const std::string& s) { return normalize_answer(s); });
    m.def(
        "gpt_hits",
        [](const std::vector<std::string>& predictions, const std::string& target, std::size_t k,
           std::uint64_t seed) { return gpt_hits(predictions, target, k, seed); },
        py::arg("predictions"), py::arg("target"), py::arg("k"), py::arg("seed") = 0);

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::vector<std::string> full{"kgnbr"};
        full.insert(full.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& a : full) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
    });
}
