#include "kgnbr/cli.hpp"

#include "kgnbr/ablation.hpp"
#include "kgnbr/dataset.hpp"
#include "kgnbr/error.hpp"
#include "kgnbr/evaluation.hpp"
#include "kgnbr/kg_store.hpp"
#include "kgnbr/line_io.hpp"
#include "kgnbr/oracle_models.hpp"
#include "kgnbr/prompting.hpp"
#include "kgnbr/relation_similarity.hpp"
#include "kgnbr/rng.hpp"
#include "kgnbr/text_catalog.hpp"
#include "kgnbr/verbalizer.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

namespace kgnbr::cli {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
    // inputs
    std::vector<std::string> triples;
    std::vector<std::string> inference_triples;
    std::vector<std::string> query_triples;
    std::vector<std::string> filter_triples;
    std::vector<std::string> test_triples;
    std::string snapshot;
    std::string labels;
    std::string descriptions;
    std::string relation_labels;
    std::string relation_vectors;
    std::string matrix;
    std::string entity_vectors;
    std::string generated_vectors;
    std::string dataset;
    std::string predictions;
    std::string answers;
    std::string tokenizer = "whitespace";
    // outputs
    std::string out;
    std::string report;
    std::string neighborhood_dump;
    std::string catalog_dump;
    std::string tsv_out;
    // knobs
    std::string dialect = "tsv";
    std::string split = "train";
    std::string disambiguation = "description";
    std::string neighborhood_graph = "train";
    std::string oracle = "memorizer";
    std::string constant_text;
    std::string mode = "relevant_first";
    std::string metric = "em";
    std::vector<std::size_t> removals{0, 1, 2, 4, 8, 16, 32};
    std::size_t cap = kDefaultNeighborCap;
    std::size_t max_tokens = kDefaultMaxTokens;
    std::size_t sample_size = kDefaultSampleSize;
    std::size_t workers = 1;
    std::size_t limit = 0;
    std::size_t seeds = 1;
    std::uint64_t seed = 0;
    bool no_filter = false;
    bool filter_test = false;
    bool with_neighbors = false;
    bool no_header = false;
};

std::string resolve(const std::string& path) {
    if (path.empty()) return path;
    fs::path p(path);
    if (p.is_relative() && !fs::exists(p)) {
        if (const char* root = std::getenv("KGNBR_DATA_ROOT"); root && *root) {
            fs::path candidate = fs::path(root) / p;
            if (fs::exists(candidate)) return candidate.string();
        }
    }
    return path;
}

std::string require_file(const std::string& path, std::string_view flag) {
    if (path.empty()) throw invalid_argument(fmt::format("{} is required", flag));
    auto r = resolve(path);
    if (!fs::exists(r)) throw io_error(fmt::format("{}: no such file '{}'", flag, path));
    return r;
}

std::vector<std::string> require_files(const std::vector<std::string>& paths, std::string_view flag) {
    if (paths.empty()) throw invalid_argument(fmt::format("{} is required", flag));
    std::vector<std::string> out;
    for (const auto& p : paths) out.push_back(require_file(p, flag));
    return out;
}

TripleDialect dialect_of(const RunConfig& c) {
    if (c.dialect == "tsv") return TripleDialect::Tsv;
    if (c.dialect == "loose") return TripleDialect::Loose;
    throw invalid_argument("unknown dialect '" + c.dialect + "'");
}

KnowledgeGraph load_graph(const RunConfig& c, const std::vector<std::string>& files,
                          std::string_view flag, const std::shared_ptr<Vocabulary>& vocab,
                          SplitTag split) {
    return ingest_triples(require_files(files, flag), dialect_of(c), vocab, split);
}

TextCatalog load_catalog(const RunConfig& c) {
    auto entities = load_raw(require_file(c.labels, "--labels"),
                             c.descriptions.empty()
                                 ? std::nullopt
                                 : std::optional(require_file(c.descriptions, "--descriptions")));
    auto relations = load_raw(require_file(c.relation_labels, "--relation-labels"));
    DisambiguationMode mode;
    if (c.disambiguation == "description") {
        mode = DisambiguationMode::DescriptionThenId;
    } else if (c.disambiguation == "id") {
        mode = DisambiguationMode::IdOnly;
    } else {
        throw invalid_argument("unknown disambiguation mode '" + c.disambiguation + "'");
    }
    return disambiguate(entities, relations, mode);
}

SimilarityMatrix load_similarity(const RunConfig& c) {
    if (!c.matrix.empty()) {
        auto path = require_file(c.matrix, "--matrix");
        if (!c.relation_vectors.empty()) {
            auto emb = load_vectors(require_file(c.relation_vectors, "--relation-vectors"));
            return load_matrix(path, checksum(emb.table));
        }
        return load_matrix(path);
    }
    return build_matrix(load_vectors(require_file(c.relation_vectors, "--relation-vectors")));
}

TokenBudget budget_of(const RunConfig& c) {
    if (c.max_tokens == 0) throw invalid_argument("--max-tokens must be positive");
    return TokenBudget{c.max_tokens, make_tokenizer(resolve(c.tokenizer))};
}

// Loads the train graph, the optional inference graph and the graph neighborhoods are formed
// over, all sharing one vocabulary.
struct Graphs {
    std::shared_ptr<Vocabulary> vocab = std::make_shared<Vocabulary>();
    KnowledgeGraph train;
    std::optional<KnowledgeGraph> inference;
    std::optional<KnowledgeGraph> merged;

    const KnowledgeGraph& neighborhood() const { return merged ? *merged : train; }
};

Graphs load_graphs(const RunConfig& c) {
    Graphs g;
    g.train = load_graph(c, c.triples, "--triples", g.vocab, SplitTag::Train);
    if (!c.inference_triples.empty())
        g.inference = load_graph(c, c.inference_triples, "--inference-triples", g.vocab,
                                 SplitTag::Inference);
    if (c.neighborhood_graph == "train+inference") {
        if (!g.inference)
            throw invalid_argument("--neighborhood-graph train+inference needs --inference-triples");
        const KnowledgeGraph* both[] = {&g.train, &*g.inference};
        g.merged = merge(both, SplitTag::Inference);
    } else if (c.neighborhood_graph != "train") {
        throw invalid_argument("unknown --neighborhood-graph '" + c.neighborhood_graph + "'");
    }
    return g;
}

std::vector<IndexedQuery> queries_of(const RunConfig& c, Graphs& g) {
    if (c.query_triples.empty()) return emit_queries(g.train);
    auto split = load_graph(c, c.query_triples, "--queries", g.vocab, parse_split_tag(c.split));
    return emit_queries(split);
}

void print_stats(std::ostream& out, const GraphStats& s, bool header) {
    if (header) out << "entities\trelations\ttriples\n";
    out << s.entity_count << '\t' << s.relation_count << '\t' << s.triple_count << '\n';
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f || !(f << text)) throw io_error("cannot write " + path);
}

// ---- subcommands ----

int cmd_ingest(const RunConfig& c, std::ostream& out) {
    auto g = load_graph(c, c.triples, "--triples", std::make_shared<Vocabulary>(),
                        parse_split_tag(c.split));
    if (!c.out.empty()) save_snapshot(g, c.out);
    if (!c.tsv_out.empty()) write_triples_tsv(g, c.tsv_out);
    print_stats(out, stats(g), !c.no_header);
    return kOk;
}

int cmd_stats(const RunConfig& c, std::ostream& out) {
    KnowledgeGraph g = !c.snapshot.empty()
                           ? load_snapshot(require_file(c.snapshot, "--snapshot"))
                           : load_graph(c, c.triples, "--triples", std::make_shared<Vocabulary>(),
                                        parse_split_tag(c.split));
    print_stats(out, stats(g), !c.no_header);
    return kOk;
}

int cmd_build_sim(const RunConfig& c, std::ostream& out) {
    auto emb = load_vectors(require_file(c.relation_vectors, "--relation-vectors"));
    auto m = build_matrix(emb);
    auto key = checksum(emb.table);
    if (c.out.empty()) throw invalid_argument("--out is required");
    save_matrix(m, key, c.out);
    out << "relations\tdim\tchecksum\n"
        << m.size() << '\t' << emb.dim() << '\t' << fmt::format("{:016x}", key) << '\n';
    return kOk;
}

int cmd_emit(const RunConfig& c, std::ostream& out) {
    auto g = load_graphs(c);
    auto catalog = load_catalog(c);
    auto matrix = load_similarity(c);
    const auto& ngraph = g.neighborhood();
    Verbalizer verbalizer(*g.vocab, catalog);
    auto queries = queries_of(c, g);
    // Built after the query split is loaded so its relations are in the vocabulary.
    RelationSimilarity sim_all(matrix, *g.vocab);
    DatasetOptions opt{c.cap, budget_of(c), c.workers};
    if (c.out.empty()) throw invalid_argument("--out is required");
    auto summary = write_dataset(queries, ngraph, verbalizer, sim_all, opt, c.out);
    if (!c.neighborhood_dump.empty()) {
        LineWriter dump(c.neighborhood_dump);
        for (const auto& q : queries) {
            try {
                dump.write_line(neighborhood_record(
                    q.id(), form_neighborhood(q.query, ngraph, sim_all, c.cap), *g.vocab));
            } catch (const Error&) {
                // already reported as a skipped record
            }
        }
        dump.close();
    }
    if (!c.catalog_dump.empty()) write_catalog_tsv(catalog, c.catalog_dump);
    out << "queries\twritten\tskipped\n"
        << queries.size() << '\t' << summary.written << '\t' << summary.skipped.size() << '\n';
    return kOk;
}

void emit_report(const RunConfig& c, const MetricsReport& rep, std::ostream& out) {
    out << format_tsv(rep) << '\n' << format_table(rep);
    if (!c.report.empty()) write_text(c.report, format_tsv(rep));
}

int cmd_score(const RunConfig& c, std::ostream& out) {
    auto records = read_dataset(require_file(c.dataset, "--dataset"));
    auto preds = read_predictions(require_file(c.predictions, "--predictions"), c.sample_size);
    auto catalog = load_catalog(c);
    auto vocab = std::make_shared<Vocabulary>();
    std::vector<KnowledgeGraph> graphs;
    if (!c.no_filter) {
        if (c.filter_triples.empty())
            throw invalid_argument("--filter-triples is required unless --no-filter is given");
        for (const auto& f : c.filter_triples)
            graphs.push_back(ingest_triples(require_file(f, "--filter-triples"), dialect_of(c),
                                            vocab, SplitTag::Train));
        if (c.filter_test) {
            for (const auto& f : c.test_triples)
                graphs.push_back(ingest_triples(require_file(f, "--test-triples"), dialect_of(c),
                                                vocab, SplitTag::Test));
        }
    }
    std::vector<const KnowledgeGraph*> ptrs;
    for (const auto& g : graphs) ptrs.push_back(&g);
    ScoreOptions opt;
    opt.filtered = !c.no_filter;
    auto result = score_transductive(records, preds, catalog, ptrs, opt);
    emit_report(c, result.report, out);
    return kOk;
}

int cmd_eval_inductive(const RunConfig& c, std::ostream& out) {
    auto records = read_dataset(require_file(c.dataset, "--dataset"));
    auto preds = read_predictions(require_file(c.predictions, "--predictions"), c.sample_size);
    auto generated = load_vector_table(require_file(c.generated_vectors, "--generated-vectors"));
    auto index = load_entity_index(require_file(c.entity_vectors, "--entity-vectors"));
    auto result = score_inductive(records, preds, generated, index, ScoreOptions{});
    emit_report(c, result.report, out);
    return kOk;
}

int cmd_analyze_target(const RunConfig& c, std::ostream& out) {
    auto records = read_dataset(require_file(c.dataset, "--dataset"));
    auto counts = analyze_target_positions(records);
    const double n = counts.total() ? static_cast<double>(counts.total()) : 1.0;
    out << "position\tcount\tfraction\n";
    out << fmt::format("in_task\t{}\t{:.6f}\n", counts.in_task, counts.in_task / n);
    out << fmt::format("in_neighborhood\t{}\t{:.6f}\n", counts.in_neighborhood,
                       counts.in_neighborhood / n);
    out << fmt::format("not_in_input\t{}\t{:.6f}\n", counts.not_in_input, counts.not_in_input / n);
    return kOk;
}

int cmd_ablate(const RunConfig& c, std::ostream& out) {
    auto g = load_graphs(c);
    auto catalog = load_catalog(c);
    auto matrix = load_similarity(c);
    auto queries = queries_of(c, g);
    RelationSimilarity sim(matrix, *g.vocab);
    Verbalizer verbalizer(*g.vocab, catalog);
    if (c.limit > 0 && queries.size() > c.limit) queries.resize(c.limit);
    std::vector<AblationItem> items;
    for (const auto& q : queries) {
        try {
            items.push_back(make_ablation_item(q, g.neighborhood(), verbalizer, sim, c.cap));
        } catch (const Error& e) {
            spdlog::warn("skipping query {}: {}", q.id(), e.what());
        }
    }
    OracleSpec spec;
    spec.kind = parse_oracle_kind(c.oracle);
    spec.train = &g.train;
    spec.constant_text = c.constant_text;
    spec.k = c.sample_size;
    auto model = make_oracle(spec, catalog);
    auto mode = parse_ablation_mode(c.mode);
    auto metric = parse_ablation_metric(c.metric);
    auto budget = budget_of(c);
    std::vector<double> mean(c.removals.size(), 0.0);
    const std::size_t runs = mode == AblationMode::Random ? std::max<std::size_t>(1, c.seeds) : 1;
    for (std::size_t s = 0; s < runs; ++s) {
        auto curve = neighbor_ablation(items, model, mode, c.removals, c.seed + s, metric, budget);
        for (std::size_t i = 0; i < curve.size(); ++i) mean[i] += curve[i].metric / runs;
    }
    out << "removed\tmetric\n";
    for (std::size_t i = 0; i < mean.size(); ++i)
        out << c.removals[i] << '\t' << fmt::format("{:.6f}", mean[i]) << '\n';
    return kOk;
}

int cmd_prompt(const RunConfig& c, std::ostream& out) {
    auto records = read_dataset(require_file(c.dataset, "--dataset"));
    if (!c.answers.empty()) {
        // {query_id, answers: [raw, ...]} -> Hits@1 / Hits@3
        std::unordered_map<std::string, const DatasetRecord*> by_id;
        for (const auto& r : records) by_id.emplace(r.query_id, &r);
        LineReader reader(require_file(c.answers, "--answers"));
        std::string line;
        std::size_t n = 0, h1 = 0, h3 = 0;
        while (reader.next(line)) {
            if (line.empty()) continue;
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(line);
            } catch (const nlohmann::json::exception& e) {
                throw ParseError(reader.path(), reader.line_number(), e.what());
            }
            auto id = j.value("query_id", std::string());
            auto it = by_id.find(id);
            if (it == by_id.end()) throw schema_error("answer for unknown query '" + id + "'");
            std::vector<std::string> preds;
            for (const auto& a : j.value("answers", nlohmann::json::array()))
                if (a.is_string() && preds.size() < 3) preds.push_back(parse_answer(a.get<std::string>()));
            auto qseed = derive_seed(c.seed, id);
            h1 += gpt_hits(preds, it->second->target_text, 1, qseed);
            h3 += gpt_hits(preds, it->second->target_text, 3, qseed);
            ++n;
        }
        const double d = n ? static_cast<double>(n) : 1.0;
        out << "metric\tvalue\n"
            << fmt::format("hits@1\t{:.6f}\nhits@3\t{:.6f}\nn_queries\t{}\n", h1 / d, h3 / d, n);
        return kOk;
    }
    if (c.out.empty()) throw invalid_argument("--out is required");
    LineWriter w(c.out);
    for (const auto& r : records) {
        auto p = build_prompt(split_input(r.input_text, r.target_text), c.with_neighbors);
        nlohmann::ordered_json j;
        j["query_id"] = r.query_id;
        j["system"] = p.system_text;
        j["user"] = p.user_text;
        w.write_line(j.dump());
    }
    w.close();
    out << "prompts\t" << records.size() << '\n';
    return kOk;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
    auto records = read_dataset(require_file(c.dataset, "--dataset"));
    auto catalog = load_catalog(c);
    std::optional<KnowledgeGraph> train;
    OracleSpec spec;
    spec.kind = parse_oracle_kind(c.oracle);
    spec.constant_text = c.constant_text;
    spec.seed = c.seed;
    spec.k = c.sample_size;
    if (spec.kind == OracleKind::Memorizer) {
        train = load_graph(c, c.triples, "--triples", std::make_shared<Vocabulary>(), SplitTag::Train);
        spec.train = &*train;
    }
    auto model = make_oracle(spec, catalog);
    if (c.out.empty()) throw invalid_argument("--out is required");
    std::vector<PredictionSet> preds(records.size());
    parallel_for(records.size(), c.workers, [&](std::size_t i) { preds[i] = model(records[i]); });
    write_predictions(preds, c.out);
    out << "predictions\t" << preds.size() << '\n';
    return kOk;
}

int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::Io: return kIo;
        case ErrorKind::Parse: return kParse;
        case ErrorKind::Schema: return kSchema;
        case ErrorKind::NotFound: return kNotFound;
        case ErrorKind::InvalidArgument: return kInvalid;
        case ErrorKind::Model: return kModel;
    }
    return kInternal;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Knowledge-graph neighborhood verbalization and link-prediction evaluation"};
    app.set_config("--config", "", "INI/TOML config file (flags override it)");
    app.require_subcommand(1);
    std::string log_level = "warn";
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off")
        ->envname("KGNBR_LOG_LEVEL");
    app.add_option("--workers", c.workers, "worker threads")->envname("KGNBR_WORKERS");
    app.add_option("--seed", c.seed, "random seed")->envname("KGNBR_SEED");

    auto add_graph = [&](CLI::App* s) {
        s->add_option("--triples", c.triples, "train triple file(s)");
        s->add_option("--dialect", c.dialect, "tsv|loose")->envname("KGNBR_DIALECT");
    };
    auto add_catalog = [&](CLI::App* s) {
        s->add_option("--labels", c.labels, "entity labels TSV");
        s->add_option("--descriptions", c.descriptions, "entity descriptions TSV");
        s->add_option("--relation-labels", c.relation_labels, "relation labels TSV");
        s->add_option("--disambiguation", c.disambiguation, "description|id");
    };
    auto add_neighborhood = [&](CLI::App* s) {
        add_graph(s);
        add_catalog(s);
        s->add_option("--inference-triples", c.inference_triples, "inference graph triple file(s)");
        s->add_option("--queries", c.query_triples, "triples to emit queries for (default: train)");
        s->add_option("--split", c.split, "split tag of --queries");
        s->add_option("--neighborhood-graph", c.neighborhood_graph, "train|train+inference");
        s->add_option("--relation-vectors", c.relation_vectors, "relation vectors (word-vector text)");
        s->add_option("--matrix", c.matrix, "cached similarity matrix");
        s->add_option("--tokenizer", c.tokenizer, "whitespace | vocab file | tokenizer JSON spec")
            ->envname("KGNBR_TOKENIZER");
        s->add_option("--cap", c.cap, "neighborhood size cap")->envname("KGNBR_CAP");
        s->add_option("--max-tokens", c.max_tokens, "token budget")->envname("KGNBR_MAX_TOKENS");
    };

    auto* ingest = app.add_subcommand("ingest", "parse triples, write a binary snapshot");
    add_graph(ingest);
    ingest->add_option("--split", c.split, "train|valid|test|inference");
    ingest->add_option("--out", c.out, "snapshot path");
    ingest->add_option("--tsv-out", c.tsv_out, "re-serialized triples");
    ingest->add_flag("--no-header", c.no_header);

    auto* st = app.add_subcommand("stats", "entity/relation/triple counts as TSV");
    add_graph(st);
    st->add_option("--snapshot", c.snapshot, "read a snapshot instead of triples");
    st->add_option("--split", c.split, "train|valid|test|inference");
    st->add_flag("--no-header", c.no_header);

    auto* sim = app.add_subcommand("build-sim", "relation cosine similarity matrix cache");
    sim->add_option("--relation-vectors", c.relation_vectors)->required();
    sim->add_option("--out", c.out)->required();

    auto* emit = app.add_subcommand("emit", "write verbalized dataset records");
    add_neighborhood(emit);
    emit->add_option("--out", c.out, "records (.jsonl or .jsonl.gz)");
    emit->add_option("--neighborhood-dump", c.neighborhood_dump, "per-query neighborhood JSONL");
    emit->add_option("--catalog-dump", c.catalog_dump, "disambiguated catalog TSV");

    auto* score = app.add_subcommand("score", "filtered sampled-ranking evaluation");
    add_catalog(score);
    score->add_option("--dataset", c.dataset);
    score->add_option("--predictions", c.predictions);
    score->add_option("--filter-triples", c.filter_triples, "known-link graphs (train, valid)");
    score->add_option("--test-triples", c.test_triples, "test graph, used with --filter-test");
    score->add_flag("--filter-test", c.filter_test, "also filter known test links");
    score->add_flag("--no-filter", c.no_filter, "unfiltered ranking");
    score->add_option("--sample-size,-k", c.sample_size)->envname("KGNBR_SAMPLE_SIZE");
    score->add_option("--dialect", c.dialect);
    score->add_option("--report", c.report, "metrics TSV");

    auto* ind = app.add_subcommand("eval-inductive", "EM + nearest-entity Hits@k");
    ind->add_option("--dataset", c.dataset);
    ind->add_option("--predictions", c.predictions);
    ind->add_option("--generated-vectors", c.generated_vectors, "vectors keyed by query_id");
    ind->add_option("--entity-vectors", c.entity_vectors, "unit vectors keyed by entity id");
    ind->add_option("--sample-size,-k", c.sample_size)->envname("KGNBR_SAMPLE_SIZE");
    ind->add_option("--report", c.report);

    auto* at = app.add_subcommand("analyze-target", "where the target text appears in inputs");
    at->add_option("--dataset", c.dataset);

    auto* abl = app.add_subcommand("ablate", "neighbor-removal curves with an oracle model");
    add_neighborhood(abl);
    abl->add_option("--oracle", c.oracle, "memorizer|hint_reader|constant");
    abl->add_option("--constant", c.constant_text);
    abl->add_option("--mode", c.mode, "relevant_first|random");
    abl->add_option("--metric", c.metric, "em|target_prob");
    abl->add_option("--removals", c.removals, "removal counts");
    abl->add_option("--seeds", c.seeds, "random-mode repetitions");
    abl->add_option("--limit", c.limit, "first N queries");
    abl->add_option("--sample-size,-k", c.sample_size)->envname("KGNBR_SAMPLE_SIZE");

    auto* pr = app.add_subcommand("prompt", "zero-shot chat prompts, or score chat answers");
    pr->add_option("--dataset", c.dataset);
    pr->add_option("--out", c.out, "prompt JSONL");
    pr->add_flag("--with-neighbors", c.with_neighbors);
    pr->add_option("--answers", c.answers, "answers JSONL to score instead of building prompts");

    auto* orc = app.add_subcommand("oracle", "deterministic stand-in model predictions");
    add_catalog(orc);
    orc->add_option("--kind", c.oracle, "memorizer|hint_reader|constant");
    orc->add_option("--triples", c.triples, "train triples (memorizer)");
    orc->add_option("--dialect", c.dialect);
    orc->add_option("--constant", c.constant_text);
    orc->add_option("--dataset", c.dataset);
    orc->add_option("--out", c.out);
    orc->add_option("--sample-size,-k", c.sample_size)->envname("KGNBR_SAMPLE_SIZE");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    spdlog::set_level(spdlog::level::from_str(log_level));
    try {
        if (*ingest) return cmd_ingest(c, out);
        if (*st) return cmd_stats(c, out);
        if (*sim) return cmd_build_sim(c, out);
        if (*emit) return cmd_emit(c, out);
        if (*score) return cmd_score(c, out);
        if (*ind) return cmd_eval_inductive(c, out);
        if (*at) return cmd_analyze_target(c, out);
        if (*abl) return cmd_ablate(c, out);
        if (*pr) return cmd_prompt(c, out);
        if (*orc) return cmd_oracle(c, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

}  // namespace kgnbr::cli
