#include "kgnbr/dataset.hpp"

#include "kgnbr/error.hpp"
#include "kgnbr/line_io.hpp"

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <atomic>
#include <charconv>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace kgnbr {

std::string to_json_line(const DatasetRecord& r) {
    nlohmann::ordered_json j;
    j["query_id"] = r.query_id;
    j["input_text"] = r.input_text;
    j["target_text"] = r.target_text;
    j["head_id"] = r.head_id;
    j["relation_id"] = r.relation_id;
    j["target_id"] = r.target_id;
    j["inverse"] = r.inverse;
    return j.dump();
}

namespace {

template <typename T>
T field(const nlohmann::json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw schema_error(std::string("record lacks field \"") + name + "\"");
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw schema_error(std::string("record field \"") + name + "\" has the wrong type");
    }
}

}  // namespace

DatasetRecord parse_dataset_record(std::string_view line) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw schema_error(std::string("invalid JSON record: ") + e.what());
    }
    if (!j.is_object()) throw schema_error("record is not a JSON object");
    DatasetRecord r;
    r.query_id = field<std::string>(j, "query_id");
    r.input_text = field<std::string>(j, "input_text");
    r.target_text = field<std::string>(j, "target_text");
    r.head_id = field<std::string>(j, "head_id");
    r.relation_id = field<std::string>(j, "relation_id");
    r.target_id = field<std::string>(j, "target_id");
    r.inverse = field<bool>(j, "inverse");
    return r;
}

std::vector<DatasetRecord> read_dataset(const std::string& path) {
    LineReader reader(path);
    std::vector<DatasetRecord> out;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        try {
            out.push_back(parse_dataset_record(line));
        } catch (const Error& e) {
            throw ParseError(path, reader.line_number(), e.what());
        }
    }
    return out;
}

std::string IndexedQuery::id() const {
    return std::to_string(triple_index) + (query.inverse ? ":inv" : ":fwd");
}

std::vector<IndexedQuery> emit_queries(const KnowledgeGraph& graph) {
    std::vector<IndexedQuery> out;
    auto triples = graph.triples();
    out.reserve(2 * triples.size());
    for (std::uint32_t i = 0; i < triples.size(); ++i) {
        const auto& t = triples[i];
        out.push_back({i, Query{t.head, t.relation, false, t.tail}});
        out.push_back({i, Query{t.tail, t.relation, true, t.head}});
    }
    return out;
}

std::pair<std::uint32_t, bool> parse_query_id(std::string_view id) {
    auto colon = id.find(':');
    if (colon == std::string_view::npos) throw schema_error("malformed query id '" + std::string(id) + "'");
    std::uint32_t index = 0;
    auto num = id.substr(0, colon);
    auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), index);
    auto dir = id.substr(colon + 1);
    if (ec != std::errc{} || ptr != num.data() + num.size() || (dir != "fwd" && dir != "inv"))
        throw schema_error("malformed query id '" + std::string(id) + "'");
    return {index, dir == "inv"};
}

DatasetRecord make_record(const IndexedQuery& q, const KnowledgeGraph& neighborhood_graph,
                          const Verbalizer& verbalizer, const RelationSimilarity& similarity,
                          const DatasetOptions& options) {
    const auto& vocab = neighborhood_graph.vocabulary();
    auto nbh = form_neighborhood(q.query, neighborhood_graph, similarity, options.cap);
    auto vq = verbalizer.assemble(nbh, options.budget);
    DatasetRecord r;
    r.query_id = q.id();
    r.input_text = std::move(vq.input_text);
    r.target_text = std::move(vq.target_text);
    r.head_id = vocab.entity_name(q.query.head);
    r.relation_id = vocab.relation_name(q.query.relation);
    r.target_id = q.query.target ? vocab.entity_name(*q.query.target) : std::string();
    r.inverse = q.query.inverse;
    return r;
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(error_mu);
                        if (!error) error = std::current_exception();
                        next = n;
                    }
                }
            });
        }
    }
    if (error) std::rethrow_exception(error);
}

WriteSummary write_dataset(std::span<const IndexedQuery> queries,
                           const KnowledgeGraph& neighborhood_graph, const Verbalizer& verbalizer,
                           const RelationSimilarity& similarity, const DatasetOptions& options,
                           const std::string& out_path) {
    LineWriter out(out_path);
    WriteSummary summary;
    constexpr std::size_t kBlock = 8192;
    std::vector<std::string> lines;
    std::vector<std::optional<std::string>> errors;
    for (std::size_t start = 0; start < queries.size(); start += kBlock) {
        const std::size_t n = std::min(kBlock, queries.size() - start);
        lines.assign(n, {});
        errors.assign(n, std::nullopt);
        parallel_for(n, options.workers, [&](std::size_t i) {
            try {
                lines[i] = to_json_line(make_record(queries[start + i], neighborhood_graph,
                                                    verbalizer, similarity, options));
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        });
        for (std::size_t i = 0; i < n; ++i) {
            if (errors[i]) {
                auto id = queries[start + i].id();
                spdlog::warn("skipping query {}: {}", id, *errors[i]);
                summary.skipped.emplace_back(std::move(id), std::move(*errors[i]));
                continue;
            }
            out.write_line(lines[i]);
            ++summary.written;
        }
    }
    out.close();
    return summary;
}

}  // namespace kgnbr
