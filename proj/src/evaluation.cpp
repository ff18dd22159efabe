#include "kgnbr/evaluation.hpp"

#include "kgnbr/error.hpp"
#include "kgnbr/line_io.hpp"
#include "kgnbr/unicode.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kgnbr {

// ---- prediction records ----

std::string to_json_line(const PredictionSet& p) {
    nlohmann::ordered_json j;
    j["query_id"] = p.query_id;
    auto& arr = j["candidates"] = nlohmann::ordered_json::array();
    for (const auto& c : p.candidates) {
        nlohmann::ordered_json e;
        e["text"] = c.text;
        e["log_prob"] = c.log_prob;
        arr.push_back(std::move(e));
    }
    return j.dump();
}

PredictionSet parse_prediction_record(std::string_view line, std::size_t k) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw schema_error(std::string("invalid JSON prediction: ") + e.what());
    }
    if (!j.is_object() || !j.contains("query_id") || !j["query_id"].is_string())
        throw schema_error("prediction record lacks a string \"query_id\"");
    PredictionSet p;
    p.query_id = j["query_id"].get<std::string>();
    p.k = k;
    if (j.contains("error")) {
        spdlog::warn("query {}: adapter reported an error; scoring with no candidates", p.query_id);
        return p;
    }
    auto it = j.find("candidates");
    if (it == j.end() || !it->is_array())
        throw schema_error("prediction " + p.query_id + " lacks a \"candidates\" array");
    for (const auto& c : *it) {
        if (!c.is_object() || !c.contains("text") || !c["text"].is_string() ||
            !c.contains("log_prob") || !c["log_prob"].is_number())
            throw schema_error("prediction " + p.query_id + " has a malformed candidate");
        double lp = c["log_prob"].get<double>();
        if (!std::isfinite(lp) || lp > 0.0)
            throw schema_error("prediction " + p.query_id + " has log_prob " + std::to_string(lp) +
                               " (must be finite and <= 0)");
        p.candidates.push_back({c["text"].get<std::string>(), lp});
    }
    if (p.candidates.size() > k)
        throw schema_error(fmt::format("prediction {} has {} candidates, sample size is {}",
                                       p.query_id, p.candidates.size(), k));
    return p;
}

std::vector<PredictionSet> read_predictions(const std::string& path, std::size_t k) {
    LineReader reader(path);
    std::vector<PredictionSet> out;
    std::string line;
    while (reader.next(line)) {
        if (line.empty()) continue;
        try {
            out.push_back(parse_prediction_record(line, k));
        } catch (const Error& e) {
            throw ParseError(path, reader.line_number(), e.what());
        }
    }
    return out;
}

void write_predictions(std::span<const PredictionSet> predictions, const std::string& path) {
    LineWriter out(path);
    for (const auto& p : predictions) out.write_line(to_json_line(p));
    out.close();
}

// ---- scoring primitives ----

int exact_match(std::string_view generated, std::string_view target) {
    return text::canonical(generated) == text::canonical(target) ? 1 : 0;
}

const Candidate* top_candidate(const PredictionSet& p) {
    const Candidate* best = nullptr;
    for (const auto& c : p.candidates)
        if (!best || c.log_prob > best->log_prob) best = &c;
    return best;
}

EntityScores scores_from_samples(const PredictionSet& p, const TextCatalog& catalog) {
    EntityScores s;
    for (const auto& c : p.candidates) {
        const std::string* id = catalog.entity_for_text(c.text);
        if (!id) continue;
        auto [it, inserted] = s.finite.emplace(*id, c.log_prob);
        if (!inserted) it->second = std::max(it->second, c.log_prob);
    }
    return s;
}

RankingResult filtered_rank(const std::string& target_id, const EntityScores& scores,
                            const std::unordered_set<std::string>& filter,
                            const TextCatalog& catalog) {
    if (!catalog.find_entity_text(target_id))
        throw not_found("target entity " + target_id + " is not in the catalog");
    RankingResult r;
    r.filtered = !filter.empty();
    const double target = scores.score(target_id);
    if (target == kNegInf) return r;
    std::size_t above = 0;
    for (const auto& [id, score] : scores.finite) {
        if (id == target_id || filter.contains(id)) continue;
        if (score >= target) ++above;
    }
    r.rank = above + 1;
    return r;
}

double hits_at_k(std::span<const RankingResult> ranks, std::size_t k) {
    if (k == 0) throw invalid_argument("hits@k needs k >= 1");
    if (ranks.empty()) throw invalid_argument("hits@k of an empty ranking list");
    auto hits = std::count_if(ranks.begin(), ranks.end(),
                              [k](const RankingResult& r) { return r.within(k); });
    return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

double combined_metric(double em, double hits1) {
    if (!(em >= 0.0 && em <= 1.0) || !(hits1 >= 0.0 && hits1 <= 1.0))
        throw invalid_argument("combined metric inputs must lie in [0, 1]");
    return 1000.0 * em + hits1;
}

std::string format_tsv(const MetricsReport& report) {
    std::string out = "metric\tvalue\n";
    for (const auto& [k, v] : report.hits_at) out += fmt::format("hits@{}\t{:.6f}\n", k, v);
    out += fmt::format("exact_match\t{:.6f}\n", report.exact_match);
    out += fmt::format("combined\t{:.6f}\n", report.combined);
    out += fmt::format("n_queries\t{}\n", report.n_queries);
    return out;
}

std::string format_table(const MetricsReport& report) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& [k, v] : report.hits_at)
        rows.emplace_back(fmt::format("Hits@{}", k), fmt::format("{:.4f}", v));
    rows.emplace_back("EM", fmt::format("{:.4f}", report.exact_match));
    rows.emplace_back("1000EM + Hits@1", fmt::format("{:.4f}", report.combined));
    rows.emplace_back("queries", std::to_string(report.n_queries));
    std::size_t w0 = 6, w1 = 5;
    for (const auto& [a, b] : rows) {
        w0 = std::max(w0, a.size());
        w1 = std::max(w1, b.size());
    }
    std::string rule = "+" + std::string(w0 + 2, '-') + "+" + std::string(w1 + 2, '-') + "+\n";
    std::string out = rule + fmt::format("| {:<{}} | {:>{}} |\n", "metric", w0, "value", w1) + rule;
    for (const auto& [a, b] : rows) out += fmt::format("| {:<{}} | {:>{}} |\n", a, w0, b, w1);
    return out + rule;
}

namespace {

MetricsReport summarize(const std::vector<RankingResult>& ranks, std::size_t em_hits,
                        const std::vector<std::size_t>& ks) {
    MetricsReport rep;
    rep.n_queries = ranks.size();
    if (ranks.empty()) return rep;
    for (auto k : ks) rep.hits_at[k] = hits_at_k(ranks, k);
    rep.exact_match = static_cast<double>(em_hits) / static_cast<double>(ranks.size());
    rep.combined = combined_metric(rep.exact_match, hits_at_k(ranks, 1));
    return rep;
}

std::unordered_map<std::string, const PredictionSet*> by_query_id(
    std::span<const PredictionSet> predictions) {
    std::unordered_map<std::string, const PredictionSet*> m;
    m.reserve(predictions.size());
    for (const auto& p : predictions)
        if (!m.emplace(p.query_id, &p).second)
            throw schema_error("duplicate predictions for query " + p.query_id);
    return m;
}

}  // namespace

ScoreResult score_transductive(std::span<const DatasetRecord> records,
                               std::span<const PredictionSet> predictions,
                               const TextCatalog& catalog,
                               std::span<const KnowledgeGraph* const> filter_graphs,
                               const ScoreOptions& options) {
    auto preds = by_query_id(predictions);
    ScoreResult out;
    out.ranks.reserve(records.size());
    std::size_t em = 0;
    const PredictionSet empty;
    for (const auto& rec : records) {
        auto it = preds.find(rec.query_id);
        const PredictionSet& p = it == preds.end() ? empty : *it->second;
        if (const auto* top = top_candidate(p)) em += exact_match(top->text, rec.target_text);

        std::unordered_set<std::string> filter;
        if (options.filtered && !filter_graphs.empty()) {
            const auto& vocab = filter_graphs.front()->vocabulary();
            auto head = vocab.find_entity(rec.head_id);
            auto rel = vocab.find_relation(rec.relation_id);
            if (head && rel) {
                auto known = rec.inverse ? known_heads(*head, *rel, filter_graphs)
                                         : known_tails(*head, *rel, filter_graphs);
                for (auto e : known) filter.insert(vocab.entity_name(e));
            }
            filter.erase(rec.target_id);
        }
        auto r = filtered_rank(rec.target_id, scores_from_samples(p, catalog), filter, catalog);
        r.query_id = rec.query_id;
        r.filtered = options.filtered;
        out.ranks.push_back(std::move(r));
    }
    out.report = summarize(out.ranks, em, options.ks);
    return out;
}

// ---- flat index ----

EntityIndex::EntityIndex(VectorTable table) : table_(std::move(table)) {
    for (std::size_t i = 0; i < table_.size(); ++i) {
        auto r = table_.row(i);
        double n = std::sqrt(std::inner_product(r.begin(), r.end(), r.begin(), 0.0));
        if (std::abs(n - 1.0) > kNormTolerance)
            throw invalid_argument(fmt::format("entity vector {} has norm {:.8f}, expected 1",
                                               table_.keys[i], n));
    }
}

EntityIndex load_entity_index(const std::string& path) {
    return EntityIndex(load_vector_table(path));
}

std::vector<std::pair<std::string, double>> nearest_entities(std::span<const double> query,
                                                             const EntityIndex& index,
                                                             std::size_t k) {
    if (query.size() != index.dim())
        throw invalid_argument(fmt::format("query has dim {}, index has dim {}", query.size(),
                                           index.dim()));
    const auto& t = index.table();
    const std::size_t n = t.size();
    std::vector<double> sims(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto r = t.row(i);
        sims[i] = std::inner_product(r.begin(), r.end(), query.begin(), 0.0);
    }
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    k = std::min(k, n);
    auto before = [&](std::uint32_t a, std::uint32_t b) {
        return sims[a] != sims[b] ? sims[a] > sims[b] : a < b;
    };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), before);
    std::vector<std::pair<std::string, double>> out;
    out.reserve(k);
    for (std::size_t i = 0; i < k; ++i) out.emplace_back(t.keys[idx[i]], sims[idx[i]]);
    return out;
}

ScoreResult score_inductive(std::span<const DatasetRecord> records,
                            std::span<const PredictionSet> predictions,
                            const VectorTable& generated, const EntityIndex& index,
                            const ScoreOptions& options) {
    if (generated.dim != index.dim())
        throw invalid_argument(fmt::format("generated vectors have dim {}, index has dim {}",
                                           generated.dim, index.dim()));
    auto preds = by_query_id(predictions);
    const std::size_t depth =
        options.ks.empty() ? 1 : *std::max_element(options.ks.begin(), options.ks.end());
    ScoreResult out;
    std::size_t em = 0;
    for (const auto& rec : records) {
        if (auto it = preds.find(rec.query_id); it != preds.end())
            if (const auto* top = top_candidate(*it->second))
                em += exact_match(top->text, rec.target_text);
        RankingResult r;
        r.query_id = rec.query_id;
        r.filtered = false;
        if (const auto* row = generated.find(rec.query_id)) {
            auto hits = nearest_entities(generated.row(*row), index, std::max<std::size_t>(depth, 1));
            for (std::size_t i = 0; i < hits.size(); ++i) {
                if (hits[i].first == rec.target_id) {
                    r.rank = i + 1;
                    break;
                }
            }
        }
        out.ranks.push_back(std::move(r));
    }
    out.report = summarize(out.ranks, em, options.ks);
    return out;
}

// ---- target position ----

std::string_view to_string(TargetPosition p) {
    switch (p) {
        case TargetPosition::InTask: return "in_task";
        case TargetPosition::InNeighborhood: return "in_neighborhood";
        case TargetPosition::NotInInput: return "not_in_input";
    }
    return "not_in_input";
}

TargetPosition classify_target_position(const VerbalizedQuery& vq, std::string_view target_text) {
    const std::string target = text::nfc(target_text);
    if (target.empty()) return TargetPosition::NotInInput;
    if (text::nfc(vq.task()).find(target) != std::string::npos) return TargetPosition::InTask;
    for (std::size_t i = 0; i < vq.neighbor_spans.size(); ++i)
        if (text::nfc(vq.neighbor(i)).find(target) != std::string::npos)
            return TargetPosition::InNeighborhood;
    return TargetPosition::NotInInput;
}

TargetPositionCounts analyze_target_positions(std::span<const DatasetRecord> records) {
    TargetPositionCounts c;
    for (const auto& r : records) {
        switch (classify_target_position(split_input(r.input_text, r.target_text), r.target_text)) {
            case TargetPosition::InTask: ++c.in_task; break;
            case TargetPosition::InNeighborhood: ++c.in_neighborhood; break;
            case TargetPosition::NotInInput: ++c.not_in_input; break;
        }
    }
    return c;
}

}  // namespace kgnbr
