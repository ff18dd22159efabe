#include "kgnbr/ablation.hpp"

#include "kgnbr/error.hpp"
#include "kgnbr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kgnbr {

AblationMode parse_ablation_mode(std::string_view s) {
    if (s == "relevant_first" || s == "relevant-first") return AblationMode::RelevantFirst;
    if (s == "random") return AblationMode::Random;
    throw invalid_argument("unknown ablation mode '" + std::string(s) + "'");
}

AblationMetric parse_ablation_metric(std::string_view s) {
    if (s == "em" || s == "exact_match") return AblationMetric::ExactMatch;
    if (s == "target_prob" || s == "target_logprob" || s == "logprob")
        return AblationMetric::TargetProbability;
    throw invalid_argument("unknown ablation metric '" + std::string(s) + "'");
}

double query_metric(const PredictionSet& p, std::string_view target_text, AblationMetric metric) {
    if (metric == AblationMetric::ExactMatch) {
        const auto* top = top_candidate(p);
        return top ? exact_match(top->text, target_text) : 0.0;
    }
    double best = kNegInf;
    for (const auto& c : p.candidates)
        if (exact_match(c.text, target_text)) best = std::max(best, c.log_prob);
    return std::exp(best);
}

namespace {

double run(const AblationItem& item, const std::vector<std::string>& neighbors,
           const ModelFn& model, AblationMetric metric, const TokenBudget& budget) {
    DatasetRecord r = item.record;
    r.input_text = assemble_input(item.task, neighbors, r.target_text, budget).input_text;
    PredictionSet p;
    try {
        p = model(r);
    } catch (const Error& e) {
        throw Error(ErrorKind::Model, "query " + r.query_id + ": " + e.what());
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Model, "query " + r.query_id + ": " + e.what());
    }
    return query_metric(p, r.target_text, metric);
}

std::vector<std::string> without(const std::vector<std::string>& all,
                                 const std::vector<bool>& removed) {
    std::vector<std::string> out;
    out.reserve(all.size());
    for (std::size_t i = 0; i < all.size(); ++i)
        if (!removed[i]) out.push_back(all[i]);
    return out;
}

}  // namespace

std::vector<std::size_t> removal_order(const AblationItem& item, const ModelFn& model,
                                       AblationMode mode, AblationMetric metric,
                                       const TokenBudget& budget, std::uint64_t seed) {
    const std::size_t n = item.neighbors.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (mode == AblationMode::Random) {
        stable_shuffle(std::span(order), derive_seed(seed, item.record.query_id));
        return order;
    }
    const std::size_t included =
        assemble_input(item.task, item.neighbors, item.record.target_text, budget).included_count;
    const double base = run(item, item.neighbors, model, metric, budget);
    std::vector<double> relevance(n, 0.0);
    std::vector<bool> removed(n, false);
    for (std::size_t i = 0; i < included; ++i) {
        removed[i] = true;
        relevance[i] = base - run(item, without(item.neighbors, removed), model, metric, budget);
        removed[i] = false;
    }
    std::stable_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(included),
                     [&](std::size_t a, std::size_t b) { return relevance[a] > relevance[b]; });
    return order;
}

std::vector<AblationPoint> neighbor_ablation(std::span<const AblationItem> items,
                                             const ModelFn& model, AblationMode mode,
                                             std::span<const std::size_t> removals,
                                             std::uint64_t seed, AblationMetric metric,
                                             const TokenBudget& budget) {
    if (items.empty()) throw invalid_argument("ablation needs at least one query");
    std::vector<double> sums(removals.size(), 0.0);
    for (const auto& item : items) {
        auto order = removal_order(item, model, mode, metric, budget, seed);
        for (std::size_t c = 0; c < removals.size(); ++c) {
            std::vector<bool> removed(item.neighbors.size(), false);
            const std::size_t count = std::min(removals[c], order.size());
            for (std::size_t i = 0; i < count; ++i) removed[order[i]] = true;
            sums[c] += run(item, without(item.neighbors, removed), model, metric, budget);
        }
    }
    std::vector<AblationPoint> out;
    out.reserve(removals.size());
    for (std::size_t c = 0; c < removals.size(); ++c)
        out.push_back({removals[c], sums[c] / static_cast<double>(items.size())});
    return out;
}

AblationItem make_ablation_item(const IndexedQuery& q, const KnowledgeGraph& neighborhood_graph,
                                const Verbalizer& verbalizer, const RelationSimilarity& similarity,
                                std::size_t cap) {
    const auto& vocab = neighborhood_graph.vocabulary();
    auto nbh = form_neighborhood(q.query, neighborhood_graph, similarity, cap);
    AblationItem item;
    item.record.query_id = q.id();
    item.record.head_id = vocab.entity_name(q.query.head);
    item.record.relation_id = vocab.relation_name(q.query.relation);
    item.record.target_id = q.query.target ? vocab.entity_name(*q.query.target) : std::string();
    item.record.target_text = verbalizer.target(q.query);
    item.record.inverse = q.query.inverse;
    item.task = verbalizer.task(q.query);
    item.neighbors.reserve(nbh.neighbors.size());
    for (const auto& n : nbh.neighbors) item.neighbors.push_back(verbalizer.neighbor(n));
    return item;
}

}  // namespace kgnbr
