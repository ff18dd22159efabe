#include "kgnbr/verbalizer.hpp"

#include "kgnbr/error.hpp"

namespace kgnbr {

std::size_t count_tokens(std::string_view text, const TokenBudget& budget) {
    return budget.tokenizer->count(text);
}

VerbalizedQuery assemble_input(std::string_view task, std::span<const std::string> neighbors,
                               std::string_view target_text, const TokenBudget& budget) {
    if (!budget.tokenizer) throw invalid_argument("token budget has no tokenizer");
    VerbalizedQuery vq;
    vq.target_text = std::string(target_text);
    vq.input_text = std::string(task);
    vq.task_span = {0, task.size()};
    std::size_t tokens = budget.tokenizer->count(task);
    if (tokens > budget.max_tokens)
        throw invalid_argument("task segment needs " + std::to_string(tokens) +
                               " tokens, budget is " + std::to_string(budget.max_tokens));
    const std::size_t sep_tokens = budget.tokenizer->count(kSeparator);
    for (const auto& n : neighbors) {
        std::size_t add = sep_tokens + budget.tokenizer->count(n);
        if (tokens + add > budget.max_tokens) break;
        tokens += add;
        vq.input_text += kSeparator;
        std::size_t begin = vq.input_text.size();
        vq.input_text += n;
        vq.neighbor_spans.push_back({begin, vq.input_text.size()});
    }
    vq.included_count = vq.neighbor_spans.size();
    vq.token_count = tokens;
    return vq;
}

VerbalizedQuery split_input(std::string_view input_text, std::string_view target_text) {
    VerbalizedQuery vq;
    vq.input_text = std::string(input_text);
    vq.target_text = std::string(target_text);
    std::size_t pos = input_text.find(kSeparator);
    vq.task_span = {0, pos == std::string_view::npos ? input_text.size() : pos};
    while (pos != std::string_view::npos) {
        std::size_t begin = pos + kSeparator.size();
        pos = input_text.find(kSeparator, begin);
        vq.neighbor_spans.push_back({begin, pos == std::string_view::npos ? input_text.size() : pos});
    }
    vq.included_count = vq.neighbor_spans.size();
    return vq;
}

const std::string& Verbalizer::entity_text(EntityId e) const {
    if (e.value >= vocab_->entity_count())
        throw not_found("unknown entity id " + std::to_string(e.value));
    const auto& id = vocab_->entity_name(e);
    const auto& text = catalog_->entity_text(id);
    if (text.empty()) throw invalid_argument("empty text for entity " + id);
    return text;
}

const std::string& Verbalizer::relation_text(RelationId r) const {
    if (r.value >= vocab_->relation_count())
        throw not_found("unknown relation id " + std::to_string(r.value));
    const auto& id = vocab_->relation_name(r);
    const auto& text = catalog_->relation_text(id);
    if (text.empty()) throw invalid_argument("empty text for relation " + id);
    return text;
}

std::string Verbalizer::task(const Query& query) const {
    std::string out(kTaskPrefix);
    out += entity_text(query.head);
    out += ' ';
    if (query.inverse) out += kInversePrefix;
    out += relation_text(query.relation);
    return out;
}

std::string Verbalizer::neighbor(const NeighborTriple& n) const {
    std::string out;
    if (n.direction == Direction::Incoming) out += kInversePrefix;
    out += relation_text(n.triple.relation);
    out += ' ';
    out += entity_text(n.other());
    return out;
}

std::string Verbalizer::target(const Query& query) const {
    return query.target ? entity_text(*query.target) : std::string();
}

VerbalizedQuery Verbalizer::assemble(const Neighborhood& nbh, const TokenBudget& budget) const {
    std::string task_text = task(nbh.query);
    std::string target_text = target(nbh.query);
    // Verbalize lazily: only as many neighbors as can possibly fit are needed.
    std::vector<std::string> texts;
    const std::size_t sep_tokens = budget.tokenizer->count(kSeparator);
    std::size_t tokens = budget.tokenizer->count(task_text);
    for (const auto& n : nbh.neighbors) {
        texts.push_back(neighbor(n));
        tokens += sep_tokens + budget.tokenizer->count(texts.back());
        if (tokens > budget.max_tokens) break;
    }
    return assemble_input(task_text, texts, target_text, budget);
}

}  // namespace kgnbr
