#include "kgnbr/oracle_models.hpp"

#include "kgnbr/error.hpp"

namespace kgnbr {

PredictionSet memorizer_predict(const DatasetRecord& record, const KnowledgeGraph& train,
                                const TextCatalog& catalog, std::size_t k) {
    PredictionSet p{record.query_id, {}, k};
    const auto& vocab = train.vocabulary();
    auto head = vocab.find_entity(record.head_id);
    auto rel = vocab.find_relation(record.relation_id);
    if (!head || !rel) return p;
    const KnowledgeGraph* graphs[] = {&train};
    auto answers = record.inverse ? known_heads(*head, *rel, graphs) : known_tails(*head, *rel, graphs);
    double lp = -1.0;
    for (auto e : answers) {
        if (p.candidates.size() == k) break;
        const std::string* text = catalog.find_entity_text(vocab.entity_name(e));
        if (!text) continue;
        p.candidates.push_back({*text, lp});
        lp -= 1.0;
    }
    return p;
}

std::optional<std::string> neighbor_entity_text(std::string_view segment,
                                                const TextCatalog& catalog) {
    constexpr std::string_view kInverse = "inverse of ";
    std::string_view rest = segment;
    if (rest.starts_with(kInverse)) rest.remove_prefix(kInverse.size());
    for (const auto& rel : catalog.relation_texts_by_length()) {
        if (rest.size() > rel.size() + 1 && rest.starts_with(rel) && rest[rel.size()] == ' ')
            return std::string(rest.substr(rel.size() + 1));
    }
    // A relation text may itself begin with "inverse of".
    if (rest.size() != segment.size()) {
        for (const auto& rel : catalog.relation_texts_by_length())
            if (segment.size() > rel.size() + 1 && segment.starts_with(rel) && segment[rel.size()] == ' ')
                return std::string(segment.substr(rel.size() + 1));
    }
    return std::nullopt;
}

PredictionSet hint_reader_predict(const DatasetRecord& record, const TextCatalog& catalog,
                                  std::size_t k) {
    PredictionSet p{record.query_id, {}, k};
    auto vq = split_input(record.input_text);
    double lp = -1.0;
    for (std::size_t i = 0; i < vq.neighbor_spans.size() && p.candidates.size() < k; ++i) {
        auto entity = neighbor_entity_text(vq.neighbor(i), catalog);
        if (!entity) continue;
        p.candidates.push_back({std::move(*entity), lp});
        lp -= 1.0;
    }
    return p;
}

PredictionSet constant_predict(const DatasetRecord& record, const std::string& text) {
    return {record.query_id, {{text, -1.0}}, kDefaultSampleSize};
}

OracleKind parse_oracle_kind(std::string_view s) {
    if (s == "memorizer") return OracleKind::Memorizer;
    if (s == "hint_reader" || s == "hint-reader") return OracleKind::HintReader;
    if (s == "constant") return OracleKind::Constant;
    throw invalid_argument("unknown oracle kind '" + std::string(s) + "'");
}

ModelFn make_oracle(const OracleSpec& spec, const TextCatalog& catalog) {
    switch (spec.kind) {
        case OracleKind::Memorizer:
            if (!spec.train) throw invalid_argument("memorizer oracle needs a train graph");
            return [train = spec.train, &catalog, k = spec.k](const DatasetRecord& r) {
                return memorizer_predict(r, *train, catalog, k);
            };
        case OracleKind::HintReader:
            return [&catalog, k = spec.k](const DatasetRecord& r) {
                return hint_reader_predict(r, catalog, k);
            };
        case OracleKind::Constant:
            return [text = spec.constant_text](const DatasetRecord& r) {
                return constant_predict(r, text);
            };
    }
    throw invalid_argument("unknown oracle kind");
}

}  // namespace kgnbr
