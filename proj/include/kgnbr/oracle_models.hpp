#pragma once

#include "kgnbr/dataset.hpp"
#include "kgnbr/evaluation.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kgnbr {

// Text-in/text-out model: one prediction set per dataset record.
using ModelFn = std::function<PredictionSet(const DatasetRecord&)>;

// Known answers of the record's query in `train` (tails for forward queries, heads for inverse
// ones), in entity catalog order, at log-probs -1, -2, ...
PredictionSet memorizer_predict(const DatasetRecord& record, const KnowledgeGraph& train,
                                const TextCatalog& catalog, std::size_t k = kDefaultSampleSize);

// Entity text of each neighbor segment of the input, in order, at log-probs -1, -2, ...
PredictionSet hint_reader_predict(const DatasetRecord& record, const TextCatalog& catalog,
                                  std::size_t k = kDefaultSampleSize);

PredictionSet constant_predict(const DatasetRecord& record, const std::string& text);

// Splits "<relation> <entity>" / "inverse of <relation> <entity>" using the catalog's relation
// texts (longest match). nullopt if no relation text prefixes the segment.
std::optional<std::string> neighbor_entity_text(std::string_view segment,
                                                const TextCatalog& catalog);

enum class OracleKind { Memorizer, HintReader, Constant };
OracleKind parse_oracle_kind(std::string_view s);

struct OracleSpec {
    OracleKind kind = OracleKind::Memorizer;
    const KnowledgeGraph* train = nullptr;  // memorizer
    std::string constant_text;              // constant
    std::uint64_t seed = 0;
    std::size_t k = kDefaultSampleSize;
};

ModelFn make_oracle(const OracleSpec& spec, const TextCatalog& catalog);

}  // namespace kgnbr
