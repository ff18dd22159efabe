#pragma once

#include "kgnbr/neighborhood.hpp"
#include "kgnbr/text_catalog.hpp"
#include "kgnbr/tokenizer.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kgnbr {

inline constexpr std::string_view kTaskPrefix = "predict ";
inline constexpr std::string_view kInversePrefix = "inverse of ";
inline constexpr std::string_view kSeparator = " [SEP] ";
inline constexpr std::size_t kDefaultMaxTokens = 512;

struct TokenBudget {
    std::size_t max_tokens = kDefaultMaxTokens;
    std::shared_ptr<const Tokenizer> tokenizer = std::make_shared<WhitespaceTokenizer>();
};

std::size_t count_tokens(std::string_view text, const TokenBudget& budget);

// Byte range [begin, end) of input_text.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const noexcept { return end - begin; }
    friend bool operator==(const Span&, const Span&) = default;
};

struct VerbalizedQuery {
    std::string input_text;
    std::string target_text;
    Span task_span;
    std::vector<Span> neighbor_spans;
    std::size_t included_count = 0;
    std::size_t token_count = 0;

    std::string_view task() const { return slice(task_span); }
    std::string_view neighbor(std::size_t i) const { return slice(neighbor_spans.at(i)); }
    std::string_view slice(Span s) const {
        return std::string_view(input_text).substr(s.begin, s.size());
    }
};

// Task string, then neighbor strings in order while the whole text stays within the budget.
// Stops at the first neighbor that does not fit. Throws InvalidArgument if the task alone does
// not fit.
VerbalizedQuery assemble_input(std::string_view task, std::span<const std::string> neighbors,
                               std::string_view target_text, const TokenBudget& budget);

// Splits an assembled input on the separator back into task and neighbor spans.
VerbalizedQuery split_input(std::string_view input_text, std::string_view target_text = {});

// Maps queries and neighbor triples to text through a catalog keyed by raw identifiers.
class Verbalizer {
public:
    Verbalizer(const Vocabulary& vocab, const TextCatalog& catalog)
        : vocab_(&vocab), catalog_(&catalog) {}

    // "predict <head> <relation>" or "predict <head> inverse of <relation>".
    std::string task(const Query& query) const;
    // "<relation> <other>" or "inverse of <relation> <other>".
    std::string neighbor(const NeighborTriple& n) const;
    std::string target(const Query& query) const;

    const std::string& entity_text(EntityId e) const;
    const std::string& relation_text(RelationId r) const;

    VerbalizedQuery assemble(const Neighborhood& nbh, const TokenBudget& budget) const;

private:
    const Vocabulary* vocab_;
    const TextCatalog* catalog_;
};

}  // namespace kgnbr
