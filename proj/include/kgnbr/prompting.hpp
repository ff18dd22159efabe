#pragma once

#include "kgnbr/verbalizer.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kgnbr {

extern const std::string_view kSystemPromptPlain;
extern const std::string_view kSystemPromptWithNeighbors;

struct PromptPair {
    std::string system_text;
    std::string user_text;
};

// "Triplet to complete: <task>." optionally preceded by "Adjacent relations: <neighbors>\n",
// neighbors joined by " [SEP] ".
PromptPair build_prompt(const VerbalizedQuery& vq, bool with_neighbors);

// Drops a leading "Tail:" (any case), keeps the first line, trims. Empty string when nothing is
// left.
std::string parse_answer(std::string_view raw);

// NFC, lowercase, strip surrounding punctuation/quotes, collapse whitespace; iterated to a fixed
// point so that normalize(normalize(x)) == normalize(x).
std::string normalize_answer(std::string_view text);

// Seeded choice of which of the available predictions are consulted at each k. The k = 1 pick
// is always the first element of the k = 3 pick.
std::vector<std::size_t> select_predictions(std::size_t available, std::size_t k,
                                            std::uint64_t seed);

// 1 iff one of the k selected predictions matches the target after normalization.
int gpt_hits(std::span<const std::string> predictions, std::string_view target_text,
             std::size_t k, std::uint64_t seed);

}  // namespace kgnbr
