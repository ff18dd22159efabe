#include "kgnbr/prompting.hpp"

#include "kgnbr/error.hpp"
#include "kgnbr/rng.hpp"
#include "kgnbr/unicode.hpp"

#include <numeric>

namespace kgnbr {

const std::string_view kSystemPromptPlain =
    "You will be provided with a incomplete triplet from the Wikidata knowledge graph. Your task "
    "is to complete the triplet with a tail (subject) based on the given triplet head (object) "
    "and relation. Your answer must only include the tail of the triplet with prefix 'Tail:'. Do "
    "not include relation into the answer.";

const std::string_view kSystemPromptWithNeighbors =
    "You will be provided with a incomplete triplet from the Wikidata knowledge graph. Your task "
    "is to complete the triplet with a tail (subject) based on the given triplet head (object) "
    "and relation. Triplet to complete IS NOT in the list of related nodes, but it may contain "
    "helpful clues. Your answer must only include the tail of the triplet with prefix 'Tail:'. "
    "Do not include relation into the answer.";

PromptPair build_prompt(const VerbalizedQuery& vq, bool with_neighbors) {
    PromptPair p;
    std::string triplet = "Triplet to complete: " + std::string(vq.task()) + ".";
    if (!with_neighbors) {
        p.system_text = kSystemPromptPlain;
        p.user_text = std::move(triplet);
        return p;
    }
    p.system_text = kSystemPromptWithNeighbors;
    p.user_text = "Adjacent relations: ";
    for (std::size_t i = 0; i < vq.neighbor_spans.size(); ++i) {
        if (i > 0) p.user_text += kSeparator;
        p.user_text += vq.neighbor(i);
    }
    p.user_text += "\n";
    p.user_text += triplet;
    return p;
}

std::string parse_answer(std::string_view raw) {
    std::string_view s = text::trim(raw);
    if (text::starts_with_icase(s, "tail")) {
        std::string_view rest = text::trim(s.substr(4));
        if (!rest.empty() && rest.front() == ':') s = rest.substr(1);
    }
    s = s.substr(0, s.find('\n'));
    return std::string(text::trim(s));
}

std::string normalize_answer(std::string_view input) {
    std::string cur(input);
    for (int i = 0; i < 8; ++i) {
        std::string next = text::nfc(cur);
        next = text::to_lower(next);
        next = text::nfc(next);
        next = text::strip_punctuation(next);
        next = text::collapse_whitespace(next);
        if (next == cur) break;
        cur = std::move(next);
    }
    return cur;
}

std::vector<std::size_t> select_predictions(std::size_t available, std::size_t k,
                                            std::uint64_t seed) {
    std::vector<std::size_t> perm(available);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    stable_shuffle(std::span(perm), seed);
    perm.resize(std::min(k, available));
    return perm;
}

int gpt_hits(std::span<const std::string> predictions, std::string_view target_text,
             std::size_t k, std::uint64_t seed) {
    if (predictions.size() > 3) throw invalid_argument("at most 3 predictions per query");
    if (k == 0) throw invalid_argument("k must be positive");
    const std::string target = normalize_answer(target_text);
    for (auto i : select_predictions(predictions.size(), k, seed)) {
        auto candidate = normalize_answer(predictions[i]);
        if (!candidate.empty() && candidate == target) return 1;
    }
    return 0;
}

}  // namespace kgnbr
