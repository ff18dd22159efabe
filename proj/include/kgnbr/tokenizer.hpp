#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>

namespace kgnbr {

// Counts model tokens. Implementations split on whitespace before anything else, so the count
// of `a + " " + b` is count(a) + count(b); assembly relies on this to count incrementally.
class Tokenizer {
public:
    virtual ~Tokenizer() = default;
    virtual std::size_t count(std::string_view text) const = 0;
    virtual std::string_view name() const = 0;
};

class WhitespaceTokenizer final : public Tokenizer {
public:
    std::size_t count(std::string_view text) const override;
    std::string_view name() const override { return "whitespace"; }
};

// Greedy longest-match-first subword tokenizer over a vocabulary file with one token per line
// (WordPiece layout: continuation pieces carry a "##" prefix). Bracketed special tokens such as
// "[SEP]" count as one token when present in the vocabulary; words that cannot be covered count
// as a single unknown token.
class SubwordTokenizer final : public Tokenizer {
public:
    struct Options {
        bool lowercase = false;
        std::string continuation_prefix = "##";
        std::size_t max_word_bytes = 200;
    };

    SubwordTokenizer(std::unordered_set<std::string> vocab, Options options);
    static SubwordTokenizer from_vocab_file(const std::string& path, Options options);

    std::size_t count(std::string_view text) const override;
    std::string_view name() const override { return "subword"; }
    std::size_t vocab_size() const noexcept { return vocab_.size(); }

private:
    std::size_t count_word(std::string_view word) const;
    std::size_t count_piece(std::string_view piece) const;

    std::unordered_set<std::string> vocab_;
    Options options_;
};

// "whitespace", a vocabulary file, or a JSON spec
// {"type": "subword", "vocab": "<path>", "lowercase": false}.
std::shared_ptr<const Tokenizer> make_tokenizer(const std::string& spec);

}  // namespace kgnbr
