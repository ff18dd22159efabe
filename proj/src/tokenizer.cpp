#include "kgnbr/tokenizer.hpp"

#include "kgnbr/error.hpp"
#include "kgnbr/line_io.hpp"
#include "kgnbr/unicode.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>

namespace kgnbr {

namespace {

bool is_ws(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

template <typename F>
void for_each_word(std::string_view text, F&& f) {
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_ws(static_cast<unsigned char>(text[i]))) ++i;
        if (i >= text.size()) break;
        std::size_t j = i;
        while (j < text.size() && !is_ws(static_cast<unsigned char>(text[j]))) ++j;
        f(text.substr(i, j - i));
        i = j;
    }
}

// Byte length of the UTF-8 sequence starting with `lead`.
std::size_t utf8_len(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead >> 5) == 0x6) return 2;
    if ((lead >> 4) == 0xE) return 3;
    if ((lead >> 3) == 0x1E) return 4;
    return 1;
}

}  // namespace

std::size_t WhitespaceTokenizer::count(std::string_view text) const {
    std::size_t n = 0;
    for_each_word(text, [&](std::string_view) { ++n; });
    return n;
}

SubwordTokenizer::SubwordTokenizer(std::unordered_set<std::string> vocab, Options options)
    : vocab_(std::move(vocab)), options_(std::move(options)) {
    if (vocab_.empty()) throw invalid_argument("subword tokenizer vocabulary is empty");
}

SubwordTokenizer SubwordTokenizer::from_vocab_file(const std::string& path, Options options) {
    LineReader reader(path);
    std::unordered_set<std::string> vocab;
    std::string line;
    while (reader.next(line)) {
        // Accept "token" or "token<TAB>score" lines.
        auto tab = line.find('\t');
        std::string token = tab == std::string::npos ? line : line.substr(0, tab);
        if (!token.empty()) vocab.insert(std::move(token));
    }
    return SubwordTokenizer(std::move(vocab), std::move(options));
}

std::size_t SubwordTokenizer::count(std::string_view text) const {
    std::size_t n = 0;
    for_each_word(text, [&](std::string_view w) { n += count_word(w); });
    return n;
}

std::size_t SubwordTokenizer::count_word(std::string_view word) const {
    if (word.size() > 2 && word.front() == '[' && word.back() == ']' &&
        vocab_.contains(std::string(word)))
        return 1;
    std::string lowered;
    if (options_.lowercase) {
        lowered = text::to_lower(word);
        word = lowered;
    }
    // ASCII punctuation splits a word into separate pieces.
    std::size_t n = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (std::ispunct(static_cast<unsigned char>(word[i]))) {
            if (i > start) n += count_piece(word.substr(start, i - start));
            n += count_piece(word.substr(i, 1));
            start = i + 1;
        }
    }
    if (start < word.size()) n += count_piece(word.substr(start));
    return n;
}

std::size_t SubwordTokenizer::count_piece(std::string_view piece) const {
    if (piece.size() > options_.max_word_bytes) return 1;
    std::size_t n = 0;
    std::size_t pos = 0;
    std::string candidate;
    while (pos < piece.size()) {
        // Longest match on UTF-8 boundaries.
        std::size_t best = 0;
        std::size_t end = pos;
        std::size_t probe = pos;
        while (probe < piece.size()) {
            probe += utf8_len(static_cast<unsigned char>(piece[probe]));
            if (probe > piece.size()) probe = piece.size();
            candidate.assign(pos == 0 ? "" : options_.continuation_prefix);
            candidate.append(piece.substr(pos, probe - pos));
            if (vocab_.contains(candidate)) {
                best = probe - pos;
                end = probe;
            }
        }
        if (best == 0) return 1;  // whole word is unknown
        ++n;
        pos = end;
    }
    return n;
}

std::shared_ptr<const Tokenizer> make_tokenizer(const std::string& spec) {
    if (spec.empty() || spec == "whitespace") return std::make_shared<WhitespaceTokenizer>();
    if (spec.size() > 5 && spec.substr(spec.size() - 5) == ".json") {
        std::ifstream in(spec);
        if (!in) throw io_error("cannot open tokenizer spec " + spec);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw schema_error("tokenizer spec " + spec + ": " + e.what());
        }
        auto type = j.value("type", std::string("subword"));
        if (type == "whitespace") return std::make_shared<WhitespaceTokenizer>();
        if (type != "subword") throw schema_error("unknown tokenizer type '" + type + "'");
        if (!j.contains("vocab")) throw schema_error("tokenizer spec " + spec + " lacks \"vocab\"");
        SubwordTokenizer::Options opt;
        opt.lowercase = j.value("lowercase", false);
        opt.continuation_prefix = j.value("continuation_prefix", std::string("##"));
        std::filesystem::path vocab = j.at("vocab").get<std::string>();
        if (vocab.is_relative()) vocab = std::filesystem::path(spec).parent_path() / vocab;
        return std::make_shared<SubwordTokenizer>(
            SubwordTokenizer::from_vocab_file(vocab.string(), opt));
    }
    return std::make_shared<SubwordTokenizer>(SubwordTokenizer::from_vocab_file(spec, {}));
}

}  // namespace kgnbr
