#include "kgnbr/unicode.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <cctype>

namespace kgnbr::text {

namespace {

bool valid_utf8(std::string_view s) {
    int32_t i = 0;
    const auto len = static_cast<int32_t>(s.size());
    while (i < len) {
        UChar32 c;
        U8_NEXT(s.data(), i, len, c);
        if (c < 0) return false;
    }
    return true;
}

bool all_ascii(std::string_view s) {
    for (unsigned char c : s)
        if (c >= 0x80) return false;
    return true;
}

// Decodes the code point ending at `end`; returns its start offset.
int32_t prev_code_point(std::string_view s, int32_t end, UChar32& c) {
    int32_t i = end;
    U8_PREV(s.data(), 0, i, c);
    return i;
}

bool is_space(UChar32 c) { return u_isUWhiteSpace(c) || c == '\t' || c == '\n' || c == '\r'; }

bool is_strippable(UChar32 c) {
    if (u_ispunct(c)) return true;
    // Backtick, quotes-as-symbols and similar wrappers chat models put around answers.
    return c == '`' || c == '\'' || c == '"' || c == 0x00B4;
}

}  // namespace

std::string nfc(std::string_view s) {
    if (all_ascii(s) || !valid_utf8(s)) return std::string(s);
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) return std::string(s);
    icu::UnicodeString src =
        icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    if (norm->isNormalized(src, status) && U_SUCCESS(status)) return std::string(s);
    status = U_ZERO_ERROR;
    icu::UnicodeString out = norm->normalize(src, status);
    if (U_FAILURE(status)) return std::string(s);
    std::string result;
    out.toUTF8String(result);
    return result;
}

std::string_view trim(std::string_view s) {
    if (!valid_utf8(s)) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
        return s;
    }
    const auto len = static_cast<int32_t>(s.size());
    int32_t begin = 0;
    while (begin < len) {
        int32_t next = begin;
        UChar32 c;
        U8_NEXT(s.data(), next, len, c);
        if (!is_space(c)) break;
        begin = next;
    }
    int32_t end = len;
    while (end > begin) {
        UChar32 c;
        int32_t start = prev_code_point(s, end, c);
        if (!is_space(c)) break;
        end = start;
    }
    return s.substr(static_cast<std::size_t>(begin), static_cast<std::size_t>(end - begin));
}

std::string canonical(std::string_view s) {
    std::string n = nfc(s);
    return std::string(trim(n));
}

std::string to_lower(std::string_view s) {
    if (all_ascii(s) || !valid_utf8(s)) {
        std::string out(s);
        for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
        return out;
    }
    icu::UnicodeString u =
        icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    u.toLower(icu::Locale::getRoot());
    std::string out;
    u.toUTF8String(out);
    return out;
}

std::string strip_punctuation(std::string_view s) {
    if (!valid_utf8(s)) return std::string(trim(s));
    const auto len = static_cast<int32_t>(s.size());
    int32_t begin = 0;
    while (begin < len) {
        int32_t next = begin;
        UChar32 c;
        U8_NEXT(s.data(), next, len, c);
        if (!is_space(c) && !is_strippable(c)) break;
        begin = next;
    }
    int32_t end = len;
    while (end > begin) {
        UChar32 c;
        int32_t start = prev_code_point(s, end, c);
        if (!is_space(c) && !is_strippable(c)) break;
        end = start;
    }
    return std::string(s.substr(static_cast<std::size_t>(begin), static_cast<std::size_t>(end - begin)));
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    const bool utf8 = valid_utf8(s);
    const auto len = static_cast<int32_t>(s.size());
    bool pending_space = false;
    int32_t i = 0;
    while (i < len) {
        int32_t start = i;
        UChar32 c;
        if (utf8) {
            U8_NEXT(s.data(), i, len, c);
        } else {
            c = static_cast<unsigned char>(s[static_cast<std::size_t>(i)]);
            ++i;
        }
        bool space = utf8 ? is_space(c) : std::isspace(static_cast<int>(c)) != 0;
        if (space) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.append(s.substr(static_cast<std::size_t>(start), static_cast<std::size_t>(i - start)));
    }
    return out;
}

bool starts_with_icase(std::string_view s, std::string_view prefix) {
    if (s.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(s[i])) !=
            std::tolower(static_cast<unsigned char>(prefix[i])))
            return false;
    }
    return true;
}

}  // namespace kgnbr::text
