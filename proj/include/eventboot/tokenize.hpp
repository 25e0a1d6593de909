#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace eventboot {

inline bool is_ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline bool is_ascii_punct(char c) {
    return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
           (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

inline char fold_char(char c) {
    return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string fold_case(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(fold_char(c));
    return out;
}

// Normalized key for an entity surface form: case-folded (ASCII), interior
// whitespace runs collapsed to a single space, ends trimmed. The same surface
// always maps to the same key.
inline std::string canonical_key(const std::string& surface) {
    std::string out;
    out.reserve(surface.size());
    bool pending_space = false;
    for (char c : surface) {
        if (is_ascii_space(c)) {
            if (!out.empty()) pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(fold_char(c));
    }
    return out;
}

struct Tokenized {
    std::vector<std::string> tokens;
    // Half-open [begin, end) byte offsets into the original text.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> offsets;
};

// Whitespace tokenizer with punctuation peeling. Each whitespace-delimited
// chunk is refined: leading punctuation characters split off one by one, then
// trailing ones. A trailing character is kept attached when the remaining core
// still contains the same character, so abbreviations like "U.S." survive
// intact while "Miles." splits. Slicing the input at the returned offsets
// reproduces every token.
inline Tokenized tokenize(const std::string& text) {
    Tokenized out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && is_ascii_space(text[i])) ++i;
        if (i >= n) break;
        std::size_t j = i;
        while (j < n && !is_ascii_space(text[j])) ++j;

        std::size_t begin = i, end = j;
        while (begin + 1 < end && is_ascii_punct(text[begin])) {
            out.tokens.push_back(text.substr(begin, 1));
            out.offsets.emplace_back(begin, begin + 1);
            ++begin;
        }
        std::vector<std::pair<std::uint32_t, std::uint32_t>> tail;
        while (end - begin > 1 && is_ascii_punct(text[end - 1])) {
            char c = text[end - 1];
            bool core_has_same = false;
            for (std::size_t k = begin; k + 1 < end; ++k) {
                if (text[k] == c) { core_has_same = true; break; }
            }
            if (core_has_same) break;
            tail.emplace_back(end - 1, end);
            --end;
        }
        out.tokens.push_back(text.substr(begin, end - begin));
        out.offsets.emplace_back(begin, end);
        for (auto it = tail.rbegin(); it != tail.rend(); ++it) {
            out.tokens.push_back(text.substr(it->first, it->second - it->first));
            out.offsets.push_back(*it);
        }
        i = j;
    }
    return out;
}

}  // namespace eventboot
