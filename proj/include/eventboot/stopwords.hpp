#pragma once

#include <array>
#include <string>
#include <string_view>
#include <unordered_set>

#include "eventboot/tokenize.hpp"

namespace eventboot {

// Fixed function-word list consulted after case folding; trigger assignment
// never picks one of these.
inline constexpr std::array<std::string_view, 50> kStopwords = {
    "the", "a", "an", "and", "or", "but", "if", "then", "than", "that",
    "this", "these", "those", "is", "am", "are", "was", "were", "be", "been",
    "being", "to", "of", "in", "on", "at", "by", "for", "with", "from",
    "as", "it", "its", "he", "she", "they", "we", "you", "i", "not",
    "no", "do", "does", "did", "have", "has", "had", "will", "would", "there",
};

inline bool is_stopword(const std::string& token) {
    static const std::unordered_set<std::string_view> set(kStopwords.begin(), kStopwords.end());
    return set.contains(fold_case(token));
}

}  // namespace eventboot
