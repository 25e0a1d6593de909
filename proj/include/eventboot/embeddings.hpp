#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "eventboot/tokenize.hpp"
#include "eventboot/types.hpp"
#include "eventboot/util.hpp"

namespace eventboot {

// cos(u, v) = dot / (|u| |v|). A zero-norm input carries no information and
// yields 0 rather than a division error.
inline double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw DataError("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                        std::to_string(v.size()) + ")");
    }
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    return cosine(std::span<const double>(u), std::span<const double>(v));
}

// Pretrained token vectors in the whitespace-delimited text format:
// first line "<vocab_size> <dim>", then one "<token> <f1> ... <f_dim>" row per
// word. Lookup tries the raw token first, then its case-folded form.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return vectors_.size(); }

    void insert(const std::string& token, std::vector<double> vec) {
        if (dim_ == 0) dim_ = vec.size();
        if (vec.size() != dim_) {
            throw DataError("embedding for '" + token + "' has dimension " +
                            std::to_string(vec.size()) + ", table has " + std::to_string(dim_));
        }
        vectors_[token] = std::move(vec);
    }

    const std::vector<double>* lookup(const std::string& token) const {
        auto it = vectors_.find(token);
        if (it != vectors_.end()) return &it->second;
        std::string folded = fold_case(token);
        if (folded != token) {
            it = vectors_.find(folded);
            if (it != vectors_.end()) return &it->second;
        }
        return nullptr;
    }

    bool contains(const std::string& token) const { return lookup(token) != nullptr; }

    const std::unordered_map<std::string, std::vector<double>>& vectors() const {
        return vectors_;
    }

private:
    std::size_t dim_ = 0;
    std::unordered_map<std::string, std::vector<double>> vectors_;
};

inline EmbeddingTable load_embeddings(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open embeddings file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw DataError("embeddings file is empty: " + path);
    std::istringstream header(line);
    long long vocab = 0, dim = 0;
    if (!(header >> vocab >> dim) || vocab < 0 || dim <= 0) {
        throw data_error_at(1, "header", "expected '<vocab_size> <dim>'");
    }

    EmbeddingTable table(static_cast<std::size_t>(dim));
    std::size_t line_no = 1;
    std::vector<double> vec;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string token;
        row >> token;
        vec.clear();
        double x;
        while (row >> x) vec.push_back(x);
        if (vec.size() != static_cast<std::size_t>(dim)) {
            throw data_error_at(line_no, token,
                                "expected " + std::to_string(dim) + " values, got " +
                                    std::to_string(vec.size()));
        }
        table.insert(token, vec);
    }
    return table;
}

inline void write_embeddings(const std::string& path, const EmbeddingTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write embeddings file: " + path);
    std::vector<std::string> tokens;
    tokens.reserve(table.size());
    for (const auto& [tok, vec] : table.vectors()) tokens.push_back(tok);
    std::sort(tokens.begin(), tokens.end());
    out << tokens.size() << ' ' << table.dim() << '\n';
    for (const auto& tok : tokens) {
        out << tok;
        for (double x : *table.lookup(tok)) out << ' ' << format_double(x);
        out << '\n';
    }
}

// Mean embedding of an event type's gold triggers. A multi-token trigger
// contributes the mean of its in-vocabulary token vectors as one element.
struct CanonicalVector {
    std::string event_type;
    std::vector<double> vector;
    std::uint32_t support = 0;  // number of contributing gold triggers
};

struct CanonicalResult {
    std::map<std::string, CanonicalVector> by_type;
    std::vector<std::string> skipped_types;  // every gold trigger out of vocabulary
};

inline CanonicalResult canonical_vectors(const std::vector<TriggerExample>& gold,
                                         const EmbeddingTable& table) {
    if (gold.empty()) throw DataError("canonical_vectors: gold example list is empty");

    // Per type, collect (trigger text, trigger vector); summation order is
    // fixed by sorting on the trigger text so the mean is bitwise reproducible
    // regardless of input order.
    std::map<std::string, std::vector<std::pair<std::string, std::vector<double>>>> triggers;
    std::map<std::string, std::size_t> seen_types;
    for (const auto& ex : gold) {
        ++seen_types[ex.event_type];
        std::vector<double> sum(table.dim(), 0.0);
        std::size_t in_vocab = 0;
        std::string text;
        for (std::uint32_t t = ex.trigger_begin; t < ex.trigger_end; ++t) {
            const std::string& tok = ex.sentence_tokens[t];
            if (!text.empty()) text += ' ';
            text += tok;
            if (const auto* vec = table.lookup(tok)) {
                for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += (*vec)[d];
                ++in_vocab;
            }
        }
        if (in_vocab == 0) continue;
        for (auto& x : sum) x /= static_cast<double>(in_vocab);
        triggers[ex.event_type].emplace_back(std::move(text), std::move(sum));
    }

    CanonicalResult result;
    for (auto& [type, vecs] : triggers) {
        std::sort(vecs.begin(), vecs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        CanonicalVector canon;
        canon.event_type = type;
        canon.vector.assign(table.dim(), 0.0);
        for (const auto& [text, vec] : vecs) {
            for (std::size_t d = 0; d < vec.size(); ++d) canon.vector[d] += vec[d];
        }
        for (auto& x : canon.vector) x /= static_cast<double>(vecs.size());
        canon.support = static_cast<std::uint32_t>(vecs.size());
        result.by_type.emplace(type, std::move(canon));
    }
    for (const auto& [type, n] : seen_types) {
        if (!result.by_type.count(type)) result.skipped_types.push_back(type);
    }
    return result;
}

}  // namespace eventboot
