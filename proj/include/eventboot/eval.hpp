#pragma once

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "eventboot/jsonl.hpp"
#include "eventboot/runlog.hpp"
#include "eventboot/types.hpp"
#include "eventboot/util.hpp"

namespace eventboot {

struct PRF {
    long long tp = 0;
    long long fp = 0;
    long long fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;

    void finish() {
        precision = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        recall = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        f1 = (precision + recall) > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
};

struct EvalReport {
    PRF micro;
    std::map<std::string, PRF> per_type;
    std::size_t duplicates_dropped = 0;  // identical predictions removed before scoring
};

namespace detail {

// A trigger is identified by its document, the sentence it sits in (token
// list; examples carry no sentence index), its span, and its type. Exact
// match on all four is required for credit.
inline std::string trigger_key(const TriggerExample& ex) {
    std::string key = ex.doc_id;
    key.push_back('\x1e');
    for (const auto& tok : ex.sentence_tokens) {
        key += tok;
        key.push_back('\x1f');
    }
    key.push_back('\x1e');
    key += std::to_string(ex.trigger_begin);
    key.push_back(',');
    key += std::to_string(ex.trigger_end);
    key.push_back('\x1e');
    key += ex.event_type;
    return key;
}

}  // namespace detail

// Micro-averaged trigger scoring. A prediction is a true positive iff an
// unmatched gold trigger agrees on (doc_id, sentence, span, event_type); each
// gold trigger absorbs at most one prediction. Duplicate predictions are
// dropped first so the copy cannot score as a guaranteed false positive.
inline EvalReport score(const std::vector<TriggerExample>& predictions,
                        const std::vector<TriggerExample>& gold, RunLog* log = nullptr) {
    std::unordered_set<std::string> gold_docs;
    for (const auto& g : gold) gold_docs.insert(g.doc_id);
    for (const auto& p : predictions) {
        if (!gold_docs.contains(p.doc_id)) {
            throw DataError("score: prediction references document absent from the gold set: " +
                            p.doc_id);
        }
    }

    std::unordered_map<std::string, long long> gold_left;
    EvalReport report;
    for (const auto& g : gold) {
        gold_left[detail::trigger_key(g)] += 1;
        report.per_type[g.event_type];  // ensure a row even if never predicted
    }

    std::unordered_set<std::string> seen_pred;
    for (const auto& p : predictions) {
        std::string key = detail::trigger_key(p);
        if (!seen_pred.insert(key).second) {
            ++report.duplicates_dropped;
            continue;
        }
        PRF& row = report.per_type[p.event_type];
        auto it = gold_left.find(key);
        if (it != gold_left.end() && it->second > 0) {
            it->second -= 1;
            row.tp += 1;
        } else {
            row.fp += 1;
        }
    }
    std::map<std::string, long long> gold_total;
    for (const auto& g : gold) gold_total[g.event_type] += 1;
    for (auto& [type, row] : report.per_type) {
        auto it = gold_total.find(type);
        long long total = it == gold_total.end() ? 0 : it->second;
        row.fn = total - row.tp;
        row.finish();
        report.micro.tp += row.tp;
        report.micro.fp += row.fp;
        report.micro.fn += row.fn;
    }
    report.micro.finish();
    if (log && report.duplicates_dropped > 0) {
        log->event("score.duplicates_dropped", {{"count", report.duplicates_dropped}});
    }
    return report;
}

struct PairedBootstrapResult {
    double f1_a = 0.0;
    double f1_b = 0.0;
    double delta = 0.0;    // observed f1_b - f1_a
    double p_value = 1.0;  // one-sided: chance the gain is not real
    int n_resamples = 0;
    std::uint64_t seed = 0;
};

// Paired bootstrap over per-document counts: resample the gold documents with
// replacement, pool each system's TP/FP/FN over the resample, and count how
// often system B fails to beat A. Add-one smoothing keeps the p-value off
// exact zero.
inline PairedBootstrapResult paired_bootstrap(const std::vector<TriggerExample>& gold,
                                              const std::vector<TriggerExample>& preds_a,
                                              const std::vector<TriggerExample>& preds_b,
                                              int n_resamples = 10000, std::uint64_t seed = 1) {
    if (n_resamples < 1) throw ConfigError("paired_bootstrap: n_resamples must be >= 1");
    struct Counts {
        long long tp = 0, fp = 0, fn = 0;
    };
    auto per_doc = [&](const std::vector<TriggerExample>& preds) {
        std::unordered_map<std::string, Counts> by_doc;
        for (const auto& g : gold) by_doc[g.doc_id];
        std::unordered_map<std::string, long long> gold_left;
        for (const auto& g : gold) gold_left[detail::trigger_key(g)] += 1;
        std::unordered_set<std::string> seen;
        std::unordered_map<std::string, long long> matched_by_doc;
        for (const auto& p : preds) {
            auto it = by_doc.find(p.doc_id);
            if (it == by_doc.end()) {
                throw DataError("paired_bootstrap: prediction references document absent from the gold set: " +
                                p.doc_id);
            }
            std::string key = detail::trigger_key(p);
            if (!seen.insert(key).second) continue;
            auto git = gold_left.find(key);
            if (git != gold_left.end() && git->second > 0) {
                git->second -= 1;
                it->second.tp += 1;
            } else {
                it->second.fp += 1;
            }
        }
        std::unordered_map<std::string, long long> gold_per_doc;
        for (const auto& g : gold) gold_per_doc[g.doc_id] += 1;
        for (auto& [doc, c] : by_doc) c.fn = gold_per_doc[doc] - c.tp;
        return by_doc;
    };

    auto counts_a = per_doc(preds_a);
    auto counts_b = per_doc(preds_b);

    std::vector<std::string> docs;
    for (const auto& [doc, c] : counts_a) docs.push_back(doc);
    std::sort(docs.begin(), docs.end());

    auto f1_of = [](const Counts& c) {
        double p = (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
        double r = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
        return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    };
    auto pooled = [&](const std::unordered_map<std::string, Counts>& by_doc,
                      const std::vector<std::size_t>& pick) {
        Counts total;
        for (std::size_t i : pick) {
            const Counts& c = by_doc.at(docs[i]);
            total.tp += c.tp;
            total.fp += c.fp;
            total.fn += c.fn;
        }
        return total;
    };

    PairedBootstrapResult res;
    res.n_resamples = n_resamples;
    res.seed = seed;
    std::vector<std::size_t> all(docs.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    res.f1_a = f1_of(pooled(counts_a, all));
    res.f1_b = f1_of(pooled(counts_b, all));
    res.delta = res.f1_b - res.f1_a;

    Rng rng(seed);
    int not_better = 0;
    std::vector<std::size_t> pick(docs.size());
    for (int r = 0; r < n_resamples; ++r) {
        for (auto& i : pick) i = static_cast<std::size_t>(rng.bounded(docs.size()));
        double da = f1_of(pooled(counts_a, pick));
        double db = f1_of(pooled(counts_b, pick));
        if (db - da <= 0.0) ++not_better;
    }
    res.p_value = static_cast<double>(not_better + 1) / static_cast<double>(n_resamples + 1);
    return res;
}

inline OJson prf_to_json(const PRF& p) {
    OJson j;
    j["true_positives"] = p.tp;
    j["false_positives"] = p.fp;
    j["false_negatives"] = p.fn;
    j["precision"] = p.precision;
    j["recall"] = p.recall;
    j["f1"] = p.f1;
    return j;
}

inline OJson report_to_json(const EvalReport& r) {
    OJson j = prf_to_json(r.micro);
    j["duplicates_dropped"] = r.duplicates_dropped;
    OJson per_type = OJson::object();
    for (const auto& [type, row] : r.per_type) per_type[type] = prf_to_json(row);
    j["per_type"] = std::move(per_type);
    return j;
}

// Aligned text table; the pooled row is labeled ALL and printed last.
inline std::string report_table(const EvalReport& r) {
    std::size_t width = 4;  // "type"
    for (const auto& [type, row] : r.per_type) width = std::max(width, type.size());
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(width)) << "type" << std::right
        << std::setw(9) << "P" << std::setw(9) << "R" << std::setw(9) << "F1"
        << std::setw(7) << "TP" << std::setw(7) << "FP" << std::setw(7) << "FN" << "\n";
    auto line = [&](const std::string& name, const PRF& row) {
        out << std::left << std::setw(static_cast<int>(width)) << name << std::right
            << std::fixed << std::setprecision(3) << std::setw(9) << row.precision
            << std::setw(9) << row.recall << std::setw(9) << row.f1
            << std::setw(7) << row.tp << std::setw(7) << row.fp << std::setw(7) << row.fn << "\n";
    };
    for (const auto& [type, row] : r.per_type) line(type, row);
    line("ALL", r.micro);
    return out.str();
}

}  // namespace eventboot
