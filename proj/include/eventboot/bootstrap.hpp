#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "eventboot/corpus.hpp"
#include "eventboot/embeddings.hpp"
#include "eventboot/jsonl.hpp"
#include "eventboot/runlog.hpp"
#include "eventboot/spike_cluster.hpp"
#include "eventboot/stopwords.hpp"
#include "eventboot/tagger.hpp"
#include "eventboot/util.hpp"

namespace eventboot {

struct BootstrapConfig {
    int theta_event = 2;        // min mentions of the single dominant type
    double theta_sim = 0.4;     // strict lower bound on trigger cosine
    double min_margin = 0.0;    // baseline predictions below this are ignored
    int per_type_cap = 200;     // balanced sampling cap per event type
    std::uint64_t sample_seed = 1;
};

struct SupportingMention {
    std::string doc_id;
    std::uint32_t sentence_index = 0;
    std::uint32_t token_index = 0;

    friend bool operator==(const SupportingMention&, const SupportingMention&) = default;
};

struct LabeledCluster {
    std::string cluster_id;
    Date date;
    std::vector<std::string> doc_ids;
    std::string event_type;
    std::vector<SupportingMention> supporting_mentions;  // all of event_type
    std::map<std::string, int> type_counts;              // baseline tallies per type
};

// Run the baseline extractor over every sentence of every member document and
// tally typed trigger mentions. The cluster gets a label only when exactly one
// type reaches theta_event mentions; no type reaching it or several doing so
// yields no label.
inline std::optional<LabeledCluster> label_cluster(const Cluster& cluster, const Corpus& corpus,
                                                   const TaggerModel& model,
                                                   const BootstrapConfig& cfg = {}) {
    std::map<std::string, int> counts;
    std::map<std::string, std::vector<SupportingMention>> mentions;
    for (const auto& doc_id : cluster.doc_ids) {
        const Document& doc = corpus.at(doc_id);
        for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
            for (const auto& p : predict(model, doc.sentences[si])) {
                if (p.margin < cfg.min_margin) continue;
                counts[p.event_type] += 1;
                mentions[p.event_type].push_back(
                    {doc_id, static_cast<std::uint32_t>(si), p.token_index});
            }
        }
    }
    std::string winner;
    int reached = 0;
    for (const auto& [type, n] : counts) {
        if (n >= cfg.theta_event) {
            ++reached;
            winner = type;
        }
    }
    if (reached != 1) return std::nullopt;
    LabeledCluster lc;
    lc.cluster_id = cluster.cluster_id;
    lc.date = cluster.date;
    lc.doc_ids = cluster.doc_ids;
    lc.event_type = winner;
    lc.supporting_mentions = std::move(mentions[winner]);
    lc.type_counts = std::move(counts);
    return lc;
}

struct TriggerAssignment {
    std::uint32_t token_index = 0;
    double similarity = 0.0;
};

namespace detail {

inline bool inside_entity(const Sentence& s, std::size_t i) {
    for (const auto& m : s.entities) {
        if (i >= m.begin && i < m.end) return true;
    }
    return false;
}

}  // namespace detail

// Pick the single token of the sentence closest to the event's canonical
// vector. Tokens inside entity mentions, stopwords, and out-of-vocabulary
// tokens are not eligible. The best similarity must strictly exceed
// theta_sim; ties resolve to the earliest token.
inline std::optional<TriggerAssignment> assign_trigger(const Sentence& s,
                                                       const std::vector<double>& event_vec,
                                                       const EmbeddingTable& table,
                                                       double theta_sim) {
    std::optional<TriggerAssignment> best;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        if (detail::inside_entity(s, i)) continue;
        if (is_stopword(s.tokens[i])) continue;
        const std::vector<double>* vec = table.lookup(s.tokens[i]);
        if (!vec) continue;
        double sim = cosine(*vec, event_vec);
        if (!best || sim > best->similarity) {
            best = TriggerAssignment{static_cast<std::uint32_t>(i), sim};
        }
    }
    if (!best || !(best->similarity > theta_sim)) return std::nullopt;
    return best;
}

struct LabelResult {
    std::vector<LabeledCluster> labeled;
    std::size_t clusters_seen = 0;
    std::size_t clusters_unlabeled = 0;
};

// Cluster labeling over the whole cluster list, preserving input order.
inline LabelResult label_all(const Corpus& corpus, const std::vector<Cluster>& clusters,
                             const TaggerModel& model, const BootstrapConfig& cfg = {},
                             RunLog* log = nullptr) {
    LabelResult res;
    res.clusters_seen = clusters.size();
    for (const auto& cluster : clusters) {
        auto labeled = label_cluster(cluster, corpus, model, cfg);
        if (labeled) {
            res.labeled.push_back(std::move(*labeled));
        } else {
            ++res.clusters_unlabeled;
        }
    }
    if (log) {
        log->event("label.summary", {{"clusters", res.clusters_seen},
                                     {"labeled", res.labeled.size()},
                                     {"unlabeled", res.clusters_unlabeled}});
    }
    return res;
}

struct AssignResult {
    std::vector<TriggerExample> examples;  // deduplicated, pre-sampling
    std::size_t clusters_missing_vector = 0;
    std::size_t sentences_seen = 0;
    std::size_t sentences_assigned = 0;
    std::size_t duplicates_dropped = 0;
};

// Trigger assignment over labeled clusters: at most one trigger per sentence.
// Examples with an identical token sequence keep only their first occurrence
// (clusters arrive date-ordered, so this is deterministic).
inline AssignResult assign_all(const Corpus& corpus, const std::vector<LabeledCluster>& labeled,
                               const CanonicalResult& canon, const EmbeddingTable& table,
                               const BootstrapConfig& cfg = {}, RunLog* log = nullptr) {
    AssignResult res;
    std::unordered_set<std::string> seen_token_keys;
    for (const auto& lc : labeled) {
        auto cit = canon.by_type.find(lc.event_type);
        if (cit == canon.by_type.end()) {
            ++res.clusters_missing_vector;
            if (log) {
                log->event("assign.missing_canonical_vector",
                           {{"cluster_id", lc.cluster_id}, {"event_type", lc.event_type}});
            }
            continue;
        }
        const std::vector<double>& event_vec = cit->second.vector;
        for (const auto& doc_id : lc.doc_ids) {
            const Document& doc = corpus.at(doc_id);
            for (const auto& sent : doc.sentences) {
                ++res.sentences_seen;
                auto hit = assign_trigger(sent, event_vec, table, cfg.theta_sim);
                if (!hit) continue;
                ++res.sentences_assigned;
                std::string key;
                for (const auto& tok : sent.tokens) {
                    key += tok;
                    key.push_back('\x1f');
                }
                if (!seen_token_keys.insert(key).second) {
                    ++res.duplicates_dropped;
                    continue;
                }
                TriggerExample ex;
                ex.doc_id = doc.doc_id;
                ex.sentence_tokens = sent.tokens;
                ex.entities = sent.entities;
                ex.trigger_begin = hit->token_index;
                ex.trigger_end = hit->token_index + 1;
                ex.event_type = lc.event_type;
                ex.source = Source::Bootstrap;
                ex.cluster_id = lc.cluster_id;
                ex.similarity = hit->similarity;
                ex.pos = sent.pos;
                ex.lemma = sent.lemma;
                res.examples.push_back(std::move(ex));
            }
        }
    }
    if (log) {
        log->event("assign.summary", {{"labeled_clusters", labeled.size()},
                                      {"missing_vector", res.clusters_missing_vector},
                                      {"sentences", res.sentences_seen},
                                      {"assigned", res.sentences_assigned},
                                      {"duplicates_dropped", res.duplicates_dropped},
                                      {"examples", res.examples.size()}});
    }
    return res;
}

struct HarvestResult {
    std::vector<LabeledCluster> labeled;
    std::vector<TriggerExample> examples;
    std::size_t clusters_seen = 0;
    std::size_t clusters_unlabeled = 0;
    std::size_t clusters_missing_vector = 0;
    std::size_t sentences_seen = 0;
    std::size_t sentences_assigned = 0;
    std::size_t duplicates_dropped = 0;
};

// Full harvesting pass: label clusters, then assign triggers. Identical to
// running label_all and assign_all back-to-back, which is what the staged
// commands do.
inline HarvestResult harvest(const Corpus& corpus, const std::vector<Cluster>& clusters,
                             const TaggerModel& model, const CanonicalResult& canon,
                             const EmbeddingTable& table, const BootstrapConfig& cfg = {},
                             RunLog* log = nullptr) {
    LabelResult lr = label_all(corpus, clusters, model, cfg, log);
    AssignResult ar = assign_all(corpus, lr.labeled, canon, table, cfg, log);
    HarvestResult res;
    res.labeled = std::move(lr.labeled);
    res.examples = std::move(ar.examples);
    res.clusters_seen = lr.clusters_seen;
    res.clusters_unlabeled = lr.clusters_unlabeled;
    res.clusters_missing_vector = ar.clusters_missing_vector;
    res.sentences_seen = ar.sentences_seen;
    res.sentences_assigned = ar.sentences_assigned;
    res.duplicates_dropped = ar.duplicates_dropped;
    return res;
}

// Type-balanced downsampling: min(per_type_cap, available) per event type,
// drawn without replacement. Types are visited in sorted order from a single
// seeded generator and the pooled result is shuffled, so the output is a
// deterministic function of (examples, cap, seed) alone.
inline std::vector<TriggerExample> sample_balanced(const std::vector<TriggerExample>& examples,
                                                   int per_type_cap, std::uint64_t seed,
                                                   RunLog* log = nullptr) {
    if (per_type_cap < 1) throw ConfigError("per_type_cap must be >= 1");
    std::map<std::string, std::vector<std::size_t>> by_type;
    for (std::size_t i = 0; i < examples.size(); ++i) {
        by_type[examples[i].event_type].push_back(i);
    }
    Rng rng(seed);
    std::vector<std::size_t> chosen;
    for (const auto& [type, idxs] : by_type) {
        std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(per_type_cap), idxs.size());
        std::vector<std::size_t> picks = rng.sample_indices(idxs.size(), k);
        std::sort(picks.begin(), picks.end());
        for (std::size_t p : picks) chosen.push_back(idxs[p]);
        if (log) {
            log->event("sample.type", {{"event_type", type}, {"available", idxs.size()}, {"kept", k}});
        }
    }
    rng.shuffle(chosen);
    std::vector<TriggerExample> out;
    out.reserve(chosen.size());
    for (std::size_t i : chosen) out.push_back(examples[i]);
    return out;
}

inline OJson labeled_cluster_to_json(const LabeledCluster& lc) {
    OJson j;
    j["cluster_id"] = lc.cluster_id;
    j["date"] = lc.date.str();
    j["doc_ids"] = lc.doc_ids;
    j["event_type"] = lc.event_type;
    OJson mentions = OJson::array();
    for (const auto& m : lc.supporting_mentions) {
        mentions.push_back(OJson{{"doc_id", m.doc_id},
                                 {"sentence_index", m.sentence_index},
                                 {"token_index", m.token_index}});
    }
    j["supporting_mentions"] = std::move(mentions);
    OJson counts = OJson::object();
    for (const auto& [type, n] : lc.type_counts) counts[type] = n;
    j["type_counts"] = std::move(counts);
    return j;
}

inline LabeledCluster parse_labeled_cluster_json(const Json& j, std::size_t line_no = 0) {
    if (!j.is_object()) throw data_error_at(line_no, "record", "expected a JSON object");
    LabeledCluster lc;
    lc.cluster_id = detail::require_string(j, "cluster_id", line_no);
    auto date = Date::parse(detail::require_string(j, "date", line_no));
    if (!date) throw data_error_at(line_no, "date", "not a valid calendar day");
    lc.date = *date;
    lc.doc_ids = detail::string_array(j, "doc_ids", line_no);
    lc.event_type = detail::require_string(j, "event_type", line_no);
    if (j.contains("supporting_mentions")) {
        const auto& arr = j.at("supporting_mentions");
        if (!arr.is_array()) throw data_error_at(line_no, "supporting_mentions", "expected an array");
        for (const auto& m : arr) {
            if (!m.is_object() || !m.contains("doc_id") || !m.contains("sentence_index") ||
                !m.contains("token_index")) {
                throw data_error_at(line_no, "supporting_mentions", "mention needs doc_id, sentence_index, token_index");
            }
            SupportingMention sm;
            sm.doc_id = detail::require_string(m, "doc_id", line_no);
            sm.sentence_index = m.at("sentence_index").get<std::uint32_t>();
            sm.token_index = m.at("token_index").get<std::uint32_t>();
            lc.supporting_mentions.push_back(std::move(sm));
        }
    }
    if (j.contains("type_counts")) {
        const auto& counts = j.at("type_counts");
        if (!counts.is_object()) throw data_error_at(line_no, "type_counts", "expected an object");
        for (auto it = counts.begin(); it != counts.end(); ++it) {
            if (!it.value().is_number_integer()) {
                throw data_error_at(line_no, "type_counts", "counts must be integers");
            }
            lc.type_counts[it.key()] = it.value().get<int>();
        }
    }
    return lc;
}

inline void write_labeled_clusters_jsonl(const std::vector<LabeledCluster>& lcs,
                                         const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    for (const auto& lc : lcs) out << labeled_cluster_to_json(lc).dump() << "\n";
}

inline std::vector<LabeledCluster> read_labeled_clusters_jsonl(const std::string& path) {
    std::vector<LabeledCluster> out;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(path)) {
        ++line_no;
        if (line.empty()) continue;
        out.push_back(parse_labeled_cluster_json(detail::parse_json_line(line, line_no), line_no));
    }
    return out;
}

}  // namespace eventboot
