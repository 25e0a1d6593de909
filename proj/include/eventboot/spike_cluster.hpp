#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "eventboot/corpus.hpp"
#include "eventboot/runlog.hpp"
#include "eventboot/union_find.hpp"
#include "eventboot/util.hpp"

namespace eventboot {

struct ClusterConfig {
    double theta_pair = 1.0;        // pair-score admission threshold
    int min_shared_entities = 1;    // blocking: candidate pairs share at least this many
    int max_cluster_size = 100;     // components larger than this are discarded
};

struct PairScore {
    std::string doc_a;
    std::string doc_b;
    Date date;
    double score = 0.0;
};

struct ClusterEdge {
    std::string doc_a;
    std::string doc_b;
    double score = 0.0;
};

struct Cluster {
    std::string cluster_id;
    Date date;
    std::vector<std::string> doc_ids;          // sorted
    std::vector<std::string> shared_entities;  // canonical keys in >= 2 members, sorted
    std::vector<ClusterEdge> edges;            // admitted edges between members
};

// Entity-spike score for a same-day article pair: over the shared entities,
// sum of (mentions of the entity on that day) / (mentions in the whole
// corpus). Rare entities spiking on one date dominate; ubiquitous ones
// contribute almost nothing.
inline double pair_score(const Document& a, const Document& b, const EntityCounts& counts) {
    if (a.date != b.date) {
        throw DataError("pair_score: documents are from different dates (" +
                        a.date.str() + " vs " + b.date.str() + ")");
    }
    std::vector<std::string> ea = entity_set(a);
    std::vector<std::string> eb = entity_set(b);
    double score = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        int cmp = ea[i].compare(eb[j]);
        if (cmp < 0) {
            ++i;
        } else if (cmp > 0) {
            ++j;
        } else {
            std::uint64_t corpus = counts.corpus_count(ea[i]);
            if (corpus > 0) {
                score += static_cast<double>(counts.date_count(ea[i], a.date)) /
                         static_cast<double>(corpus);
            }
            ++i;
            ++j;
        }
    }
    return score;
}

namespace detail {

struct DayView {
    std::vector<std::size_t> doc_indices;                 // into corpus.documents()
    std::vector<std::vector<std::string>> entity_sets;    // per local doc, sorted
};

inline DayView day_view(const Corpus& corpus, Date date) {
    DayView v;
    auto it = corpus.by_date().find(date);
    if (it == corpus.by_date().end()) {
        throw DataError("no documents on date " + date.str());
    }
    v.doc_indices = it->second;
    v.entity_sets.reserve(v.doc_indices.size());
    for (std::size_t idx : v.doc_indices) {
        v.entity_sets.push_back(entity_set(corpus.documents()[idx]));
    }
    return v;
}

// Local doc-index pairs sharing at least min_shared entities, via an inverted
// index entity -> same-day docs. Each unordered pair appears once, ordered by
// (i, j).
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> candidate_index_pairs(
        const DayView& day, int min_shared) {
    std::unordered_map<std::string, std::vector<std::uint32_t>> postings;
    for (std::uint32_t d = 0; d < day.entity_sets.size(); ++d) {
        for (const auto& e : day.entity_sets[d]) postings[e].push_back(d);
    }
    std::unordered_map<std::uint64_t, std::uint32_t> shared;
    for (const auto& [entity, docs] : postings) {
        if (docs.size() < 2) continue;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            for (std::size_t j = i + 1; j < docs.size(); ++j) {
                std::uint64_t key = (static_cast<std::uint64_t>(docs[i]) << 32) | docs[j];
                ++shared[key];
            }
        }
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (const auto& [key, n] : shared) {
        if (static_cast<int>(n) >= min_shared) {
            pairs.emplace_back(static_cast<std::uint32_t>(key >> 32),
                               static_cast<std::uint32_t>(key & 0xffffffffu));
        }
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

inline double score_sets(const std::vector<std::string>& ea, const std::vector<std::string>& eb,
                         Date date, const EntityCounts& counts) {
    double score = 0.0;
    std::size_t i = 0, j = 0;
    while (i < ea.size() && j < eb.size()) {
        int cmp = ea[i].compare(eb[j]);
        if (cmp < 0) ++i;
        else if (cmp > 0) ++j;
        else {
            std::uint64_t corpus = counts.corpus_count(ea[i]);
            if (corpus > 0) {
                score += static_cast<double>(counts.date_count(ea[i], date)) /
                         static_cast<double>(corpus);
            }
            ++i; ++j;
        }
    }
    return score;
}

}  // namespace detail

// Candidate same-day pairs as doc_id pairs, ordered. Blocking is sound for
// any min_shared >= 1 because a pair with no shared entity scores zero.
inline std::vector<std::pair<std::string, std::string>> candidate_pairs(
        const Corpus& corpus, Date date, const ClusterConfig& cfg = {}) {
    detail::DayView day = detail::day_view(corpus, date);
    auto idx_pairs = detail::candidate_index_pairs(day, cfg.min_shared_entities);
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(idx_pairs.size());
    for (auto [i, j] : idx_pairs) {
        out.emplace_back(corpus.documents()[day.doc_indices[i]].doc_id,
                         corpus.documents()[day.doc_indices[j]].doc_id);
    }
    return out;
}

// Scores every candidate pair of one date.
inline std::vector<PairScore> score_date(const Corpus& corpus, Date date,
                                         const ClusterConfig& cfg = {}) {
    detail::DayView day = detail::day_view(corpus, date);
    auto idx_pairs = detail::candidate_index_pairs(day, cfg.min_shared_entities);
    std::vector<PairScore> out;
    out.reserve(idx_pairs.size());
    for (auto [i, j] : idx_pairs) {
        PairScore ps;
        ps.doc_a = corpus.documents()[day.doc_indices[i]].doc_id;
        ps.doc_b = corpus.documents()[day.doc_indices[j]].doc_id;
        ps.date = date;
        ps.score = detail::score_sets(day.entity_sets[i], day.entity_sets[j], date,
                                      corpus.counts());
        out.push_back(std::move(ps));
    }
    return out;
}

// Union-find over edges with score >= theta_pair. Connected components with
// at least two members become clusters; components above max_cluster_size are
// discarded (and logged) since a hub entity can glue a whole day together.
// Cluster ids are assigned per date by the smallest member doc_id, so output
// is deterministic for a given input multiset.
inline std::vector<Cluster> form_clusters(const Corpus& corpus,
                                          const std::vector<PairScore>& scored_pairs,
                                          const ClusterConfig& cfg = {},
                                          RunLog* log = nullptr) {
    std::vector<Cluster> out;
    if (scored_pairs.empty()) return out;
    Date date = scored_pairs.front().date;

    std::vector<std::string> ids;
    std::unordered_map<std::string, std::size_t> local;
    auto local_id = [&](const std::string& doc_id) {
        auto [it, inserted] = local.emplace(doc_id, ids.size());
        if (inserted) ids.push_back(doc_id);
        return it->second;
    };

    std::vector<std::tuple<std::size_t, std::size_t, double>> edges;
    for (const auto& p : scored_pairs) {
        if (p.date != date) {
            throw DataError("form_clusters: pairs span multiple dates (" + date.str() +
                            " vs " + p.date.str() + ")");
        }
        if (p.score >= cfg.theta_pair) {
            edges.emplace_back(local_id(p.doc_a), local_id(p.doc_b), p.score);
        }
    }
    if (edges.empty()) return out;

    UnionFind uf(ids.size());
    for (const auto& [a, b, s] : edges) uf.unite(a, b);

    std::unordered_map<std::size_t, std::vector<std::size_t>> components;
    for (std::size_t i = 0; i < ids.size(); ++i) components[uf.find(i)].push_back(i);

    std::vector<std::vector<std::size_t>> kept;
    for (auto& [root, members] : components) {
        if (members.size() < 2) continue;
        if (static_cast<int>(members.size()) > cfg.max_cluster_size) {
            if (log) {
                log->event("cluster", {{"event", "discarded_oversize"},
                                       {"date", date.str()},
                                       {"size", members.size()}});
            }
            continue;
        }
        kept.push_back(std::move(members));
    }

    for (auto& members : kept) {
        Cluster c;
        c.date = date;
        for (std::size_t m : members) c.doc_ids.push_back(ids[m]);
        std::sort(c.doc_ids.begin(), c.doc_ids.end());
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Cluster& a, const Cluster& b) {
        return a.doc_ids.front() < b.doc_ids.front();
    });

    for (std::size_t k = 0; k < out.size(); ++k) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), ":%04zu", k);
        out[k].cluster_id = date.str() + buf;
    }

    // Shared entities: canonical keys appearing in at least two member docs.
    for (auto& c : out) {
        std::unordered_map<std::string, int> seen;
        for (const auto& doc_id : c.doc_ids) {
            for (const auto& e : entity_set(corpus.at(doc_id))) ++seen[e];
        }
        for (const auto& [e, n] : seen) {
            if (n >= 2) c.shared_entities.push_back(e);
        }
        std::sort(c.shared_entities.begin(), c.shared_entities.end());
    }

    // Attach the admitted edges internal to each cluster.
    std::unordered_map<std::string, std::size_t> doc_cluster;
    for (std::size_t k = 0; k < out.size(); ++k) {
        for (const auto& id : out[k].doc_ids) doc_cluster[id] = k;
    }
    for (const auto& [a, b, s] : edges) {
        auto it = doc_cluster.find(ids[a]);
        if (it == doc_cluster.end()) continue;
        ClusterEdge e;
        e.doc_a = std::min(ids[a], ids[b]);
        e.doc_b = std::max(ids[a], ids[b]);
        e.score = s;
        out[it->second].edges.push_back(std::move(e));
    }
    for (auto& c : out) {
        std::sort(c.edges.begin(), c.edges.end(), [](const ClusterEdge& x, const ClusterEdge& y) {
            return std::tie(x.doc_a, x.doc_b) < std::tie(y.doc_a, y.doc_b);
        });
    }
    return out;
}

// Full clustering pass: every date scored and clustered independently (and in
// parallel), results concatenated in date order.
inline std::vector<Cluster> cluster_corpus(const Corpus& corpus, const ClusterConfig& cfg = {},
                                           unsigned workers = 0, RunLog* log = nullptr) {
    std::vector<Date> dates;
    for (const auto& [date, idxs] : corpus.by_date()) dates.push_back(date);

    auto per_date = parallel_map_indexed<std::vector<Cluster>>(
        dates.size(), workers, [&](std::size_t i) {
            auto scored = score_date(corpus, dates[i], cfg);
            auto clusters = form_clusters(corpus, scored, cfg, log);
            if (log) {
                log->event("cluster", {{"event", "date_done"},
                                       {"date", dates[i].str()},
                                       {"pairs_scored", scored.size()},
                                       {"clusters", clusters.size()}});
            }
            return clusters;
        });

    std::vector<Cluster> out;
    for (auto& cs : per_date) {
        for (auto& c : cs) out.push_back(std::move(c));
    }
    return out;
}

inline OJson cluster_to_json(const Cluster& c) {
    OJson j;
    j["cluster_id"] = c.cluster_id;
    j["date"] = c.date.str();
    j["doc_ids"] = c.doc_ids;
    j["shared_entities"] = c.shared_entities;
    OJson edges = OJson::array();
    for (const auto& e : c.edges) edges.push_back({e.doc_a, e.doc_b, e.score});
    j["edges"] = std::move(edges);
    return j;
}

inline Cluster parse_cluster_json(const std::string& line, std::size_t line_no) {
    Json j = detail::parse_json_line(line, line_no);
    Cluster c;
    c.cluster_id = detail::require_string(j, "cluster_id", line_no);
    auto date = Date::parse(detail::require_string(j, "date", line_no));
    if (!date) throw data_error_at(line_no, "date", "not a valid calendar day");
    c.date = *date;
    c.doc_ids = detail::string_array(j, "doc_ids", line_no);
    if (c.doc_ids.size() < 2) throw data_error_at(line_no, "doc_ids", "cluster needs >= 2 docs");
    c.shared_entities = detail::string_array(j, "shared_entities", line_no);
    if (auto it = j.find("edges"); it != j.end() && it->is_array()) {
        for (const auto& ej : *it) {
            if (!ej.is_array() || ej.size() != 3) {
                throw data_error_at(line_no, "edges", "expected [doc_a, doc_b, score]");
            }
            c.edges.push_back({ej[0].get<std::string>(), ej[1].get<std::string>(),
                               ej[2].get<double>()});
        }
    }
    return c;
}

inline void write_clusters_jsonl(const std::string& path, const std::vector<Cluster>& clusters) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    for (const auto& c : clusters) out << cluster_to_json(c).dump() << '\n';
}

inline std::vector<Cluster> read_clusters_jsonl(const std::string& path) {
    std::vector<Cluster> out;
    auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        out.push_back(parse_cluster_json(lines[i], i + 1));
    }
    return out;
}

}  // namespace eventboot
