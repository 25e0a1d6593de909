#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "eventboot/jsonl.hpp"
#include "eventboot/types.hpp"
#include "eventboot/util.hpp"

namespace eventboot {

// Mention-level counts per entity: how often each canonical entity appears on
// each date, and in the corpus overall. Each occurrence counts, so an entity
// mentioned five times in one document contributes five.
class EntityCounts {
public:
    struct Stat {
        std::uint64_t corpus = 0;
        std::unordered_map<std::int32_t, std::uint32_t> per_date;
    };

    void add(const std::string& canonical, Date date, std::uint32_t n = 1) {
        Stat& s = stats_[canonical];
        s.corpus += n;
        s.per_date[date.key()] += n;
        total_ += n;
    }

    void merge(const EntityCounts& other) {
        for (const auto& [entity, stat] : other.stats_) {
            Stat& s = stats_[entity];
            s.corpus += stat.corpus;
            for (const auto& [d, n] : stat.per_date) s.per_date[d] += n;
        }
        total_ += other.total_;
    }

    std::uint64_t corpus_count(const std::string& e) const {
        auto it = stats_.find(e);
        return it == stats_.end() ? 0 : it->second.corpus;
    }

    std::uint32_t date_count(const std::string& e, Date date) const {
        auto it = stats_.find(e);
        if (it == stats_.end()) return 0;
        auto dit = it->second.per_date.find(date.key());
        return dit == it->second.per_date.end() ? 0 : dit->second;
    }

    std::uint64_t total_mentions() const { return total_; }
    std::size_t n_entities() const { return stats_.size(); }
    const std::unordered_map<std::string, Stat>& stats() const { return stats_; }

private:
    std::unordered_map<std::string, Stat> stats_;
    std::uint64_t total_ = 0;
};

// Deduplicated canonical entity keys of a document, sorted. Set semantics: an
// entity mentioned five times appears once.
inline std::vector<std::string> entity_set(const Document& doc) {
    std::vector<std::string> keys;
    for (const auto& s : doc.sentences) {
        for (const auto& m : s.entities) keys.push_back(m.canonical);
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

// Immutable view over an ingested document collection: documents grouped by
// date plus fully populated entity counts. Safe for concurrent readers.
class Corpus {
public:
    static Corpus from_documents(std::vector<Document> docs) {
        Corpus c;
        c.docs_ = std::move(docs);
        for (std::size_t i = 0; i < c.docs_.size(); ++i) {
            const Document& d = c.docs_[i];
            auto [it, inserted] = c.by_id_.emplace(d.doc_id, i);
            if (!inserted) throw DataError("duplicate doc_id: " + d.doc_id);
            c.by_date_[d.date].push_back(i);
            for (const auto& s : d.sentences) {
                for (const auto& m : s.entities) c.counts_.add(m.canonical, d.date);
            }
        }
        // Within a date, documents are ordered by doc_id so every downstream
        // stage sees the same sequence regardless of input order.
        for (auto& [date, idxs] : c.by_date_) {
            std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
                return c.docs_[a].doc_id < c.docs_[b].doc_id;
            });
        }
        return c;
    }

    const std::vector<Document>& documents() const { return docs_; }
    const std::map<Date, std::vector<std::size_t>>& by_date() const { return by_date_; }
    const EntityCounts& counts() const { return counts_; }

    std::size_t size() const { return docs_.size(); }

    std::size_t n_sentences() const {
        std::size_t n = 0;
        for (const auto& d : docs_) n += d.sentences.size();
        return n;
    }

    const Document* find(const std::string& doc_id) const {
        auto it = by_id_.find(doc_id);
        return it == by_id_.end() ? nullptr : &docs_[it->second];
    }

    const Document& at(const std::string& doc_id) const {
        const Document* d = find(doc_id);
        if (!d) throw DataError("unknown doc_id: " + doc_id);
        return *d;
    }

private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::map<Date, std::vector<std::size_t>> by_date_;
    EntityCounts counts_;
};

// Single-pass ingestion of the JSONL document format. Lines are parsed in
// parallel shards; each shard also tallies partial entity counts which are
// merged by addition, so the result does not depend on the worker count.
inline Corpus ingest_jsonl(const std::string& path, unsigned workers = 0) {
    auto lines = read_lines(path);
    std::vector<std::size_t> live;
    live.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (!lines[i].empty()) live.push_back(i);
    }

    workers = resolve_workers(workers);
    const std::size_t n_shards = std::max<std::size_t>(1, std::min<std::size_t>(workers * 4, live.size()));
    struct Shard {
        std::vector<Document> docs;
        EntityCounts counts;
    };
    auto shards = parallel_map_indexed<Shard>(n_shards, workers, [&](std::size_t shard) {
        Shard out;
        std::size_t begin = shard * live.size() / n_shards;
        std::size_t end = (shard + 1) * live.size() / n_shards;
        for (std::size_t k = begin; k < end; ++k) {
            std::size_t i = live[k];
            Document doc = parse_document_json(lines[i], i + 1);
            for (const auto& s : doc.sentences) {
                for (const auto& m : s.entities) out.counts.add(m.canonical, doc.date);
            }
            out.docs.push_back(std::move(doc));
        }
        return out;
    });

    std::vector<Document> docs;
    EntityCounts merged;
    for (auto& sh : shards) {
        for (auto& d : sh.docs) docs.push_back(std::move(d));
        merged.merge(sh.counts);
    }
    Corpus corpus = Corpus::from_documents(std::move(docs));
    // The shard tallies and the corpus tally must agree; the merge is the
    // commutative path, the corpus rebuild is the reference.
    if (merged.total_mentions() != corpus.counts().total_mentions()) {
        throw DataError("internal: sharded count merge disagrees with single-pass counts");
    }
    return corpus;
}

// Exact longest-match annotation against a user-supplied entity list, for
// inputs that arrive without pre-annotated entities. Matching is on
// case-folded token sequences, left to right, non-overlapping.
class Gazetteer {
public:
    void add(const std::string& surface, const std::string& ner_type) {
        Tokenized t = tokenize(surface);
        if (t.tokens.empty()) return;
        std::string key = fold_case(t.tokens[0]);
        for (std::size_t i = 1; i < t.tokens.size(); ++i) key += " " + fold_case(t.tokens[i]);
        entries_[key] = ner_type;
        max_len_ = std::max(max_len_, t.tokens.size());
    }

    // Loads tab-separated "surface<TAB>type" lines.
    static Gazetteer from_tsv(const std::string& path) {
        Gazetteer g;
        auto lines = read_lines(path);
        for (std::size_t i = 0; i < lines.size(); ++i) {
            if (lines[i].empty()) continue;
            auto tab = lines[i].find('\t');
            if (tab == std::string::npos) {
                throw data_error_at(i + 1, "gazetteer", "expected 'surface<TAB>type'");
            }
            g.add(lines[i].substr(0, tab), lines[i].substr(tab + 1));
        }
        return g;
    }

    std::vector<EntityMention> annotate(const std::vector<std::string>& tokens) const {
        std::vector<EntityMention> out;
        std::size_t i = 0;
        while (i < tokens.size()) {
            std::size_t longest = 0;
            const std::string* type = nullptr;
            std::string key;
            for (std::size_t len = 1; len <= max_len_ && i + len <= tokens.size(); ++len) {
                if (len == 1) key = fold_case(tokens[i]);
                else key += " " + fold_case(tokens[i + len - 1]);
                auto it = entries_.find(key);
                if (it != entries_.end()) {
                    longest = len;
                    type = &it->second;
                }
            }
            if (longest > 0) {
                EntityMention m;
                m.surface = tokens[i];
                for (std::size_t k = 1; k < longest; ++k) m.surface += " " + tokens[i + k];
                m.canonical = canonical_key(m.surface);
                m.ner_type = *type;
                m.begin = static_cast<std::uint32_t>(i);
                m.end = static_cast<std::uint32_t>(i + longest);
                out.push_back(std::move(m));
                i += longest;
            } else {
                ++i;
            }
        }
        return out;
    }

    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::string> entries_;
    std::size_t max_len_ = 0;
};

}  // namespace eventboot
