#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "eventboot/corpus.hpp"
#include "eventboot/embeddings.hpp"
#include "eventboot/jsonl.hpp"
#include "eventboot/runlog.hpp"
#include "eventboot/types.hpp"
#include "eventboot/util.hpp"

namespace eventboot {

// Paraphrase tiers control how close a trigger word's vector sits to its
// event axis: easy words are near-canonical, hard words are recoverable only
// through embedding similarity, confusables sit just above the default
// theta_sim and are planted in noise documents to keep harvest precision
// below 1.
enum class Tier { Easy, Hard, Confusable };

inline const char* tier_name(Tier t) {
    switch (t) {
        case Tier::Easy: return "easy";
        case Tier::Hard: return "hard";
        case Tier::Confusable: return "confusable";
    }
    return "easy";
}

struct LexEntry {
    std::string word;
    Tier tier = Tier::Easy;
};

struct SynthSpec {
    int n_event_types = 5;
    int n_days = 30;
    int clusters_per_day = 4;  // per event type per day
    int paraphrases_per_cluster = 4;
    int distractor_docs_per_day = 6;
    double entity_zipf_exponent = 1.1;
    int n_common_entities = 40;
    int rare_entities_per_cluster = 2;
    int filler_sentences_per_doc = 2;
    double noise_doc_fraction = 0.25;  // chance of one extra confusable member per cluster
    Date start_date = Date(2016, 1, 4);
    // Empty means the built-in lexicon for n_event_types types.
    std::map<std::string, std::vector<LexEntry>> trigger_lexicon;
    std::uint64_t seed = 7;
};

struct TruthCluster {
    std::string cluster_id;
    Date date;
    std::string event_type;
    std::vector<std::string> doc_ids;  // sorted; includes noise members
};

struct SynthData {
    std::vector<Document> documents;
    std::vector<TriggerExample> gold;
    std::vector<TruthCluster> truth;
    EmbeddingTable embeddings;
};

namespace synth_detail {

// Pseudo-verbs with pairwise-distinct 3-gram suffixes, so a model trained on
// one tier cannot reach another tier through suffix features alone.
inline const std::vector<std::pair<std::string, std::vector<LexEntry>>>& curated_lexicon() {
    static const std::vector<std::pair<std::string, std::vector<LexEntry>>> lex = {
        {"Attack",
         {{"strovek", Tier::Easy},
          {"branik", Tier::Easy},
          {"klemor", Tier::Hard},
          {"vardun", Tier::Hard},
          {"drellis", Tier::Confusable}}},
        {"Die",
         {{"morvath", Tier::Easy},
          {"pellin", Tier::Easy},
          {"quoresk", Tier::Hard},
          {"sovett", Tier::Hard},
          {"narbex", Tier::Confusable}}},
        {"Meet",
         {{"glanote", Tier::Easy},
          {"ferrim", Tier::Easy},
          {"trubeck", Tier::Hard},
          {"halvorn", Tier::Hard},
          {"wendrip", Tier::Confusable}}},
        {"Transport",
         {{"carvoll", Tier::Easy},
          {"dustrin", Tier::Easy},
          {"plovane", Tier::Hard},
          {"yarvin", Tier::Hard},
          {"osketch", Tier::Confusable}}},
        {"Elect",
         {{"ballotex", Tier::Easy},
          {"stavrok", Tier::Easy},
          {"zumwald", Tier::Hard},
          {"krelloy", Tier::Hard},
          {"mandrev", Tier::Confusable}}},
    };
    return lex;
}

inline const std::vector<std::string>& filler_verbs() {
    static const std::vector<std::string> v = {
        "inspected", "reviewed", "repaired", "counted", "opened",
        "closed",    "visited",  "toured",   "staffed", "cleaned",
    };
    return v;
}

inline const std::vector<std::string>& object_nouns() {
    static const std::vector<std::string> v = {
        "garrison", "convoy", "outpost", "bridge", "market",
        "council",  "depot",  "harbor",  "stadium", "archive",
    };
    return v;
}

// A perceptron weight can only turn positive for an event type through a
// feature that occurs in some gold trigger instance. Planted documents are
// built so that every token outside a trigger position carries only features
// that are unseen in training or occur exclusively in negative instances;
// such tokens are provably tagged NONE. Concretely:
//   - easy and hard paraphrases use disjoint per-type frame words around the
//     trigger, so a model trained on easy gold alone scores hard sentences 0;
//   - filler and confusable sentences reuse none of the frame vocabulary;
//   - easy triggers sit 3 tokens from an ORG, hard triggers 6 from a PER,
//     so nearest-entity features differ between the tiers as well.
inline const std::vector<std::string>& quiet_subjects() {
    static const std::vector<std::string> v = {
        "Crews", "Workers", "Guards", "Clerks", "Residents", "Vendors",
    };
    return v;
}

inline const std::vector<std::vector<std::string>>& quiet_lines() {
    static const std::vector<std::vector<std::string>> v = {
        {"kept", "busy", "downtown", "yesterday", "."},
        {"swept", "floors", "during", "quiet", "hours", "."},
        {"waited", "calmly", "beside", "empty", "stalls", "."},
        {"tidied", "storage", "rooms", "overnight", "."},
    };
    return v;
}

// Frame words around planted triggers: slots 0-3 wrap easy triggers, 4-6
// wrap hard ones. All end in "o" + a type tag, which no trigger word, filler
// word, or name shares as a suffix, so suffix features cannot cross tiers.
inline std::string frame_word(int type_index, int slot) {
    static const char* stems[7] = {
        "berant", "colvis", "dagmun", "felrot", "gorbas", "hilvan", "jontek",
    };
    std::string tag;
    int n = type_index + 1;
    while (n > 0) {
        int r = (n - 1) % 26;
        tag.insert(tag.begin(), static_cast<char>('a' + r));
        n = (n - 1) / 26;
    }
    return std::string(stems[slot]) + "o" + tag;
}

inline const std::vector<std::string>& first_names() {
    static const std::vector<std::string> v = {
        "Mara", "Joren", "Vella", "Tobin", "Ansel", "Petra",
        "Ruhan", "Selda", "Corin", "Yuliv", "Brena", "Oskar",
    };
    return v;
}

inline const std::vector<std::string>& last_stems() {
    static const std::vector<std::string> v = {
        "Veckler", "Montrose", "Quillan", "Sarovic", "Tellman", "Ibarra",
        "Fenwick", "Delacroy", "Hartwig", "Oltman",
    };
    return v;
}

inline const std::vector<std::pair<std::string, std::string>>& curated_commons() {
    // (surface, ner type); surfaces mix one- and two-token forms.
    static const std::vector<std::pair<std::string, std::string>> v = {
        {"Colport", "LOC"},          {"Arvand Republic", "LOC"},
        {"Meridian Bank", "ORG"},    {"Harbor Authority", "ORG"},
        {"Velstro", "LOC"},          {"National Assembly", "ORG"},
        {"Kessworth", "LOC"},        {"Transit Union", "ORG"},
        {"Dunmore Valley", "LOC"},   {"Central Exchange", "ORG"},
        {"Ostrova", "LOC"},          {"Relief Council", "ORG"},
    };
    return v;
}

inline std::string letters_upper(int k) {
    // 0 -> "A", 25 -> "Z", 26 -> "AA", spreadsheet-column style.
    std::string s;
    int n = k + 1;
    while (n > 0) {
        int r = (n - 1) % 26;
        s.insert(s.begin(), static_cast<char>('A' + r));
        n = (n - 1) / 26;
    }
    return s;
}

}  // namespace synth_detail

inline std::vector<std::string> event_type_names(int n) {
    std::vector<std::string> names;
    const auto& curated = synth_detail::curated_lexicon();
    for (int i = 0; i < n; ++i) {
        if (i < static_cast<int>(curated.size())) {
            names.push_back(curated[i].first);
        } else {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "Type%02d", i + 1);
            names.push_back(buf);
        }
    }
    return names;
}

// Built-in lexicon: curated pseudo-verbs for the first five types, generated
// words with type-specific suffixes beyond that.
inline std::map<std::string, std::vector<LexEntry>> default_lexicon(int n_types) {
    std::map<std::string, std::vector<LexEntry>> lex;
    const auto& curated = synth_detail::curated_lexicon();
    auto names = event_type_names(n_types);
    for (int i = 0; i < n_types; ++i) {
        if (i < static_cast<int>(curated.size())) {
            lex[names[i]] = curated[i].second;
            continue;
        }
        std::string tag = synth_detail::letters_upper(i);
        for (char c : std::string("ab")) {
            lex[names[i]].push_back({std::string("v") + c + "est" + tag, Tier::Easy});
        }
        for (char c : std::string("ab")) {
            lex[names[i]].push_back({std::string("g") + c + "orn" + tag, Tier::Hard});
        }
        lex[names[i]].push_back({std::string("milk") + tag, Tier::Confusable});
    }
    return lex;
}

inline std::vector<std::string> validate_spec(const SynthSpec& spec) {
    std::vector<std::string> errs;
    if (spec.n_event_types < 1) errs.push_back("n_event_types must be >= 1");
    if (spec.n_days < 1) errs.push_back("n_days must be >= 1");
    if (spec.clusters_per_day < 0) errs.push_back("clusters_per_day must be >= 0");
    if (spec.paraphrases_per_cluster < 2) errs.push_back("paraphrases_per_cluster must be >= 2");
    if (spec.distractor_docs_per_day < 0) errs.push_back("distractor_docs_per_day must be >= 0");
    if (!(spec.entity_zipf_exponent > 0.0)) errs.push_back("entity_zipf_exponent must be > 0");
    if (spec.n_common_entities < 1) errs.push_back("n_common_entities must be >= 1");
    if (spec.rare_entities_per_cluster < 1 || spec.rare_entities_per_cluster > 3) {
        errs.push_back("rare_entities_per_cluster must be in [1,3]");
    }
    if (spec.filler_sentences_per_doc < 0) errs.push_back("filler_sentences_per_doc must be >= 0");
    if (spec.noise_doc_fraction < 0.0 || spec.noise_doc_fraction > 1.0) {
        errs.push_back("noise_doc_fraction must be in [0,1]");
    }
    if (!spec.trigger_lexicon.empty()) {
        if (static_cast<int>(spec.trigger_lexicon.size()) != spec.n_event_types) {
            errs.push_back("trigger_lexicon size must equal n_event_types");
        }
        for (const auto& [type, entries] : spec.trigger_lexicon) {
            bool has_easy = false;
            for (const auto& e : entries) {
                if (e.word.empty()) errs.push_back("trigger_lexicon has an empty word under " + type);
                if (e.tier == Tier::Easy) has_easy = true;
            }
            if (!has_easy) errs.push_back("trigger_lexicon type " + type + " needs an easy word");
        }
    }
    return errs;
}

namespace synth_detail {

struct EntityDef {
    std::string surface;
    std::vector<std::string> tokens;
    std::string ner_type;
};

inline EntityDef make_entity(const std::string& surface, const std::string& ner) {
    EntityDef e;
    e.surface = surface;
    e.ner_type = ner;
    Tokenized tk = tokenize(surface);
    e.tokens = tk.tokens;
    return e;
}

// Builder that appends tokens and records entity spans, then freezes into a
// Sentence with space-joined text and consistent char offsets.
struct SentenceBuilder {
    Sentence s;

    void word(const std::string& w) { s.tokens.push_back(w); }
    void words(const std::vector<std::string>& ws) {
        for (const auto& w : ws) s.tokens.push_back(w);
    }
    void entity(const EntityDef& e) {
        EntityMention m;
        m.surface = e.surface;
        m.canonical = canonical_key(e.surface);
        m.ner_type = e.ner_type;
        m.begin = static_cast<std::uint32_t>(s.tokens.size());
        words(e.tokens);
        m.end = static_cast<std::uint32_t>(s.tokens.size());
        s.entities.push_back(std::move(m));
    }
    Sentence finish() {
        std::uint32_t pos = 0;
        for (std::size_t i = 0; i < s.tokens.size(); ++i) {
            if (i > 0) ++pos;
            s.char_offsets.push_back({pos, pos + static_cast<std::uint32_t>(s.tokens[i].size())});
            pos += static_cast<std::uint32_t>(s.tokens[i].size());
        }
        return std::move(s);
    }
};

// Zipf-weighted index draw over [0, n).
struct ZipfPicker {
    std::vector<double> cumulative;

    ZipfPicker(int n, double exponent) {
        cumulative.reserve(n);
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            total += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
            cumulative.push_back(total);
        }
    }
    std::size_t pick(Rng& rng) const {
        double u = rng.uniform() * cumulative.back();
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        if (it == cumulative.end()) --it;
        return static_cast<std::size_t>(it - cumulative.begin());
    }
};

}  // namespace synth_detail

// Deterministic synthetic embedding space: dims [0, T) are event axes, every
// vocabulary word also owns a private axis. A word at tier cosine c gets
// c * event_axis + sqrt(1-c^2) * own_axis; filler verbs and object nouns are
// purely on their own axis, orthogonal to every event.
inline EmbeddingTable build_synth_embeddings(
    const std::map<std::string, std::vector<LexEntry>>& lexicon) {
    std::vector<std::pair<std::string, std::pair<int, double>>> words;  // word -> (type axis, cos)
    int type_axis = 0;
    for (const auto& [type, entries] : lexicon) {
        for (const auto& e : entries) {
            double c = e.tier == Tier::Easy ? 0.95 : e.tier == Tier::Hard ? 0.6 : 0.5;
            words.push_back({e.word, {type_axis, c}});
        }
        ++type_axis;
    }
    for (const auto& w : synth_detail::filler_verbs()) words.push_back({w, {-1, 0.0}});
    for (const auto& w : synth_detail::object_nouns()) words.push_back({w, {-1, 0.0}});

    const std::size_t n_types = lexicon.size();
    const std::size_t dim = n_types + words.size();
    EmbeddingTable table;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::vector<double> v(dim, 0.0);
        auto [axis, c] = words[i].second;
        if (axis >= 0) {
            v[static_cast<std::size_t>(axis)] = c;
            v[n_types + i] = std::sqrt(1.0 - c * c);
        } else {
            v[n_types + i] = 1.0;
        }
        table.insert(words[i].first, std::move(v));
    }
    return table;
}

namespace synth_detail {

struct Generator {
    const SynthSpec& spec;
    std::map<std::string, std::vector<LexEntry>> lexicon;
    std::vector<std::string> types;
    std::vector<EntityDef> commons;
    std::vector<std::size_t> loc_commons;
    ZipfPicker common_picker;
    Rng rng;
    std::size_t cluster_counter = 0;
    std::size_t common_cycle = 0;
    int wires_per_distractor = 2;

    std::vector<TriggerExample> gold;
    std::vector<TruthCluster> truth;

    explicit Generator(const SynthSpec& sp)
        : spec(sp),
          lexicon(sp.trigger_lexicon.empty() ? default_lexicon(sp.n_event_types)
                                             : sp.trigger_lexicon),
          common_picker(sp.n_common_entities, sp.entity_zipf_exponent),
          rng(sp.seed) {
        for (const auto& [type, entries] : lexicon) types.push_back(type);
        const auto& curated = curated_commons();
        for (int i = 0; i < spec.n_common_entities; ++i) {
            if (i < static_cast<int>(curated.size())) {
                commons.push_back(make_entity(curated[i].first, curated[i].second));
            } else {
                commons.push_back(make_entity("Region " + letters_upper(i), i % 2 ? "ORG" : "LOC"));
            }
        }
        for (std::size_t i = 0; i < commons.size(); ++i) {
            if (commons[i].ner_type == "LOC") loc_commons.push_back(i);
        }
        // Size the wire background so every common is mentioned strictly more
        // often than the largest possible rare count (paraphrases + noise).
        int needed = (spec.paraphrases_per_cluster + 2) * spec.n_common_entities;
        int docs = std::max(1, spec.n_days * spec.distractor_docs_per_day);
        wires_per_distractor = std::max(2, (needed + docs - 1) / docs - 1);
    }

    const LexEntry* tier_word(const std::string& type, Tier tier, std::size_t i) const {
        std::vector<const LexEntry*> pool;
        for (const auto& e : lexicon.at(type)) {
            if (e.tier == tier) pool.push_back(&e);
        }
        if (pool.empty()) return nullptr;
        return pool[i % pool.size()];
    }

    std::string pick(const std::vector<std::string>& pool) {
        return pool[rng.bounded(pool.size())];
    }

    const EntityDef& loc_common() {
        return commons[loc_commons[rng.bounded(loc_commons.size())]];
    }

    // Planted sentence layouts (slots refer to frame_word, 2 rares shown):
    //   easy: [PER] and [ORG] s0 s1 TRIG s2 s3 .
    //   hard: [ORG] [PER] s4 TRIG s5 [LOC] s6 .
    // The easy trigger is the only gold-sentence token in the 3-5 distance
    // bucket of its entity type; in the hard layout the trailing common pins
    // every other token within distance 2 of some entity, and the reversed
    // rares put the trigger at PER@2 (distance tie, earlier span wins). A
    // model trained on easy gold therefore has zero positive weight on any
    // hard-sentence feature. The trigger is the only in-vocabulary token, so
    // it is also the only assignable candidate.
    Sentence trigger_sentence(int type_index, const std::vector<EntityDef>& rares,
                              const std::string& trig, Tier tier, std::uint32_t* trig_index) {
        SentenceBuilder b;
        bool hard = tier == Tier::Hard;
        for (std::size_t k = 0; k < rares.size(); ++k) {
            if (k > 0 && !hard) b.word("and");
            b.entity(rares[hard ? rares.size() - 1 - k : k]);
        }
        if (hard) {
            b.word(frame_word(type_index, 4));
            *trig_index = static_cast<std::uint32_t>(b.s.tokens.size());
            b.word(trig);
            b.word(frame_word(type_index, 5));
            b.entity(loc_common());
            b.word(frame_word(type_index, 6));
        } else {
            b.word(frame_word(type_index, 0));
            b.word(frame_word(type_index, 1));
            *trig_index = static_cast<std::uint32_t>(b.s.tokens.size());
            b.word(trig);
            b.word(frame_word(type_index, 2));
            b.word(frame_word(type_index, 3));
        }
        b.word(".");
        return b.finish();
    }

    // Lead of a noise member: ties the document to the cluster's rares but
    // reads like a dateline, with both non-entity tokens at LOC distance 1,
    // a region no gold trigger occupies, so no token here can outscore NONE.
    Sentence noise_lead(const std::vector<EntityDef>& rares) {
        SentenceBuilder b;
        b.word("From");
        b.entity(loc_common());
        b.word(":");
        for (const auto& r : rares) b.entity(r);
        return b.finish();
    }

    // The confusable word is the only in-vocabulary token here, sitting just
    // above the default theta_sim, which plants a controlled false harvest.
    // Every non-entity token sits at distance 1 of a LOC entity, a bucket no
    // gold trigger occupies, so the tagger provably scores this sentence
    // NONE and labeling is never polluted by it.
    Sentence confusable_sentence(const std::string& conf) {
        SentenceBuilder b;
        b.entity(loc_common());
        b.word("renewed");
        b.word(conf);
        b.entity(loc_common());
        b.word("talk");
        return b.finish();
    }

    Sentence filler_sentence() {
        SentenceBuilder b;
        b.word(pick(quiet_subjects()));
        b.words(quiet_lines()[rng.bounded(quiet_lines().size())]);
        return b.finish();
    }

    // Distractor docs carry the common-entity background. The lead and each
    // wire sentence advance a round-robin cursor over all commons, which
    // guarantees every common outnumbers every rare in the corpus (rares
    // appear at most paraphrases+1 times); Zipf draws add skew on top.
    const EntityDef& next_common() { return commons[common_cycle++ % commons.size()]; }

    Sentence distractor_lead() {
        SentenceBuilder b;
        const EntityDef& c1 = next_common();
        const EntityDef& c2 = commons[common_picker.pick(rng)];
        std::string verb = pick(filler_verbs());
        std::string obj = pick(object_nouns());
        b.words({"Crews", "from"});
        b.entity(c1);
        b.word(verb);
        b.words({"the", obj, "near"});
        b.entity(c2);
        b.word(".");
        return b.finish();
    }

    Sentence wire_sentence() {
        SentenceBuilder b;
        b.words({"Updates", "follow", "from"});
        b.entity(next_common());
        b.word(".");
        return b.finish();
    }

    Document make_distractor(const Date& date, int seq) {
        Document doc = shell_doc(date, seq);
        doc.sentences.push_back(distractor_lead());
        for (int f = 0; f < wires_per_distractor; ++f) {
            doc.sentences.push_back(wire_sentence());
        }
        return doc;
    }

    Document shell_doc(const Date& date, int seq) {
        Document doc;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%05d", seq);
        doc.doc_id = "d-" + date.str() + "-" + buf;
        doc.date = date;
        doc.title = "Report " + doc.doc_id;
        return doc;
    }

    Document make_doc(const Date& date, int seq, Sentence lead) {
        Document doc = shell_doc(date, seq);
        doc.sentences.push_back(std::move(lead));
        for (int f = 0; f < spec.filler_sentences_per_doc; ++f) {
            doc.sentences.push_back(filler_sentence());
        }
        return doc;
    }

    std::vector<EntityDef> make_rares() {
        std::vector<EntityDef> rares;
        ++cluster_counter;
        for (int k = 0; k < spec.rare_entities_per_cluster; ++k) {
            std::string surface = pick(first_names()) + " " + pick(last_stems()) + "-" +
                                  std::to_string(cluster_counter);
            rares.push_back(make_entity(surface, k % 2 ? "ORG" : "PER"));
        }
        return rares;
    }

    // Emits a whole day through the sink; side outputs accumulate on this.
    void day(int d, const std::function<void(std::vector<Document>&&)>& sink) {
        Date date = spec.start_date.plus_days(d);
        std::vector<Document> docs;
        int seq = 0;
        for (std::size_t t = 0; t < types.size(); ++t) {
            const std::string& type = types[t];
            for (int c = 0; c < spec.clusters_per_day; ++c) {
                std::vector<EntityDef> rares = make_rares();
                TruthCluster tc;
                tc.cluster_id = date.str() + ":" + type + ":" + std::to_string(c);
                tc.date = date;
                tc.event_type = type;

                int n_para = spec.paraphrases_per_cluster;
                int n_easy_slots = (n_para + 1) / 2;
                for (int p = 0; p < n_para; ++p) {
                    Tier tier = p < n_easy_slots ? Tier::Easy : Tier::Hard;
                    std::size_t wi = static_cast<std::size_t>(tier == Tier::Hard ? p - n_easy_slots : p);
                    const LexEntry* w = tier_word(type, tier, wi);
                    if (!w) {
                        tier = Tier::Easy;
                        w = tier_word(type, tier, static_cast<std::size_t>(p));
                    }
                    std::uint32_t ti = 0;
                    Sentence lead = trigger_sentence(static_cast<int>(t), rares, w->word, tier, &ti);
                    Document doc = make_doc(date, seq++, std::move(lead));
                    TriggerExample ex;
                    ex.doc_id = doc.doc_id;
                    ex.sentence_tokens = doc.sentences[0].tokens;
                    ex.entities = doc.sentences[0].entities;
                    ex.trigger_begin = ti;
                    ex.trigger_end = ti + 1;
                    ex.event_type = type;
                    ex.source = Source::Gold;
                    ex.cluster_id = tc.cluster_id;
                    gold.push_back(std::move(ex));
                    tc.doc_ids.push_back(doc.doc_id);
                    docs.push_back(std::move(doc));
                }
                if (rng.uniform() < spec.noise_doc_fraction) {
                    if (const LexEntry* w = tier_word(type, Tier::Confusable, 0)) {
                        Document doc = make_doc(date, seq++, noise_lead(rares));
                        doc.sentences.insert(doc.sentences.begin() + 1,
                                             confusable_sentence(w->word));
                        tc.doc_ids.push_back(doc.doc_id);
                        docs.push_back(std::move(doc));
                    }
                }
                std::sort(tc.doc_ids.begin(), tc.doc_ids.end());
                truth.push_back(std::move(tc));
            }
        }
        for (int k = 0; k < spec.distractor_docs_per_day; ++k) {
            docs.push_back(make_distractor(date, seq++));
        }
        sink(std::move(docs));
    }
};

}  // namespace synth_detail

// In-memory generation; fully deterministic per spec.seed.
inline SynthData generate(const SynthSpec& spec) {
    auto errs = validate_spec(spec);
    if (!errs.empty()) {
        std::string msg = "invalid synth spec:";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    synth_detail::Generator gen(spec);
    SynthData data;
    data.embeddings = build_synth_embeddings(gen.lexicon);
    for (int d = 0; d < spec.n_days; ++d) {
        gen.day(d, [&](std::vector<Document>&& docs) {
            for (auto& doc : docs) data.documents.push_back(std::move(doc));
        });
    }
    data.gold = std::move(gen.gold);
    data.truth = std::move(gen.truth);
    return data;
}

inline OJson truth_cluster_to_json(const TruthCluster& tc) {
    OJson j;
    j["cluster_id"] = tc.cluster_id;
    j["date"] = tc.date.str();
    j["event_type"] = tc.event_type;
    j["doc_ids"] = tc.doc_ids;
    return j;
}

inline TruthCluster parse_truth_cluster_json(const Json& j, std::size_t line_no = 0) {
    if (!j.is_object()) throw data_error_at(line_no, "record", "expected a JSON object");
    TruthCluster tc;
    tc.cluster_id = detail::require_string(j, "cluster_id", line_no);
    auto date = Date::parse(detail::require_string(j, "date", line_no));
    if (!date) throw data_error_at(line_no, "date", "not a valid calendar day");
    tc.date = *date;
    tc.event_type = detail::require_string(j, "event_type", line_no);
    tc.doc_ids = detail::string_array(j, "doc_ids", line_no);
    return tc;
}

inline void write_truth_clusters_jsonl(const std::vector<TruthCluster>& tcs,
                                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    for (const auto& tc : tcs) out << truth_cluster_to_json(tc).dump() << "\n";
}

inline std::vector<TruthCluster> read_truth_clusters_jsonl(const std::string& path) {
    std::vector<TruthCluster> out;
    std::size_t line_no = 0;
    for (const auto& line : read_lines(path)) {
        ++line_no;
        if (line.empty()) continue;
        out.push_back(parse_truth_cluster_json(detail::parse_json_line(line, line_no), line_no));
    }
    return out;
}

struct SynthFileStats {
    std::size_t n_documents = 0;
    std::size_t n_sentences = 0;
    std::size_t n_gold = 0;
    std::size_t n_truth_clusters = 0;
};

// Streaming variant: documents are written day by day and dropped, so peak
// memory stays flat even for million-sentence corpora. Byte-identical to
// writing generate()'s output.
inline SynthFileStats generate_files(const SynthSpec& spec, const std::string& corpus_path,
                                     const std::string& gold_path, const std::string& truth_path,
                                     const std::string& embeddings_path, RunLog* log = nullptr) {
    auto errs = validate_spec(spec);
    if (!errs.empty()) {
        std::string msg = "invalid synth spec:";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    synth_detail::Generator gen(spec);
    EmbeddingTable table = build_synth_embeddings(gen.lexicon);
    write_embeddings(embeddings_path, table);

    std::ofstream out(corpus_path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + corpus_path);
    SynthFileStats stats;
    for (int d = 0; d < spec.n_days; ++d) {
        gen.day(d, [&](std::vector<Document>&& docs) {
            for (const auto& doc : docs) {
                out << document_to_json(doc).dump() << "\n";
                ++stats.n_documents;
                stats.n_sentences += doc.sentences.size();
            }
        });
    }
    out.close();
    write_examples_jsonl(gold_path, gen.gold);
    write_truth_clusters_jsonl(gen.truth, truth_path);
    stats.n_gold = gen.gold.size();
    stats.n_truth_clusters = gen.truth.size();
    if (log) {
        log->event("synth.summary", {{"documents", stats.n_documents},
                                     {"sentences", stats.n_sentences},
                                     {"gold", stats.n_gold},
                                     {"truth_clusters", stats.n_truth_clusters}});
    }
    return stats;
}

}  // namespace eventboot
