#include "eventboot/synth.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "eventboot/spike_cluster.hpp"
#include "eventboot/tagger.hpp"

namespace eb = eventboot;

namespace {

eb::SynthSpec small_spec() {
    eb::SynthSpec spec;
    spec.n_days = 2;
    spec.clusters_per_day = 2;
    spec.distractor_docs_per_day = 3;
    spec.filler_sentences_per_doc = 1;
    spec.noise_doc_fraction = 1.0;  // uniform() < 1.0 always holds
    spec.seed = 13;
    return spec;
}

std::string nearent_of(const eb::SentenceView& v, std::size_t i) {
    for (const auto& f : eb::featurize(v, i, eb::FeatureConfig{0})) {
        if (f.rfind("nearent=", 0) == 0) return f.substr(8);
    }
    return "";
}

bool in_entity(const eb::SentenceView& v, std::size_t i) {
    for (const auto& m : v.entities) {
        if (i >= m.begin && i < m.end) return true;
    }
    return false;
}

std::map<std::string, eb::Tier> tier_by_word(int n_types) {
    std::map<std::string, eb::Tier> tiers;
    for (const auto& [type, entries] : eb::default_lexicon(n_types)) {
        for (const auto& e : entries) tiers[e.word] = e.tier;
    }
    return tiers;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(SynthShapes, CountsFollowTheSpec) {
    eb::SynthSpec spec = small_spec();
    eb::SynthData data = eb::generate(spec);
    // Per day: 5 types x 2 clusters x (4 paraphrases + 1 forced noise member)
    // planted docs plus 3 distractors.
    EXPECT_EQ(data.documents.size(), 2u * (5 * 2 * 5 + 3));
    EXPECT_EQ(data.gold.size(), 2u * 5 * 2 * 4);
    EXPECT_EQ(data.truth.size(), 2u * 5 * 2);
    for (const auto& tc : data.truth) {
        EXPECT_EQ(tc.doc_ids.size(), 5u);
        EXPECT_TRUE(std::is_sorted(tc.doc_ids.begin(), tc.doc_ids.end()));
    }
    std::set<std::string> ids;
    for (const auto& d : data.documents) {
        EXPECT_TRUE(ids.insert(d.doc_id).second) << "duplicate doc_id " << d.doc_id;
    }
}

TEST(SynthGold, TriggersAreEasyOrHardLexiconWords) {
    eb::SynthData data = eb::generate(small_spec());
    auto tiers = tier_by_word(5);
    std::map<std::string, int> tier_counts;
    for (const auto& ex : data.gold) {
        ASSERT_EQ(ex.trigger_end, ex.trigger_begin + 1);
        const std::string& w = ex.sentence_tokens[ex.trigger_begin];
        auto it = tiers.find(w);
        ASSERT_NE(it, tiers.end()) << w << " is not a lexicon word";
        EXPECT_NE(it->second, eb::Tier::Confusable) << w;
        tier_counts[eb::tier_name(it->second)] += 1;
        EXPECT_EQ(ex.source, eb::Source::Gold);
        ASSERT_TRUE(ex.cluster_id.has_value());
        EXPECT_FALSE(ex.entities.empty());
    }
    // 4 paraphrases split 2 easy + 2 hard per cluster.
    EXPECT_EQ(tier_counts["easy"], tier_counts["hard"]);
    EXPECT_GT(tier_counts["easy"], 0);
}

TEST(SynthVocab, TriggerIsTheOnlyInVocabularyTokenOfItsSentence) {
    eb::SynthData data = eb::generate(small_spec());
    for (const auto& ex : data.gold) {
        std::vector<std::size_t> in_vocab;
        for (std::size_t i = 0; i < ex.sentence_tokens.size(); ++i) {
            if (data.embeddings.contains(ex.sentence_tokens[i])) in_vocab.push_back(i);
        }
        ASSERT_EQ(in_vocab.size(), 1u);
        EXPECT_EQ(in_vocab[0], ex.trigger_begin);
    }
}

TEST(SynthNoise, NoiseMembersCarryOneConfusableToken) {
    eb::SynthData data = eb::generate(small_spec());
    std::set<std::string> gold_docs;
    for (const auto& ex : data.gold) gold_docs.insert(ex.doc_id);
    std::set<std::string> planted;
    for (const auto& tc : data.truth) planted.insert(tc.doc_ids.begin(), tc.doc_ids.end());

    auto tiers = tier_by_word(5);
    std::size_t n_noise = 0;
    for (const auto& doc : data.documents) {
        if (!planted.count(doc.doc_id) || gold_docs.count(doc.doc_id)) continue;
        ++n_noise;
        ASSERT_GE(doc.sentences.size(), 2u);
        const eb::Sentence& conf = doc.sentences[1];
        std::vector<std::string> in_vocab;
        for (const auto& tok : conf.tokens) {
            if (data.embeddings.contains(tok)) in_vocab.push_back(tok);
        }
        ASSERT_EQ(in_vocab.size(), 1u);
        EXPECT_EQ(tiers.at(in_vocab[0]), eb::Tier::Confusable);
        // The dateline lead has nothing in vocabulary at all.
        for (const auto& tok : doc.sentences[0].tokens) {
            EXPECT_FALSE(data.embeddings.contains(tok)) << tok;
        }
    }
    EXPECT_EQ(n_noise, data.truth.size());  // noise_doc_fraction = 1
}

TEST(SynthGeometry, TriggerBucketsSeparateFromEverythingElse) {
    eb::SynthData data = eb::generate(small_spec());
    auto tiers = tier_by_word(5);
    for (const auto& ex : data.gold) {
        eb::SentenceView v = eb::SentenceView::of(ex);
        bool hard = tiers.at(ex.sentence_tokens[ex.trigger_begin]) == eb::Tier::Hard;
        EXPECT_EQ(nearent_of(v, ex.trigger_begin), hard ? "PER@2" : "ORG@3-5");
        if (!hard) continue;
        // In hard sentences no other token may reach either trigger bucket:
        // a model trained on easy gold has positive weight only on features
        // of easy trigger instances, none of which occur here.
        for (std::size_t i = 0; i < v.tokens.size(); ++i) {
            if (i == ex.trigger_begin || in_entity(v, i)) continue;
            std::string ne = nearent_of(v, i);
            EXPECT_NE(ne, "PER@2") << "token " << i;
            EXPECT_NE(ne, "ORG@3-5") << "token " << i;
        }
    }
}

TEST(SynthGeometry, NoiseAndConfusableTokensHugTheirEntities) {
    eb::SynthData data = eb::generate(small_spec());
    std::set<std::string> gold_docs;
    for (const auto& ex : data.gold) gold_docs.insert(ex.doc_id);
    std::set<std::string> planted;
    for (const auto& tc : data.truth) planted.insert(tc.doc_ids.begin(), tc.doc_ids.end());
    for (const auto& doc : data.documents) {
        if (!planted.count(doc.doc_id) || gold_docs.count(doc.doc_id)) continue;
        for (std::size_t si = 0; si < 2; ++si) {
            eb::SentenceView v = eb::SentenceView::of(doc.sentences[si]);
            for (std::size_t i = 0; i < v.tokens.size(); ++i) {
                if (in_entity(v, i)) continue;
                EXPECT_EQ(nearent_of(v, i), "LOC@1")
                    << doc.doc_id << " sentence " << si << " token " << i;
            }
        }
    }
}

TEST(SynthEmbeddings, TierCosinesAreLayered) {
    auto lexicon = eb::default_lexicon(5);
    eb::EmbeddingTable table = eb::build_synth_embeddings(lexicon);
    std::size_t type_axis = 0;
    for (const auto& [type, entries] : lexicon) {
        std::vector<double> axis(table.dim(), 0.0);
        axis[type_axis] = 1.0;
        for (const auto& e : entries) {
            double want = e.tier == eb::Tier::Easy   ? 0.95
                          : e.tier == eb::Tier::Hard ? 0.6
                                                     : 0.5;
            const auto* vec = table.lookup(e.word);
            ASSERT_NE(vec, nullptr) << e.word;
            EXPECT_NEAR(eb::cosine(*vec, axis), want, 1e-12) << e.word;
        }
        // Filler vocabulary is orthogonal to every event axis.
        EXPECT_NEAR(eb::cosine(*table.lookup("inspected"), axis), 0.0, 1e-12);
        EXPECT_NEAR(eb::cosine(*table.lookup("garrison"), axis), 0.0, 1e-12);
        ++type_axis;
    }
}

TEST(SynthLexicon, SuffixesStayInsideTheirTier) {
    for (const auto& [type, entries] : eb::default_lexicon(5)) {
        std::map<eb::Tier, std::set<std::string>> suf3;
        for (const auto& e : entries) {
            suf3[e.tier].insert(e.word.substr(e.word.size() - 3));
        }
        for (const auto& s : suf3[eb::Tier::Easy]) {
            EXPECT_FALSE(suf3[eb::Tier::Hard].count(s)) << type << " " << s;
            EXPECT_FALSE(suf3[eb::Tier::Confusable].count(s)) << type << " " << s;
        }
        for (const auto& s : suf3[eb::Tier::Hard]) {
            EXPECT_FALSE(suf3[eb::Tier::Confusable].count(s)) << type << " " << s;
        }
    }
    // Frame words cannot imitate any trigger through suffix features either.
    std::set<std::string> trigger_suf3;
    for (const auto& [type, entries] : eb::default_lexicon(5)) {
        for (const auto& e : entries) {
            trigger_suf3.insert(e.word.substr(e.word.size() - 3));
        }
    }
    for (int t = 0; t < 5; ++t) {
        for (int slot = 0; slot < 7; ++slot) {
            std::string fw = eb::synth_detail::frame_word(t, slot);
            EXPECT_FALSE(trigger_suf3.count(fw.substr(fw.size() - 3))) << fw;
        }
    }
}

TEST(SynthClusters, PlantedPairsAreRecoverable) {
    // Default-shaped corpus, smaller day count to keep the test quick; the
    // entity construction is per-day identical so recall transfers.
    eb::SynthSpec spec;
    spec.n_days = 10;
    eb::SynthData data = eb::generate(spec);
    eb::Corpus corpus = eb::Corpus::from_documents(data.documents);
    auto clusters = eb::cluster_corpus(corpus, {}, 1);

    std::map<std::string, std::string> doc_to_pred;
    for (const auto& c : clusters) {
        for (const auto& id : c.doc_ids) doc_to_pred[id] = c.cluster_id;
    }
    std::size_t pairs_total = 0, pairs_hit = 0;
    for (const auto& tc : data.truth) {
        for (std::size_t i = 0; i < tc.doc_ids.size(); ++i) {
            for (std::size_t j = i + 1; j < tc.doc_ids.size(); ++j) {
                ++pairs_total;
                auto a = doc_to_pred.find(tc.doc_ids[i]);
                auto b = doc_to_pred.find(tc.doc_ids[j]);
                if (a != doc_to_pred.end() && b != doc_to_pred.end() &&
                    a->second == b->second) {
                    ++pairs_hit;
                }
            }
        }
    }
    ASSERT_GT(pairs_total, 0u);
    double recall = static_cast<double>(pairs_hit) / static_cast<double>(pairs_total);
    EXPECT_GE(recall, 0.9) << pairs_hit << "/" << pairs_total;
}

TEST(SynthCounts, EveryRareIsStrictlyRarerThanEveryCommon) {
    eb::SynthSpec spec;
    spec.n_days = 10;
    eb::SynthData data = eb::generate(spec);
    eb::Corpus corpus = eb::Corpus::from_documents(data.documents);
    std::uint64_t max_rare = 0, min_common = UINT64_MAX;
    std::string worst_rare, worst_common;
    for (const auto& [entity, stat] : corpus.counts().stats()) {
        auto dash = entity.rfind('-');
        bool is_rare = dash != std::string::npos && dash + 1 < entity.size() &&
                       entity.find_first_not_of("0123456789", dash + 1) == std::string::npos;
        if (is_rare) {
            if (stat.corpus > max_rare) {
                max_rare = stat.corpus;
                worst_rare = entity;
            }
        } else if (stat.corpus < min_common) {
            min_common = stat.corpus;
            worst_common = entity;
        }
    }
    EXPECT_LT(max_rare, min_common)
        << "rare " << worst_rare << "=" << max_rare << " vs common " << worst_common
        << "=" << min_common;
}

TEST(SynthDeterminism, SameSeedSameBytes) {
    eb::SynthSpec spec = small_spec();
    eb::SynthData a = eb::generate(spec);
    eb::SynthData b = eb::generate(spec);
    ASSERT_EQ(a.documents.size(), b.documents.size());
    for (std::size_t i = 0; i < a.documents.size(); ++i) {
        EXPECT_EQ(eb::document_to_json(a.documents[i]).dump(),
                  eb::document_to_json(b.documents[i]).dump());
    }
    ASSERT_EQ(a.gold.size(), b.gold.size());
    for (std::size_t i = 0; i < a.gold.size(); ++i) {
        EXPECT_EQ(eb::trigger_example_to_json(a.gold[i]).dump(),
                  eb::trigger_example_to_json(b.gold[i]).dump());
    }
    eb::SynthSpec other = spec;
    other.seed = 14;
    eb::SynthData c = eb::generate(other);
    bool all_same = a.documents.size() == c.documents.size();
    if (all_same) {
        for (std::size_t i = 0; i < a.documents.size() && all_same; ++i) {
            all_same = eb::document_to_json(a.documents[i]).dump() ==
                       eb::document_to_json(c.documents[i]).dump();
        }
    }
    EXPECT_FALSE(all_same) << "different seeds produced identical corpora";
}

TEST(SynthFiles, StreamingOutputMatchesInMemory) {
    eb::SynthSpec spec = small_spec();
    auto dir = std::filesystem::temp_directory_path() / "eb_synthfiles";
    std::filesystem::create_directories(dir);
    std::string corpus_p = (dir / "corpus.jsonl").string();
    std::string gold_p = (dir / "gold.jsonl").string();
    std::string truth_p = (dir / "truth.jsonl").string();
    std::string emb_p = (dir / "embeddings.txt").string();
    eb::SynthFileStats stats = eb::generate_files(spec, corpus_p, gold_p, truth_p, emb_p);

    eb::SynthData mem = eb::generate(spec);
    EXPECT_EQ(stats.n_documents, mem.documents.size());
    EXPECT_EQ(stats.n_gold, mem.gold.size());
    EXPECT_EQ(stats.n_truth_clusters, mem.truth.size());
    std::size_t n_sent = 0;
    for (const auto& d : mem.documents) n_sent += d.sentences.size();
    EXPECT_EQ(stats.n_sentences, n_sent);

    std::ostringstream want_corpus;
    for (const auto& d : mem.documents) want_corpus << eb::document_to_json(d).dump() << "\n";
    EXPECT_EQ(slurp(corpus_p), want_corpus.str());

    std::ostringstream want_gold;
    for (const auto& ex : mem.gold) want_gold << eb::trigger_example_to_json(ex).dump() << "\n";
    EXPECT_EQ(slurp(gold_p), want_gold.str());

    std::string emb_mem = (dir / "embeddings_mem.txt").string();
    eb::write_embeddings(emb_mem, mem.embeddings);
    EXPECT_EQ(slurp(emb_p), slurp(emb_mem));

    auto truth = eb::read_truth_clusters_jsonl(truth_p);
    ASSERT_EQ(truth.size(), mem.truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        EXPECT_EQ(eb::truth_cluster_to_json(truth[i]).dump(),
                  eb::truth_cluster_to_json(mem.truth[i]).dump());
    }
    std::filesystem::remove_all(dir);
}

TEST(SynthSpecValidation, RejectsOutOfRangeKnobs) {
    eb::SynthSpec spec;
    spec.paraphrases_per_cluster = 1;
    spec.rare_entities_per_cluster = 4;
    spec.entity_zipf_exponent = 0.0;
    spec.noise_doc_fraction = 1.5;
    auto errs = eb::validate_spec(spec);
    EXPECT_EQ(errs.size(), 4u);
    EXPECT_THROW(eb::generate(spec), eb::ConfigError);

    eb::SynthSpec lex_bad = small_spec();
    lex_bad.trigger_lexicon = {{"Solo", {{"word", eb::Tier::Hard}}}};
    auto lex_errs = eb::validate_spec(lex_bad);
    EXPECT_FALSE(lex_errs.empty());  // size mismatch and missing easy word
}

TEST(SynthLexicon, ExtendsBeyondCuratedTypes) {
    auto lex = eb::default_lexicon(7);
    EXPECT_EQ(lex.size(), 7u);
    auto names = eb::event_type_names(7);
    EXPECT_EQ(names[5], "Type06");
    eb::SynthSpec spec = small_spec();
    spec.n_event_types = 7;
    EXPECT_TRUE(eb::validate_spec(spec).empty());
    for (const auto& [type, entries] : lex) {
        bool easy = false;
        for (const auto& e : entries) easy = easy || e.tier == eb::Tier::Easy;
        EXPECT_TRUE(easy) << type;
    }
}
