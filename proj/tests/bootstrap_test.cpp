#include "eventboot/bootstrap.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

namespace eb = eventboot;

namespace {

eb::Date day(const char* s) { return *eb::Date::parse(s); }

eb::Sentence sentence(std::vector<std::string> tokens,
                      std::vector<eb::EntityMention> entities = {}) {
    eb::Sentence s;
    s.tokens = std::move(tokens);
    s.entities = std::move(entities);
    return s;
}

eb::EntityMention entity(const std::string& surface, const std::string& type,
                         std::uint32_t b, std::uint32_t e) {
    eb::EntityMention m;
    m.surface = surface;
    m.canonical = eb::canonical_key(surface);
    m.ner_type = type;
    m.begin = b;
    m.end = e;
    return m;
}

eb::TriggerExample example(const std::string& type, std::vector<std::string> tokens,
                           std::uint32_t b, std::uint32_t e) {
    eb::TriggerExample ex;
    ex.doc_id = "t";
    ex.sentence_tokens = std::move(tokens);
    ex.trigger_begin = b;
    ex.trigger_end = e;
    ex.event_type = type;
    return ex;
}

eb::Document doc_with(const std::string& id, std::vector<eb::Sentence> sentences) {
    eb::Document d;
    d.doc_id = id;
    d.date = day("2016-02-01");
    d.sentences = std::move(sentences);
    return d;
}

eb::TaggerModel toy_model() {
    return eb::train({
        example("Attack", {"they", "bombed", "the", "base", "."}, 1, 2),
        example("Attack", {"rebels", "bombed", "a", "town", "."}, 1, 2),
        example("Meet", {"they", "met", "the", "envoy", "."}, 1, 2),
        example("Meet", {"leaders", "met", "a", "delegate", "."}, 1, 2),
    });
}

eb::Corpus toy_corpus() {
    return eb::Corpus::from_documents({
        doc_with("dA", {sentence({"they", "bombed", "the", "base", "."}),
                        sentence({"rebels", "bombed", "a", "town", "."})}),
        doc_with("dB", {sentence({"they", "met", "the", "envoy", "."})}),
        doc_with("dC", {sentence({"nothing", "happening", "here", "."})}),
        doc_with("dD", {sentence({"quiet", "day", "again", "."})}),
    });
}

eb::Cluster cluster_of(std::vector<std::string> ids) {
    eb::Cluster c;
    c.cluster_id = "2016-02-01:0000";
    c.date = day("2016-02-01");
    c.doc_ids = std::move(ids);
    return c;
}

}  // namespace

TEST(LabelCluster, ExactlyOneTypeMustReachTheta) {
    eb::TaggerModel model = toy_model();
    eb::Corpus corpus = toy_corpus();
    eb::Cluster c = cluster_of({"dA", "dB"});

    // Attack has 2 mentions, Meet has 1: only Attack reaches theta_event=2.
    eb::BootstrapConfig cfg;
    auto labeled = eb::label_cluster(c, corpus, model, cfg);
    ASSERT_TRUE(labeled.has_value());
    EXPECT_EQ(labeled->event_type, "Attack");
    EXPECT_EQ(labeled->supporting_mentions.size(), 2u);
    EXPECT_EQ(labeled->type_counts.at("Attack"), 2);
    EXPECT_EQ(labeled->type_counts.at("Meet"), 1);
    EXPECT_EQ(labeled->supporting_mentions[0],
              (eb::SupportingMention{"dA", 0, 1}));

    // At theta_event=1 both types reach it: ambiguous, no label.
    cfg.theta_event = 1;
    EXPECT_FALSE(eb::label_cluster(c, corpus, model, cfg).has_value());

    // At theta_event=3 nothing reaches it.
    cfg.theta_event = 3;
    EXPECT_FALSE(eb::label_cluster(c, corpus, model, cfg).has_value());
}

TEST(LabelCluster, MinMarginFiltersWeakPredictions) {
    eb::TaggerModel model = toy_model();
    eb::Corpus corpus = toy_corpus();
    eb::Cluster c = cluster_of({"dA", "dB"});
    eb::BootstrapConfig cfg;
    cfg.min_margin = 1e9;
    EXPECT_FALSE(eb::label_cluster(c, corpus, model, cfg).has_value());
}

TEST(LabelAll, CountsUnlabeledClusters) {
    eb::TaggerModel model = toy_model();
    eb::Corpus corpus = toy_corpus();
    eb::Cluster c1 = cluster_of({"dA", "dB"});
    eb::Cluster c2 = cluster_of({"dC", "dD"});
    c2.cluster_id = "2016-02-01:0001";
    auto res = eb::label_all(corpus, {c1, c2}, model);
    EXPECT_EQ(res.clusters_seen, 2u);
    ASSERT_EQ(res.labeled.size(), 1u);
    EXPECT_EQ(res.labeled[0].cluster_id, "2016-02-01:0000");
    EXPECT_EQ(res.clusters_unlabeled, 1u);
}

TEST(AssignTrigger, SkipsEntitiesStopwordsAndOov) {
    eb::EmbeddingTable table;
    table.insert("acme", {1.0, 0.0});
    table.insert("the", {1.0, 0.0});
    table.insert("raided", {1.0, 0.0});
    table.insert("talks", {0.0, 1.0});
    std::vector<double> attack = {1.0, 0.0};
    eb::Sentence s = sentence({"Acme", "the", "raided", "talks", "unkz"},
                              {entity("Acme", "ORG", 0, 1)});
    auto hit = eb::assign_trigger(s, attack, table, 0.4);
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(hit->token_index, 2u);
    EXPECT_DOUBLE_EQ(hit->similarity, 1.0);

    // With every token excluded there is nothing to assign.
    eb::Sentence none = sentence({"Acme", "the", "unkz"}, {entity("Acme", "ORG", 0, 1)});
    EXPECT_FALSE(eb::assign_trigger(none, attack, table, 0.0).has_value());
}

TEST(AssignTrigger, ThresholdIsStrict) {
    // Exactly representable cosines (1.0 and 0.0) probe the strict bound
    // without floating-point slop at the boundary.
    eb::EmbeddingTable table;
    table.insert("same", {2.0, 0.0});
    table.insert("ortho", {0.0, 1.0});
    std::vector<double> attack = {1.0, 0.0};
    eb::Sentence aligned = sentence({"same"});
    EXPECT_FALSE(eb::assign_trigger(aligned, attack, table, 1.0).has_value());
    auto hit = eb::assign_trigger(aligned, attack, table, 0.99);
    ASSERT_TRUE(hit.has_value());
    EXPECT_DOUBLE_EQ(hit->similarity, 1.0);
    eb::Sentence orth = sentence({"ortho"});
    EXPECT_FALSE(eb::assign_trigger(orth, attack, table, 0.0).has_value());
}

TEST(AssignTrigger, TieGoesToEarliestToken) {
    eb::EmbeddingTable table;
    table.insert("raided", {2.0, 0.0});
    table.insert("stormed", {3.0, 0.0});  // same direction, same cosine
    std::vector<double> attack = {1.0, 0.0};
    eb::Sentence s = sentence({"raided", "stormed"});
    auto hit = eb::assign_trigger(s, attack, table, 0.4);
    ASSERT_TRUE(hit.has_value());
    EXPECT_EQ(hit->token_index, 0u);
}

TEST(AssignAll, OneTriggerPerSentenceWithDedup) {
    eb::Corpus corpus = eb::Corpus::from_documents({
        doc_with("dA", {sentence({"militants", "raided", "villages"}),
                        sentence({"troops", "raided", "depots"})}),
        doc_with("dB", {sentence({"militants", "raided", "villages"})}),
    });
    eb::LabeledCluster lc;
    lc.cluster_id = "2016-02-01:0000";
    lc.date = day("2016-02-01");
    lc.doc_ids = {"dA", "dB"};
    lc.event_type = "Attack";

    eb::EmbeddingTable table;
    table.insert("raided", {1.0, 0.0});
    eb::CanonicalResult canon;
    eb::CanonicalVector cv;
    cv.event_type = "Attack";
    cv.vector = {1.0, 0.0};
    cv.support = 1;
    canon.by_type.emplace("Attack", cv);

    auto res = eb::assign_all(corpus, {lc}, canon, table);
    EXPECT_EQ(res.sentences_seen, 3u);
    EXPECT_EQ(res.sentences_assigned, 3u);
    EXPECT_EQ(res.duplicates_dropped, 1u);  // dB repeats dA's sentence verbatim
    ASSERT_EQ(res.examples.size(), 2u);
    const eb::TriggerExample& ex = res.examples[0];
    EXPECT_EQ(ex.doc_id, "dA");
    EXPECT_EQ(ex.trigger_begin, 1u);
    EXPECT_EQ(ex.trigger_end, 2u);
    EXPECT_EQ(ex.event_type, "Attack");
    EXPECT_EQ(ex.source, eb::Source::Bootstrap);
    ASSERT_TRUE(ex.cluster_id);
    EXPECT_EQ(*ex.cluster_id, "2016-02-01:0000");
    ASSERT_TRUE(ex.similarity);
    EXPECT_DOUBLE_EQ(*ex.similarity, 1.0);

    // A labeled type without a canonical vector is skipped and counted.
    eb::LabeledCluster orphan = lc;
    orphan.event_type = "Zzz";
    auto res2 = eb::assign_all(corpus, {orphan}, canon, table);
    EXPECT_EQ(res2.clusters_missing_vector, 1u);
    EXPECT_TRUE(res2.examples.empty());
}

TEST(SampleBalanced, ExactlyMinOfCapAndAvailable) {
    std::vector<eb::TriggerExample> pool;
    for (int i = 0; i < 10; ++i) {
        pool.push_back(example("Attack", {"a" + std::to_string(i), "raided"}, 1, 2));
    }
    for (int i = 0; i < 3; ++i) {
        pool.push_back(example("Meet", {"m" + std::to_string(i), "met"}, 1, 2));
    }
    auto capped = eb::sample_balanced(pool, 5, 1);
    std::map<std::string, int> counts;
    for (const auto& ex : capped) counts[ex.event_type] += 1;
    EXPECT_EQ(capped.size(), 8u);
    EXPECT_EQ(counts["Attack"], 5);
    EXPECT_EQ(counts["Meet"], 3);

    auto all = eb::sample_balanced(pool, 200, 1);
    EXPECT_EQ(all.size(), pool.size());

    // Sampled examples are a sub-multiset of the pool, no fabrication.
    std::set<std::string> pool_keys;
    for (const auto& ex : pool) pool_keys.insert(ex.sentence_tokens[0]);
    std::set<std::string> picked;
    for (const auto& ex : capped) {
        EXPECT_TRUE(pool_keys.count(ex.sentence_tokens[0]));
        EXPECT_TRUE(picked.insert(ex.sentence_tokens[0]).second) << "duplicate pick";
    }
    EXPECT_THROW(eb::sample_balanced(pool, 0, 1), eb::ConfigError);
}

TEST(SampleBalanced, DeterministicForSeed) {
    std::vector<eb::TriggerExample> pool;
    for (int i = 0; i < 20; ++i) {
        pool.push_back(example(i % 2 ? "Attack" : "Meet",
                               {"w" + std::to_string(i), "x"}, 0, 1));
    }
    auto a = eb::sample_balanced(pool, 7, 42);
    auto b = eb::sample_balanced(pool, 7, 42);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].sentence_tokens[0], b[i].sentence_tokens[0]);
    }
}

TEST(LabeledClusterJson, RoundTrips) {
    eb::LabeledCluster lc;
    lc.cluster_id = "2016-02-01:0003";
    lc.date = day("2016-02-01");
    lc.doc_ids = {"dA", "dB"};
    lc.event_type = "Attack";
    lc.supporting_mentions = {{"dA", 0, 1}, {"dB", 2, 4}};
    lc.type_counts = {{"Attack", 3}, {"Meet", 1}};
    std::string line = eb::labeled_cluster_to_json(lc).dump();
    eb::LabeledCluster back =
        eb::parse_labeled_cluster_json(eb::Json::parse(line), 1);
    EXPECT_EQ(eb::labeled_cluster_to_json(back).dump(), line);
    EXPECT_THROW(eb::parse_labeled_cluster_json(
                     eb::Json::parse(R"({"cluster_id":"c","date":"2016-02-01"})"), 1),
                 eb::DataError);
}
