#include "eventboot/eval.hpp"

#include <gtest/gtest.h>

namespace eb = eventboot;

namespace {

eb::TriggerExample trig(const std::string& doc, std::vector<std::string> tokens,
                        std::uint32_t b, std::uint32_t e, const std::string& type) {
    eb::TriggerExample ex;
    ex.doc_id = doc;
    ex.sentence_tokens = std::move(tokens);
    ex.trigger_begin = b;
    ex.trigger_end = e;
    ex.event_type = type;
    return ex;
}

const std::vector<std::string> kSentA = {"militants", "raided", "the", "camp", "."};
const std::vector<std::string> kSentB = {"they", "shelled", "the", "city", "."};
const std::vector<std::string> kSentC = {"the", "leader", "died", "overnight", "."};
const std::vector<std::string> kSentD = {"two", "guards", "perished", "there", "."};
const std::vector<std::string> kSentE = {"ministers", "met", "in", "private", "."};

std::vector<eb::TriggerExample> fixture_gold() {
    return {
        trig("d1", kSentA, 1, 2, "Attack"),
        trig("d1", kSentB, 1, 2, "Attack"),
        trig("d2", kSentC, 2, 3, "Die"),
        trig("d2", kSentD, 2, 3, "Die"),
        trig("d3", kSentE, 1, 2, "Meet"),
    };
}

std::vector<eb::TriggerExample> fixture_preds() {
    return {
        trig("d1", kSentA, 1, 2, "Attack"),  // exact match
        trig("d1", kSentB, 1, 2, "Attack"),  // exact match
        trig("d1", kSentA, 3, 4, "Attack"),  // wrong span
        trig("d2", kSentC, 1, 2, "Die"),     // wrong span
        trig("d3", kSentE, 2, 3, "Meet"),    // wrong span
    };
}

}  // namespace

TEST(Score, FixtureCountsAreExact) {
    eb::EvalReport r = eb::score(fixture_preds(), fixture_gold());
    EXPECT_EQ(r.micro.tp, 2);
    EXPECT_EQ(r.micro.fp, 3);
    EXPECT_EQ(r.micro.fn, 3);
    EXPECT_DOUBLE_EQ(r.micro.precision, 0.4);
    EXPECT_DOUBLE_EQ(r.micro.recall, 0.4);
    EXPECT_DOUBLE_EQ(r.micro.f1, 0.4);
    EXPECT_EQ(r.duplicates_dropped, 0u);

    const eb::PRF& attack = r.per_type.at("Attack");
    EXPECT_EQ(attack.tp, 2);
    EXPECT_EQ(attack.fp, 1);
    EXPECT_EQ(attack.fn, 0);
    EXPECT_DOUBLE_EQ(attack.precision, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(attack.recall, 1.0);
    EXPECT_DOUBLE_EQ(attack.f1, 0.8);

    const eb::PRF& die = r.per_type.at("Die");
    EXPECT_EQ(die.tp, 0);
    EXPECT_EQ(die.fp, 1);
    EXPECT_EQ(die.fn, 2);
    EXPECT_DOUBLE_EQ(die.f1, 0.0);

    const eb::PRF& meet = r.per_type.at("Meet");
    EXPECT_EQ(meet.tp, 0);
    EXPECT_EQ(meet.fp, 1);
    EXPECT_EQ(meet.fn, 1);
}

TEST(Score, SpanTokensTypeAndDocAllMatter) {
    auto gold = fixture_gold();
    // Same sentence and span, wrong type.
    auto wrong_type = eb::score({trig("d1", kSentA, 1, 2, "Die")}, gold);
    EXPECT_EQ(wrong_type.micro.tp, 0);
    EXPECT_EQ(wrong_type.micro.fp, 1);
    // Same span and type, different sentence tokens.
    auto wrong_sent = eb::score({trig("d1", kSentC, 1, 2, "Attack")}, gold);
    EXPECT_EQ(wrong_sent.micro.tp, 0);
    // Same everything, different doc (d2 is a gold doc, so no throw).
    auto wrong_doc = eb::score({trig("d2", kSentA, 1, 2, "Attack")}, gold);
    EXPECT_EQ(wrong_doc.micro.tp, 0);
}

TEST(Score, DuplicatePredictionsAreDroppedNotPenalized) {
    auto preds = fixture_preds();
    preds.push_back(preds[0]);
    eb::EvalReport r = eb::score(preds, fixture_gold());
    EXPECT_EQ(r.duplicates_dropped, 1u);
    EXPECT_EQ(r.micro.tp, 2);
    EXPECT_EQ(r.micro.fp, 3);
    EXPECT_EQ(r.micro.fn, 3);
}

TEST(Score, RepeatedGoldTriggersAbsorbOneEach) {
    auto g = trig("d1", kSentA, 1, 2, "Attack");
    eb::EvalReport r = eb::score({g}, {g, g});
    EXPECT_EQ(r.micro.tp, 1);
    EXPECT_EQ(r.micro.fp, 0);
    EXPECT_EQ(r.micro.fn, 1);
}

TEST(Score, UnpredictedTypeStillGetsARow) {
    eb::EvalReport r = eb::score({}, fixture_gold());
    EXPECT_EQ(r.micro.tp, 0);
    EXPECT_EQ(r.micro.fn, 5);
    EXPECT_DOUBLE_EQ(r.micro.precision, 0.0);
    ASSERT_TRUE(r.per_type.count("Meet"));
    EXPECT_EQ(r.per_type.at("Meet").fn, 1);
}

TEST(Score, PredictionOutsideGoldDocumentsThrows) {
    EXPECT_THROW(eb::score({trig("d9", kSentA, 1, 2, "Attack")}, fixture_gold()),
                 eb::DataError);
}

TEST(ReportOutput, JsonAndTableCarryTheNumbers) {
    eb::EvalReport r = eb::score(fixture_preds(), fixture_gold());
    eb::OJson j = eb::report_to_json(r);
    EXPECT_EQ(j["true_positives"], 2);
    EXPECT_EQ(j["per_type"]["Attack"]["false_positives"], 1);
    std::string table = eb::report_table(r);
    EXPECT_NE(table.find("ALL"), std::string::npos);
    EXPECT_NE(table.find("Attack"), std::string::npos);
    EXPECT_NE(table.find("0.400"), std::string::npos);
}

TEST(PairedBootstrap, IdenticalSystemsAreNotSignificant) {
    auto gold = fixture_gold();
    auto preds = fixture_preds();
    auto res = eb::paired_bootstrap(gold, preds, preds, 200, 7);
    EXPECT_DOUBLE_EQ(res.delta, 0.0);
    EXPECT_DOUBLE_EQ(res.p_value, 1.0);
}

TEST(PairedBootstrap, CleanSweepIsSignificant) {
    auto gold = fixture_gold();
    auto res = eb::paired_bootstrap(gold, {}, gold, 999, 7);
    EXPECT_DOUBLE_EQ(res.f1_a, 0.0);
    EXPECT_DOUBLE_EQ(res.f1_b, 1.0);
    EXPECT_DOUBLE_EQ(res.delta, 1.0);
    EXPECT_DOUBLE_EQ(res.p_value, 1.0 / 1000.0);
}

TEST(PairedBootstrap, DeterministicForSeedAndValidates) {
    auto gold = fixture_gold();
    auto a = eb::paired_bootstrap(gold, {}, fixture_preds(), 500, 11);
    auto b = eb::paired_bootstrap(gold, {}, fixture_preds(), 500, 11);
    EXPECT_DOUBLE_EQ(a.p_value, b.p_value);
    EXPECT_DOUBLE_EQ(a.delta, b.delta);
    EXPECT_THROW(eb::paired_bootstrap(gold, {}, {}, 0, 1), eb::ConfigError);
    EXPECT_THROW(eb::paired_bootstrap(gold, {trig("nope", kSentA, 1, 2, "Attack")}, {}, 10, 1),
                 eb::DataError);
}
