#include "eventboot/pipeline.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eventboot/synth.hpp"

namespace eb = eventboot;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Workspace {
    fs::path root;
    std::string corpus, gold, truth, embeddings;

    Workspace() {
        root = fs::temp_directory_path() / "eb_pipeline_ws";
        fs::remove_all(root);
        fs::create_directories(root);
        eb::SynthSpec spec;
        spec.n_days = 4;
        spec.clusters_per_day = 2;
        spec.distractor_docs_per_day = 3;
        spec.filler_sentences_per_doc = 1;
        spec.seed = 17;
        corpus = (root / "corpus.jsonl").string();
        gold = (root / "gold.jsonl").string();
        truth = (root / "truth.jsonl").string();
        embeddings = (root / "embeddings.txt").string();
        eb::generate_files(spec, corpus, gold, truth, embeddings);
    }
    ~Workspace() { fs::remove_all(root); }

    eb::PipelineConfig config(const std::string& out_name) const {
        eb::PipelineConfig cfg;
        cfg.corpus = corpus;
        cfg.gold = gold;
        cfg.embeddings = embeddings;
        cfg.out_dir = (root / out_name).string();
        cfg.eval_resamples = 200;
        return cfg;
    }
};

std::vector<std::string> artifact_paths(const std::string& dir) {
    eb::StagePaths p = eb::StagePaths::in_dir(dir);
    return {p.clusters,     p.labeled,      p.harvested,   p.bootstrap,
            p.model_baseline, p.model_selftrain, p.preds_before, p.preds_after,
            p.eval_before,  p.eval_after,   p.significance};
}

}  // namespace

TEST(Pipeline, SelftrainWritesEveryArtifactAndScoresWell) {
    Workspace ws;
    eb::PipelineConfig cfg = ws.config("out1");
    eb::SelftrainSummary sum = eb::run_selftrain(cfg);

    EXPECT_GT(sum.n_clusters, 0u);
    EXPECT_GT(sum.n_labeled, 0u);
    EXPECT_GT(sum.n_harvested, 0u);
    EXPECT_GT(sum.n_bootstrap, 0u);
    EXPECT_LE(sum.n_labeled, sum.n_clusters);
    EXPECT_LE(sum.n_bootstrap, sum.n_harvested);
    // Trained on the full gold and evaluated on it, both models should be
    // essentially perfect; the point here is artifact plumbing, not the gain.
    EXPECT_GE(sum.before.micro.f1, 0.9);
    EXPECT_GE(sum.after.micro.f1, 0.9);

    for (const auto& path : artifact_paths(cfg.out_dir)) {
        EXPECT_TRUE(fs::exists(path)) << path;
        EXPECT_GT(fs::file_size(path), 0u) << path;
    }

    // Labeled clusters must carry types that exist in the gold ontology.
    auto labeled = eb::read_labeled_clusters_jsonl(eb::StagePaths::in_dir(cfg.out_dir).labeled);
    ASSERT_FALSE(labeled.empty());
    auto lexicon = eb::default_lexicon(5);
    for (const auto& lc : labeled) {
        EXPECT_TRUE(lexicon.count(lc.event_type)) << lc.event_type;
    }
}

TEST(Pipeline, RerunAndWorkerCountAreByteIdentical) {
    Workspace ws;
    eb::PipelineConfig first = ws.config("outA");
    eb::run_selftrain(first);

    eb::PipelineConfig again = ws.config("outB");
    eb::run_selftrain(again);
    auto a = artifact_paths(first.out_dir);
    auto b = artifact_paths(again.out_dir);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(slurp(a[i]), slurp(b[i])) << a[i] << " vs " << b[i];
    }

    eb::PipelineConfig parallel = ws.config("outC");
    parallel.workers = 2;
    eb::run_selftrain(parallel);
    auto c = artifact_paths(parallel.out_dir);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(slurp(a[i]), slurp(c[i])) << a[i] << " vs " << c[i];
    }
}

TEST(Pipeline, MissingPathsAreListedTogether) {
    eb::PipelineConfig cfg;
    try {
        eb::run_selftrain(cfg);
        FAIL() << "expected ConfigError";
    } catch (const eb::ConfigError& e) {
        std::string msg = e.what();
        EXPECT_NE(msg.find("paths.corpus"), std::string::npos);
        EXPECT_NE(msg.find("paths.gold"), std::string::npos);
        EXPECT_NE(msg.find("paths.embeddings"), std::string::npos);
    }
}

TEST(Pipeline, GoldDocUniverseSortsAndDedups) {
    eb::TriggerExample a;
    a.doc_id = "zz";
    eb::TriggerExample b;
    b.doc_id = "aa";
    EXPECT_EQ(eb::gold_doc_universe({a, b, a}), (std::vector<std::string>{"aa", "zz"}));
}

TEST(Pipeline, ExtractPredictionsRequiresKnownDocs) {
    eb::TriggerExample ex;
    ex.doc_id = "t";
    ex.sentence_tokens = {"they", "bombed", "it"};
    ex.trigger_begin = 1;
    ex.trigger_end = 2;
    ex.event_type = "Attack";
    eb::TaggerModel model = eb::train({ex});

    eb::Document doc;
    doc.doc_id = "d1";
    doc.date = *eb::Date::parse("2016-01-01");
    eb::Sentence s;
    s.tokens = {"they", "bombed", "it"};
    doc.sentences.push_back(s);
    eb::Corpus corpus = eb::Corpus::from_documents({doc});

    auto preds = eb::extract_predictions(model, corpus, {"d1"});
    ASSERT_EQ(preds.size(), 1u);
    EXPECT_EQ(preds[0].doc_id, "d1");
    EXPECT_EQ(preds[0].event_type, "Attack");
    EXPECT_EQ(preds[0].source, eb::Source::Predicted);
    EXPECT_THROW(eb::extract_predictions(model, corpus, {"ghost"}), eb::DataError);
}
