#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "eventboot/bootstrap.hpp"
#include "eventboot/config.hpp"
#include "eventboot/corpus.hpp"
#include "eventboot/embeddings.hpp"
#include "eventboot/eval.hpp"
#include "eventboot/jsonl.hpp"
#include "eventboot/runlog.hpp"
#include "eventboot/spike_cluster.hpp"
#include "eventboot/tagger.hpp"

namespace eventboot {

// Canonical artifact names inside an output directory. The staged commands
// and the end-to-end run write the same files through the same functions, so
// the two paths are byte-identical.
struct StagePaths {
    std::string clusters;
    std::string labeled;
    std::string harvested;
    std::string bootstrap;
    std::string model_baseline;
    std::string model_selftrain;
    std::string preds_before;
    std::string preds_after;
    std::string eval_before;
    std::string eval_after;
    std::string significance;

    static StagePaths in_dir(const std::string& dir) {
        auto p = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
        StagePaths s;
        s.clusters = p("clusters.jsonl");
        s.labeled = p("labeled_clusters.jsonl");
        s.harvested = p("harvested.jsonl");
        s.bootstrap = p("bootstrap.jsonl");
        s.model_baseline = p("model_baseline.txt");
        s.model_selftrain = p("model_selftrain.txt");
        s.preds_before = p("preds_before.jsonl");
        s.preds_after = p("preds_after.jsonl");
        s.eval_before = p("eval_before.json");
        s.eval_after = p("eval_after.json");
        s.significance = p("significance.json");
        return s;
    }
};

inline std::vector<std::string> gold_doc_universe(const std::vector<TriggerExample>& gold) {
    std::vector<std::string> docs;
    for (const auto& g : gold) docs.push_back(g.doc_id);
    std::sort(docs.begin(), docs.end());
    docs.erase(std::unique(docs.begin(), docs.end()), docs.end());
    return docs;
}

// Run the model over every sentence of the given documents, in document then
// sentence then token order.
inline std::vector<TriggerExample> extract_predictions(const TaggerModel& model,
                                                       const Corpus& corpus,
                                                       const std::vector<std::string>& doc_ids) {
    std::vector<TriggerExample> out;
    for (const auto& doc_id : doc_ids) {
        const Document* doc = corpus.find(doc_id);
        if (!doc) {
            throw DataError("evaluation references a document not in the corpus: " + doc_id);
        }
        for (const auto& sent : doc->sentences) {
            for (const auto& p : predict(model, sent)) {
                TriggerExample ex;
                ex.doc_id = doc_id;
                ex.sentence_tokens = sent.tokens;
                ex.entities = sent.entities;
                ex.trigger_begin = p.token_index;
                ex.trigger_end = p.token_index + 1;
                ex.event_type = p.event_type;
                ex.source = Source::Predicted;
                ex.pos = sent.pos;
                ex.lemma = sent.lemma;
                out.push_back(std::move(ex));
            }
        }
    }
    return out;
}

inline void write_json_file(const std::string& path, const OJson& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

inline OJson significance_to_json(const PairedBootstrapResult& r) {
    OJson j;
    j["f1_before"] = r.f1_a;
    j["f1_after"] = r.f1_b;
    j["delta"] = r.delta;
    j["p_value"] = r.p_value;
    j["n_resamples"] = r.n_resamples;
    j["seed"] = r.seed;
    return j;
}

struct SelftrainSummary {
    EvalReport before;
    EvalReport after;
    PairedBootstrapResult significance;
    std::size_t n_clusters = 0;
    std::size_t n_labeled = 0;
    std::size_t n_harvested = 0;
    std::size_t n_bootstrap = 0;
};

// End-to-end self-training: cluster, label with a gold-trained baseline,
// assign triggers, balance, retrain on gold plus bootstrap, evaluate both
// models on the held-out gold (or resubstitute on training gold when no
// test_gold is configured). Every intermediate artifact is written out.
inline SelftrainSummary run_selftrain(const PipelineConfig& cfg, RunLog* log = nullptr) {
    std::vector<std::string> missing;
    if (cfg.corpus.empty()) missing.push_back("paths.corpus");
    if (cfg.gold.empty()) missing.push_back("paths.gold");
    if (cfg.embeddings.empty()) missing.push_back("paths.embeddings");
    if (!missing.empty()) {
        std::string msg = "selftrain needs:";
        for (const auto& m : missing) msg += " " + m;
        throw ConfigError(msg);
    }
    std::filesystem::create_directories(cfg.out_dir);
    StagePaths paths = StagePaths::in_dir(cfg.out_dir);

    Corpus corpus = ingest_jsonl(cfg.corpus, static_cast<unsigned>(cfg.workers));
    if (log) {
        log->event("ingest.summary", {{"documents", corpus.size()},
                                      {"sentences", corpus.n_sentences()},
                                      {"entities", corpus.counts().total_mentions()}});
    }
    std::vector<TriggerExample> gold = read_examples_jsonl(cfg.gold);
    if (gold.empty()) throw DataError("gold example file is empty: " + cfg.gold);
    EmbeddingTable table = load_embeddings(cfg.embeddings);

    std::vector<Cluster> clusters = cluster_corpus(corpus, cfg.cluster,
                                                   static_cast<unsigned>(cfg.workers), log);
    write_clusters_jsonl(paths.clusters, clusters);

    TaggerModel baseline = train(gold, cfg.tagger);
    save_model(baseline, paths.model_baseline);

    CanonicalResult canon = canonical_vectors(gold, table);
    if (log) {
        for (const auto& t : canon.skipped_types) {
            log->event("canonical.skipped_type", {{"event_type", t}});
        }
    }
    LabelResult lr = label_all(corpus, clusters, baseline, cfg.bootstrap, log);
    write_labeled_clusters_jsonl(lr.labeled, paths.labeled);
    AssignResult ar = assign_all(corpus, lr.labeled, canon, table, cfg.bootstrap, log);
    write_examples_jsonl(paths.harvested, ar.examples);

    std::vector<TriggerExample> boot = sample_balanced(ar.examples, cfg.bootstrap.per_type_cap,
                                                       cfg.bootstrap.sample_seed, log);
    write_examples_jsonl(paths.bootstrap, boot);

    std::vector<TriggerExample> combined = gold;
    combined.insert(combined.end(), boot.begin(), boot.end());
    TaggerModel retrained = train(combined, cfg.tagger);
    save_model(retrained, paths.model_selftrain);

    std::vector<TriggerExample> test_gold =
        cfg.test_gold.empty() ? gold : read_examples_jsonl(cfg.test_gold);
    if (test_gold.empty()) throw DataError("test gold example file is empty: " + cfg.test_gold);
    std::vector<std::string> universe = gold_doc_universe(test_gold);
    std::vector<TriggerExample> preds_before = extract_predictions(baseline, corpus, universe);
    std::vector<TriggerExample> preds_after = extract_predictions(retrained, corpus, universe);
    write_examples_jsonl(paths.preds_before, preds_before);
    write_examples_jsonl(paths.preds_after, preds_after);

    SelftrainSummary sum;
    sum.before = score(preds_before, test_gold, log);
    sum.after = score(preds_after, test_gold, log);
    write_json_file(paths.eval_before, report_to_json(sum.before));
    write_json_file(paths.eval_after, report_to_json(sum.after));
    sum.significance =
        paired_bootstrap(test_gold, preds_before, preds_after, cfg.eval_resamples, cfg.eval_seed);
    write_json_file(paths.significance, significance_to_json(sum.significance));
    sum.n_clusters = clusters.size();
    sum.n_labeled = lr.labeled.size();
    sum.n_harvested = ar.examples.size();
    sum.n_bootstrap = boot.size();
    if (log) {
        log->event("selftrain.summary", {{"clusters", sum.n_clusters},
                                         {"labeled", sum.n_labeled},
                                         {"harvested", sum.n_harvested},
                                         {"bootstrap", sum.n_bootstrap},
                                         {"f1_before", sum.before.micro.f1},
                                         {"f1_after", sum.after.micro.f1}});
    }
    return sum;
}

}  // namespace eventboot
