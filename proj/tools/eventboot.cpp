#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eventboot/eventboot.hpp"

namespace eb = eventboot;
namespace fs = std::filesystem;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<int> theta_event;
    std::optional<double> theta_sim;
    std::optional<double> theta_pair;
    std::optional<int> per_type_cap;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "pipeline config JSON");
    cmd->add_option("--seed", o.seed, "master seed (training, sampling, significance)");
    cmd->add_option("--workers", o.workers, "worker threads, 0 = all cores");
    cmd->add_option("--theta-event", o.theta_event, "min mentions for cluster labeling");
    cmd->add_option("--theta-sim", o.theta_sim, "min cosine for trigger assignment");
    cmd->add_option("--theta-pair", o.theta_pair, "min pair score for clustering");
    cmd->add_option("--per-type-cap", o.per_type_cap, "balanced sampling cap per type");
}

// Config file first, then flag overrides, then range validation.
eb::PipelineConfig resolve_config(const CommonOpts& o) {
    eb::PipelineConfig cfg;
    if (!o.config_path.empty()) cfg = eb::load_config(o.config_path);
    if (o.seed) {
        cfg.tagger.seed = *o.seed;
        cfg.bootstrap.sample_seed = *o.seed;
        cfg.eval_seed = *o.seed;
    }
    if (o.workers) cfg.workers = *o.workers;
    if (o.theta_event) cfg.bootstrap.theta_event = *o.theta_event;
    if (o.theta_sim) cfg.bootstrap.theta_sim = *o.theta_sim;
    if (o.theta_pair) cfg.cluster.theta_pair = *o.theta_pair;
    if (o.per_type_cap) cfg.bootstrap.per_type_cap = *o.per_type_cap;
    auto errs = eb::validate_config(cfg);
    if (!errs.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errs) msg += "\n  - " + e;
        throw eb::ConfigError(msg);
    }
    return cfg;
}

std::unique_ptr<eb::RunLog> open_log(const std::string& path) {
    if (path.empty()) return nullptr;
    return std::make_unique<eb::RunLog>(path);
}

int cmd_synth(const std::string& out_dir, const eb::SynthSpec& spec, const std::string& log_path) {
    fs::create_directories(out_dir);
    auto log = open_log(log_path);
    auto p = [&](const char* name) { return (fs::path(out_dir) / name).string(); };
    eb::SynthFileStats stats = eb::generate_files(spec, p("corpus.jsonl"), p("gold.jsonl"),
                                                  p("truth_clusters.jsonl"), p("embeddings.txt"),
                                                  log.get());
    std::cout << "synth: " << stats.n_documents << " documents, " << stats.n_sentences
              << " sentences, " << stats.n_gold << " gold examples, " << stats.n_truth_clusters
              << " planted clusters -> " << out_dir << "\n";
    return 0;
}

int cmd_ingest(const std::string& corpus_path, const eb::PipelineConfig& cfg,
               const std::string& normalized_out, const std::string& stats_out) {
    eb::Corpus corpus = eb::ingest_jsonl(corpus_path, static_cast<unsigned>(cfg.workers));
    std::cout << "ingest: " << corpus.size() << " documents, " << corpus.n_sentences()
              << " sentences, " << corpus.counts().total_mentions() << " entity mentions, "
              << corpus.counts().n_entities() << " unique entities, " << corpus.by_date().size()
              << " dates\n";
    if (!normalized_out.empty()) {
        std::vector<eb::Document> docs = corpus.documents();
        eb::write_documents_jsonl(normalized_out, docs);
    }
    if (!stats_out.empty()) {
        eb::OJson j;
        j["documents"] = corpus.size();
        j["sentences"] = corpus.n_sentences();
        j["entity_mentions"] = corpus.counts().total_mentions();
        j["unique_entities"] = corpus.counts().n_entities();
        j["dates"] = corpus.by_date().size();
        eb::write_json_file(stats_out, j);
    }
    return 0;
}

int cmd_cluster(const std::string& corpus_path, const std::string& out,
                const eb::PipelineConfig& cfg, const std::string& log_path) {
    auto log = open_log(log_path);
    eb::Corpus corpus = eb::ingest_jsonl(corpus_path, static_cast<unsigned>(cfg.workers));
    auto clusters = eb::cluster_corpus(corpus, cfg.cluster, static_cast<unsigned>(cfg.workers),
                                       log.get());
    eb::write_clusters_jsonl(out, clusters);
    std::cout << "cluster: " << clusters.size() << " clusters -> " << out << "\n";
    return 0;
}

int cmd_train(const std::string& examples_path, const std::string& extra_path,
              const std::string& model_out, const eb::PipelineConfig& cfg) {
    auto examples = eb::read_examples_jsonl(examples_path);
    if (!extra_path.empty()) {
        auto extra = eb::read_examples_jsonl(extra_path);
        examples.insert(examples.end(), extra.begin(), extra.end());
    }
    eb::TaggerModel model = eb::train(examples, cfg.tagger);
    eb::save_model(model, model_out);
    std::cout << "train: " << examples.size() << " examples, " << model.ontology().size()
              << " event types, " << model.feature_names().size() << " features -> " << model_out
              << "\n";
    return 0;
}

int cmd_label(const std::string& corpus_path, const std::string& clusters_path,
              const std::string& model_path, const std::string& out,
              const eb::PipelineConfig& cfg, const std::string& log_path) {
    auto log = open_log(log_path);
    eb::Corpus corpus = eb::ingest_jsonl(corpus_path, static_cast<unsigned>(cfg.workers));
    auto clusters = eb::read_clusters_jsonl(clusters_path);
    eb::TaggerModel model = eb::load_model(model_path);
    eb::LabelResult res = eb::label_all(corpus, clusters, model, cfg.bootstrap, log.get());
    eb::write_labeled_clusters_jsonl(res.labeled, out);
    std::cout << "label: " << res.labeled.size() << " of " << res.clusters_seen
              << " clusters labeled -> " << out << "\n";
    return 0;
}

int cmd_assign(const std::string& corpus_path, const std::string& labeled_path,
               const std::string& gold_path, const std::string& embeddings_path,
               const std::string& out, const eb::PipelineConfig& cfg,
               const std::string& log_path) {
    auto log = open_log(log_path);
    eb::Corpus corpus = eb::ingest_jsonl(corpus_path, static_cast<unsigned>(cfg.workers));
    auto labeled = eb::read_labeled_clusters_jsonl(labeled_path);
    auto gold = eb::read_examples_jsonl(gold_path);
    eb::EmbeddingTable table = eb::load_embeddings(embeddings_path);
    eb::CanonicalResult canon = eb::canonical_vectors(gold, table);
    for (const auto& t : canon.skipped_types) {
        std::cerr << "warning: no in-vocabulary gold triggers for event type " << t << "\n";
    }
    eb::AssignResult res = eb::assign_all(corpus, labeled, canon, table, cfg.bootstrap, log.get());
    eb::write_examples_jsonl(out, res.examples);
    std::cout << "assign: " << res.examples.size() << " examples from " << labeled.size()
              << " labeled clusters (" << res.duplicates_dropped << " duplicates dropped) -> "
              << out << "\n";
    return 0;
}

int cmd_emit(const std::string& examples_path, const std::string& out,
             const eb::PipelineConfig& cfg, const std::string& log_path) {
    auto log = open_log(log_path);
    auto examples = eb::read_examples_jsonl(examples_path);
    auto sampled = eb::sample_balanced(examples, cfg.bootstrap.per_type_cap,
                                       cfg.bootstrap.sample_seed, log.get());
    eb::write_examples_jsonl(out, sampled);
    std::cout << "emit: " << sampled.size() << " of " << examples.size()
              << " examples after balancing -> " << out << "\n";
    return 0;
}

int cmd_eval(const std::string& gold_path, const std::string& pred_path,
             const std::string& model_path, const std::string& corpus_path,
             const std::string& baseline_pred_path, const std::string& report_out,
             const std::string& pred_out, const std::string& sig_out,
             const eb::PipelineConfig& cfg) {
    auto gold = eb::read_examples_jsonl(gold_path);
    std::vector<eb::TriggerExample> preds;
    if (!pred_path.empty()) {
        preds = eb::read_examples_jsonl(pred_path);
    } else {
        if (model_path.empty() || corpus_path.empty()) {
            throw eb::ConfigError("eval needs either --pred or both --model and --corpus");
        }
        eb::TaggerModel model = eb::load_model(model_path);
        eb::Corpus corpus = eb::ingest_jsonl(corpus_path, static_cast<unsigned>(cfg.workers));
        preds = eb::extract_predictions(model, corpus, eb::gold_doc_universe(gold));
    }
    if (!pred_out.empty()) eb::write_examples_jsonl(pred_out, preds);
    eb::EvalReport report = eb::score(preds, gold);
    std::cout << eb::report_table(report);
    if (!report_out.empty()) eb::write_json_file(report_out, eb::report_to_json(report));
    if (!baseline_pred_path.empty()) {
        auto base = eb::read_examples_jsonl(baseline_pred_path);
        auto sig = eb::paired_bootstrap(gold, base, preds, cfg.eval_resamples, cfg.eval_seed);
        std::cout << "delta F1 " << eb::format_double(sig.delta) << " (p = "
                  << eb::format_double(sig.p_value) << ", " << sig.n_resamples
                  << " resamples)\n";
        if (!sig_out.empty()) eb::write_json_file(sig_out, eb::significance_to_json(sig));
    }
    return 0;
}

int cmd_selftrain(eb::PipelineConfig cfg) {
    if (cfg.run_log.empty()) {
        fs::create_directories(cfg.out_dir);
        cfg.run_log = (fs::path(cfg.out_dir) / "run_log.jsonl").string();
    }
    auto log = open_log(cfg.run_log);
    eb::SelftrainSummary sum = eb::run_selftrain(cfg, log.get());
    std::cout << "selftrain: " << sum.n_clusters << " clusters, " << sum.n_labeled
              << " labeled, " << sum.n_harvested << " harvested, " << sum.n_bootstrap
              << " bootstrap examples\n";
    std::cout << "before: P " << eb::format_double(sum.before.micro.precision) << " R "
              << eb::format_double(sum.before.micro.recall) << " F1 "
              << eb::format_double(sum.before.micro.f1) << "\n";
    std::cout << "after:  P " << eb::format_double(sum.after.micro.precision) << " R "
              << eb::format_double(sum.after.micro.recall) << " F1 "
              << eb::format_double(sum.after.micro.f1) << "\n";
    std::cout << "delta F1 " << eb::format_double(sum.significance.delta) << " (p = "
              << eb::format_double(sum.significance.p_value) << ")\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-training data generation for event trigger extraction"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic evaluation corpus");
    std::string synth_out = "synth_out";
    std::string synth_log;
    eb::SynthSpec spec;
    std::string start_date;
    synth->add_option("--out-dir", synth_out, "output directory");
    synth->add_option("--seed", spec.seed, "generation seed");
    synth->add_option("--types", spec.n_event_types, "number of event types");
    synth->add_option("--days", spec.n_days, "number of days");
    synth->add_option("--clusters-per-day", spec.clusters_per_day, "planted clusters per type per day");
    synth->add_option("--paraphrases", spec.paraphrases_per_cluster, "documents per planted cluster");
    synth->add_option("--distractors", spec.distractor_docs_per_day, "distractor documents per day");
    synth->add_option("--commons", spec.n_common_entities, "common entity pool size");
    synth->add_option("--zipf", spec.entity_zipf_exponent, "common entity Zipf exponent");
    synth->add_option("--rare-per-cluster", spec.rare_entities_per_cluster, "rare entities per cluster");
    synth->add_option("--fillers", spec.filler_sentences_per_doc, "filler sentences per document");
    synth->add_option("--noise-fraction", spec.noise_doc_fraction, "chance of a confusable noise member");
    synth->add_option("--start-date", start_date, "first day, YYYY-MM-DD");
    synth->add_option("--log", synth_log, "structured run log path");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse and validate a corpus");
    std::string in_corpus, in_normalized, in_stats;
    CommonOpts ingest_opts;
    ingest->add_option("--corpus", in_corpus, "corpus JSONL")->required();
    ingest->add_option("--normalized-out", in_normalized, "write normalized documents here");
    ingest->add_option("--stats-out", in_stats, "write corpus stats JSON here");
    add_common(ingest, ingest_opts);

    // cluster
    auto* cluster = app.add_subcommand("cluster", "same-day clustering via rare shared entities");
    std::string cl_corpus, cl_out, cl_log;
    CommonOpts cl_opts;
    cluster->add_option("--corpus", cl_corpus, "corpus JSONL")->required();
    cluster->add_option("--out", cl_out, "clusters JSONL")->required();
    cluster->add_option("--log", cl_log, "structured run log path");
    add_common(cluster, cl_opts);

    // train
    auto* train = app.add_subcommand("train", "train the trigger tagger");
    std::string tr_examples, tr_extra, tr_model;
    CommonOpts tr_opts;
    std::optional<int> tr_epochs, tr_window;
    train->add_option("--examples", tr_examples, "training examples JSONL")->required();
    train->add_option("--extra", tr_extra, "additional examples JSONL (appended)");
    train->add_option("--model-out", tr_model, "model file")->required();
    train->add_option("--epochs", tr_epochs, "training epochs");
    train->add_option("--window", tr_window, "feature context window");
    add_common(train, tr_opts);

    // label
    auto* label = app.add_subcommand("label", "label clusters with the baseline extractor");
    std::string lb_corpus, lb_clusters, lb_model, lb_out, lb_log;
    CommonOpts lb_opts;
    label->add_option("--corpus", lb_corpus, "corpus JSONL")->required();
    label->add_option("--clusters", lb_clusters, "clusters JSONL")->required();
    label->add_option("--model", lb_model, "baseline model file")->required();
    label->add_option("--out", lb_out, "labeled clusters JSONL")->required();
    label->add_option("--log", lb_log, "structured run log path");
    add_common(label, lb_opts);

    // assign
    auto* assign = app.add_subcommand("assign", "assign triggers inside labeled clusters");
    std::string as_corpus, as_labeled, as_gold, as_emb, as_out, as_log;
    CommonOpts as_opts;
    assign->add_option("--corpus", as_corpus, "corpus JSONL")->required();
    assign->add_option("--labeled", as_labeled, "labeled clusters JSONL")->required();
    assign->add_option("--gold", as_gold, "gold examples JSONL (canonical vectors)")->required();
    assign->add_option("--embeddings", as_emb, "embedding text file")->required();
    assign->add_option("--out", as_out, "harvested examples JSONL")->required();
    assign->add_option("--log", as_log, "structured run log path");
    add_common(assign, as_opts);

    // emit
    auto* emit = app.add_subcommand("emit", "type-balanced sampling of harvested examples");
    std::string em_examples, em_out, em_log;
    CommonOpts em_opts;
    emit->add_option("--examples", em_examples, "harvested examples JSONL")->required();
    emit->add_option("--out", em_out, "bootstrap dataset JSONL")->required();
    emit->add_option("--log", em_log, "structured run log path");
    add_common(emit, em_opts);

    // eval
    auto* eval = app.add_subcommand("eval", "score predictions against gold triggers");
    std::string ev_gold, ev_pred, ev_model, ev_corpus, ev_base, ev_report, ev_pred_out, ev_sig;
    CommonOpts ev_opts;
    std::optional<int> ev_resamples;
    eval->add_option("--gold", ev_gold, "gold examples JSONL")->required();
    eval->add_option("--pred", ev_pred, "predictions JSONL (skip model inference)");
    eval->add_option("--model", ev_model, "model file to run over --corpus");
    eval->add_option("--corpus", ev_corpus, "corpus JSONL for --model");
    eval->add_option("--pred-baseline", ev_base, "baseline predictions JSONL for significance");
    eval->add_option("--report-out", ev_report, "report JSON path");
    eval->add_option("--pred-out", ev_pred_out, "write produced predictions here");
    eval->add_option("--sig-out", ev_sig, "significance JSON path");
    eval->add_option("--resamples", ev_resamples, "paired bootstrap resamples");
    add_common(eval, ev_opts);

    // selftrain
    auto* selftrain = app.add_subcommand("selftrain", "cluster, harvest, retrain, evaluate");
    std::string st_corpus, st_gold, st_emb, st_test_gold, st_out_dir, st_log;
    CommonOpts st_opts;
    selftrain->add_option("--corpus", st_corpus, "corpus JSONL");
    selftrain->add_option("--gold", st_gold, "gold examples JSONL");
    selftrain->add_option("--embeddings", st_emb, "embedding text file");
    selftrain->add_option("--test-gold", st_test_gold, "held-out gold for evaluation");
    selftrain->add_option("--out-dir", st_out_dir, "output directory");
    selftrain->add_option("--log", st_log, "structured run log path");
    add_common(selftrain, st_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            if (!start_date.empty()) {
                auto d = eb::Date::parse(start_date);
                if (!d) throw eb::ConfigError("--start-date is not a valid calendar day: " + start_date);
                spec.start_date = *d;
            }
            return cmd_synth(synth_out, spec, synth_log);
        }
        if (ingest->parsed()) {
            return cmd_ingest(in_corpus, resolve_config(ingest_opts), in_normalized, in_stats);
        }
        if (cluster->parsed()) {
            return cmd_cluster(cl_corpus, cl_out, resolve_config(cl_opts), cl_log);
        }
        if (train->parsed()) {
            eb::PipelineConfig cfg = resolve_config(tr_opts);
            if (tr_epochs) cfg.tagger.epochs = *tr_epochs;
            if (tr_window) cfg.tagger.features.window = *tr_window;
            auto errs = eb::validate_config(cfg);
            if (!errs.empty()) throw eb::ConfigError("invalid configuration: " + errs.front());
            return cmd_train(tr_examples, tr_extra, tr_model, cfg);
        }
        if (label->parsed()) {
            return cmd_label(lb_corpus, lb_clusters, lb_model, lb_out, resolve_config(lb_opts),
                             lb_log);
        }
        if (assign->parsed()) {
            return cmd_assign(as_corpus, as_labeled, as_gold, as_emb, as_out,
                              resolve_config(as_opts), as_log);
        }
        if (emit->parsed()) {
            return cmd_emit(em_examples, em_out, resolve_config(em_opts), em_log);
        }
        if (eval->parsed()) {
            eb::PipelineConfig cfg = resolve_config(ev_opts);
            if (ev_resamples) cfg.eval_resamples = *ev_resamples;
            return cmd_eval(ev_gold, ev_pred, ev_model, ev_corpus, ev_base, ev_report,
                            ev_pred_out, ev_sig, cfg);
        }
        if (selftrain->parsed()) {
            eb::PipelineConfig cfg = resolve_config(st_opts);
            if (!st_corpus.empty()) cfg.corpus = st_corpus;
            if (!st_gold.empty()) cfg.gold = st_gold;
            if (!st_emb.empty()) cfg.embeddings = st_emb;
            if (!st_test_gold.empty()) cfg.test_gold = st_test_gold;
            if (!st_out_dir.empty()) cfg.out_dir = st_out_dir;
            if (!st_log.empty()) cfg.run_log = st_log;
            return cmd_selftrain(std::move(cfg));
        }
    } catch (const eb::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const eb::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
