#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "eventboot/bootstrap.hpp"
#include "eventboot/jsonl.hpp"
#include "eventboot/spike_cluster.hpp"
#include "eventboot/tagger.hpp"
#include "eventboot/util.hpp"

namespace eventboot {

struct PipelineConfig {
    // paths
    std::string corpus;
    std::string embeddings;
    std::string gold;
    std::string test_gold;  // optional held-out gold for evaluation
    std::string out_dir = "out";
    std::string run_log;  // optional JSON-lines log path

    ClusterConfig cluster;
    BootstrapConfig bootstrap;
    TrainOptions tagger;
    int eval_resamples = 10000;
    std::uint64_t eval_seed = 1;
    int workers = 0;  // 0 = all available cores
};

namespace detail {

// Collects every violation instead of stopping at the first one, so a bad
// config surfaces all its problems in one pass.
struct ConfigReader {
    std::vector<std::string> errors;

    void unknown_keys(const Json& obj, const std::string& where,
                      std::initializer_list<const char*> allowed) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool ok = false;
            for (const char* k : allowed) {
                if (it.key() == k) {
                    ok = true;
                    break;
                }
            }
            if (!ok) errors.push_back(where + ": unknown key \"" + it.key() + "\"");
        }
    }

    template <typename T>
    void get(const Json& obj, const char* key, const std::string& where, T& out) {
        if (!obj.contains(key)) return;
        try {
            out = obj.at(key).get<T>();
        } catch (const Json::exception&) {
            errors.push_back(where + "." + key + ": wrong type");
        }
    }

    void require_range(bool ok, const std::string& what) {
        if (!ok) errors.push_back(what);
    }
};

}  // namespace detail

inline std::vector<std::string> validate_config(const PipelineConfig& cfg) {
    std::vector<std::string> errs;
    auto check = [&](bool ok, const std::string& what) {
        if (!ok) errs.push_back(what);
    };
    check(cfg.cluster.theta_pair >= 0.0, "cluster.theta_pair must be >= 0");
    check(cfg.cluster.min_shared_entities >= 1, "cluster.min_shared_entities must be >= 1");
    check(cfg.cluster.max_cluster_size >= 2, "cluster.max_cluster_size must be >= 2");
    check(cfg.bootstrap.theta_event >= 1, "bootstrap.theta_event must be >= 1");
    check(cfg.bootstrap.theta_sim >= 0.0 && cfg.bootstrap.theta_sim <= 1.0,
          "bootstrap.theta_sim must be in [0,1]");
    check(cfg.bootstrap.per_type_cap >= 1, "bootstrap.per_type_cap must be >= 1");
    check(cfg.bootstrap.min_margin >= 0.0, "bootstrap.min_margin must be >= 0");
    check(cfg.tagger.epochs >= 1, "tagger.epochs must be >= 1");
    check(cfg.tagger.features.window >= 0, "tagger.window must be >= 0");
    check(cfg.eval_resamples >= 1, "eval.n_resamples must be >= 1");
    check(cfg.workers >= 0, "workers must be >= 0");
    return errs;
}

// Single declarative JSON config. Unknown keys at any level are rejected and
// every violation is reported, not just the first.
inline PipelineConfig parse_config_json(const Json& j) {
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    PipelineConfig cfg;
    detail::ConfigReader r;
    r.unknown_keys(j, "config", {"paths", "cluster", "bootstrap", "tagger", "eval", "workers"});

    if (j.contains("paths")) {
        const Json& p = j.at("paths");
        if (!p.is_object()) {
            r.errors.push_back("paths: must be an object");
        } else {
            r.unknown_keys(p, "paths",
                           {"corpus", "embeddings", "gold", "test_gold", "out_dir", "run_log"});
            r.get(p, "corpus", "paths", cfg.corpus);
            r.get(p, "embeddings", "paths", cfg.embeddings);
            r.get(p, "gold", "paths", cfg.gold);
            r.get(p, "test_gold", "paths", cfg.test_gold);
            r.get(p, "out_dir", "paths", cfg.out_dir);
            r.get(p, "run_log", "paths", cfg.run_log);
        }
    }
    if (j.contains("cluster")) {
        const Json& c = j.at("cluster");
        if (!c.is_object()) {
            r.errors.push_back("cluster: must be an object");
        } else {
            r.unknown_keys(c, "cluster", {"theta_pair", "min_shared_entities", "max_cluster_size"});
            r.get(c, "theta_pair", "cluster", cfg.cluster.theta_pair);
            r.get(c, "min_shared_entities", "cluster", cfg.cluster.min_shared_entities);
            r.get(c, "max_cluster_size", "cluster", cfg.cluster.max_cluster_size);
        }
    }
    if (j.contains("bootstrap")) {
        const Json& b = j.at("bootstrap");
        if (!b.is_object()) {
            r.errors.push_back("bootstrap: must be an object");
        } else {
            r.unknown_keys(b, "bootstrap",
                           {"theta_event", "theta_sim", "per_type_cap", "sample_seed", "min_margin"});
            r.get(b, "theta_event", "bootstrap", cfg.bootstrap.theta_event);
            r.get(b, "theta_sim", "bootstrap", cfg.bootstrap.theta_sim);
            r.get(b, "per_type_cap", "bootstrap", cfg.bootstrap.per_type_cap);
            r.get(b, "sample_seed", "bootstrap", cfg.bootstrap.sample_seed);
            r.get(b, "min_margin", "bootstrap", cfg.bootstrap.min_margin);
        }
    }
    if (j.contains("tagger")) {
        const Json& t = j.at("tagger");
        if (!t.is_object()) {
            r.errors.push_back("tagger: must be an object");
        } else {
            r.unknown_keys(t, "tagger", {"window", "epochs", "seed"});
            r.get(t, "window", "tagger", cfg.tagger.features.window);
            r.get(t, "epochs", "tagger", cfg.tagger.epochs);
            r.get(t, "seed", "tagger", cfg.tagger.seed);
        }
    }
    if (j.contains("eval")) {
        const Json& e = j.at("eval");
        if (!e.is_object()) {
            r.errors.push_back("eval: must be an object");
        } else {
            r.unknown_keys(e, "eval", {"n_resamples", "seed"});
            r.get(e, "n_resamples", "eval", cfg.eval_resamples);
            r.get(e, "seed", "eval", cfg.eval_seed);
        }
    }
    if (j.contains("workers")) {
        detail::ConfigReader tmp;
        tmp.get(j, "workers", "config", cfg.workers);
        for (auto& e : tmp.errors) r.errors.push_back(e);
    }

    for (const auto& e : validate_config(cfg)) r.errors.push_back(e);
    if (!r.errors.empty()) {
        std::string msg = "invalid config:";
        for (const auto& e : r.errors) msg += "\n  - " + e;
        throw ConfigError(msg);
    }
    return cfg;
}

inline PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    return parse_config_json(j);
}

}  // namespace eventboot
