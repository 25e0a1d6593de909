#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "eventboot/tokenize.hpp"
#include "eventboot/types.hpp"
#include "eventboot/util.hpp"

namespace eventboot {

struct FeatureConfig {
    int window = 2;  // context tokens and bigrams within +/- window
};

// Lightweight view of one sentence, so featurization works over both corpus
// sentences and training examples.
struct SentenceView {
    std::span<const std::string> tokens;
    std::span<const EntityMention> entities;
    std::span<const std::string> pos;
    std::span<const std::string> lemma;

    static SentenceView of(const Sentence& s) {
        return {s.tokens, s.entities, s.pos, s.lemma};
    }
    static SentenceView of(const TriggerExample& ex) {
        return {ex.sentence_tokens, ex.entities, ex.pos, ex.lemma};
    }
};

namespace detail {

inline const EntityMention* containing_entity(const SentenceView& s, std::size_t i) {
    for (const auto& m : s.entities) {
        if (i >= m.begin && i < m.end) return &m;
    }
    return nullptr;
}

// Distance in tokens from position i to the nearest mention; 0 when inside.
// Ties go to the mention that starts earlier.
inline const EntityMention* nearest_entity(const SentenceView& s, std::size_t i,
                                           std::size_t* dist_out) {
    const EntityMention* best = nullptr;
    std::size_t best_d = 0;
    for (const auto& m : s.entities) {
        std::size_t d;
        if (i < m.begin) d = m.begin - i;
        else if (i >= m.end) d = i - m.end + 1;
        else d = 0;
        if (!best || d < best_d) {
            best = &m;
            best_d = d;
        }
    }
    if (best && dist_out) *dist_out = best_d;
    return best;
}

inline std::string distance_bucket(std::size_t d) {
    if (d <= 2) return std::to_string(d);
    if (d <= 5) return "3-5";
    return "6+";
}

// Context representation: sentence boundary sentinels outside the range, the
// entity type for tokens inside a mention, otherwise the case-folded token.
inline std::string context_form(const SentenceView& s, long j) {
    if (j < 0) return "<s>";
    if (j >= static_cast<long>(s.tokens.size())) return "</s>";
    if (const auto* m = containing_entity(s, static_cast<std::size_t>(j))) {
        return "<" + m->ner_type + ">";
    }
    return fold_case(s.tokens[static_cast<std::size_t>(j)]);
}

}  // namespace detail

// Deterministic per-token feature set: token identity (raw and folded),
// character suffixes, entity-normalized context tokens and bigrams within the
// window, the nearest entity's type and a distance bucket, plus POS and lemma
// when the input carries them.
inline std::vector<std::string> featurize(const SentenceView& s, std::size_t i,
                                          const FeatureConfig& cfg = {}) {
    if (i >= s.tokens.size()) {
        throw DataError("featurize: token index " + std::to_string(i) + " out of range");
    }
    std::vector<std::string> feats;
    const std::string& tok = s.tokens[i];
    feats.push_back("tok=" + tok);
    feats.push_back("low=" + fold_case(tok));
    if (tok.size() >= 3) feats.push_back("suf3=" + tok.substr(tok.size() - 3));
    if (tok.size() >= 4) feats.push_back("suf4=" + tok.substr(tok.size() - 4));
    if (!s.pos.empty()) feats.push_back("pos=" + s.pos[i]);
    if (!s.lemma.empty()) feats.push_back("lemma=" + fold_case(s.lemma[i]));

    const long li = static_cast<long>(i);
    for (int k = 1; k <= cfg.window; ++k) {
        feats.push_back("w@-" + std::to_string(k) + "=" + detail::context_form(s, li - k));
        feats.push_back("w@+" + std::to_string(k) + "=" + detail::context_form(s, li + k));
    }
    for (int k = -cfg.window; k < cfg.window; ++k) {
        feats.push_back("bg@" + std::to_string(k) + "=" + detail::context_form(s, li + k) +
                        "_" + detail::context_form(s, li + k + 1));
    }

    // Entity type and distance bucket are fused into one feature: a bare
    // bucket string shared across entity types would let weight learned for
    // tokens near one type bleed onto tokens near another.
    std::size_t dist = 0;
    if (const auto* m = detail::nearest_entity(s, i, &dist)) {
        feats.push_back("nearent=" + m->ner_type + "@" + detail::distance_bucket(dist));
    } else {
        feats.push_back("nearent=NONE");
    }

    std::sort(feats.begin(), feats.end());
    feats.erase(std::unique(feats.begin(), feats.end()), feats.end());
    return feats;
}

struct Prediction {
    std::uint32_t token_index = 0;
    std::string event_type;
    double margin = 0.0;  // score gap between the best and second-best label
};

// Linear per-token multiclass model with averaged weights. Label index 0 is
// NONE; the rest is the sorted event ontology, so an index-order argmax scan
// realizes the tie-break (NONE first, then lexicographically smallest type).
class TaggerModel {
public:
    static constexpr std::uint32_t kNone = 0;

    TaggerModel() = default;
    TaggerModel(FeatureConfig cfg, std::vector<std::string> labels)
        : cfg_(cfg), labels_(std::move(labels)) {}

    const FeatureConfig& feature_config() const { return cfg_; }
    const std::vector<std::string>& labels() const { return labels_; }

    std::vector<std::string> ontology() const {
        return {labels_.begin() + 1, labels_.end()};
    }

    std::uint32_t intern_feature(const std::string& feat) {
        auto [it, inserted] = feat_index_.emplace(feat, static_cast<std::uint32_t>(feat_names_.size()));
        if (inserted) {
            feat_names_.push_back(feat);
            weights_.emplace_back(labels_.size(), 0.0);
        }
        return it->second;
    }

    std::optional<std::uint32_t> feature_id(const std::string& feat) const {
        auto it = feat_index_.find(feat);
        if (it == feat_index_.end()) return std::nullopt;
        return it->second;
    }

    double weight(const std::string& feat, const std::string& label) const {
        auto fid = feature_id(feat);
        if (!fid) return 0.0;
        for (std::size_t l = 0; l < labels_.size(); ++l) {
            if (labels_[l] == label) return weights_[*fid][l];
        }
        return 0.0;
    }

    std::vector<std::vector<double>>& weights() { return weights_; }
    const std::vector<std::vector<double>>& weights() const { return weights_; }
    const std::vector<std::string>& feature_names() const { return feat_names_; }

    std::vector<double> score_features(const std::vector<std::uint32_t>& feats) const {
        std::vector<double> scores(labels_.size(), 0.0);
        for (std::uint32_t f : feats) {
            const auto& row = weights_[f];
            for (std::size_t l = 0; l < scores.size(); ++l) scores[l] += row[l];
        }
        return scores;
    }

    std::vector<double> score_token(const SentenceView& s, std::size_t i) const {
        std::vector<double> scores(labels_.size(), 0.0);
        for (const auto& feat : featurize(s, i, cfg_)) {
            if (auto fid = feature_id(feat)) {
                const auto& row = weights_[*fid];
                for (std::size_t l = 0; l < scores.size(); ++l) scores[l] += row[l];
            }
        }
        return scores;
    }

    // Index-order argmax: equal scores resolve to the lower index.
    static std::size_t argmax(const std::vector<double>& scores) {
        std::size_t best = 0;
        for (std::size_t l = 1; l < scores.size(); ++l) {
            if (scores[l] > scores[best]) best = l;
        }
        return best;
    }

    bool empty() const { return labels_.empty(); }

private:
    FeatureConfig cfg_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, std::uint32_t> feat_index_;
    std::vector<std::string> feat_names_;
    std::vector<std::vector<double>> weights_;
};

struct TrainOptions {
    int epochs = 5;
    std::uint64_t seed = 1;
    FeatureConfig features;
};

// Averaged online training. Every token of every example sentence is an
// instance: tokens inside the trigger span carry the event type, all others
// are NONE. Deterministic for a fixed (example order, seed, epochs).
inline TaggerModel train(const std::vector<TriggerExample>& examples,
                         const TrainOptions& opts = {}) {
    std::vector<std::string> ontology;
    for (const auto& ex : examples) {
        if (!ex.event_type.empty() && ex.event_type != "NONE") {
            ontology.push_back(ex.event_type);
        }
    }
    std::sort(ontology.begin(), ontology.end());
    ontology.erase(std::unique(ontology.begin(), ontology.end()), ontology.end());
    if (ontology.empty()) {
        throw DataError("train: no positive examples, the ontology would be empty");
    }

    std::vector<std::string> labels;
    labels.reserve(ontology.size() + 1);
    labels.push_back("NONE");
    for (auto& t : ontology) labels.push_back(std::move(t));
    TaggerModel model(opts.features, labels);

    std::unordered_map<std::string, std::uint32_t> label_index;
    for (std::uint32_t l = 0; l < labels.size(); ++l) label_index[labels[l]] = l;

    struct Instance {
        std::vector<std::uint32_t> feats;
        std::uint32_t label;
    };
    std::vector<Instance> instances;
    for (const auto& ex : examples) {
        SentenceView view = SentenceView::of(ex);
        for (std::size_t i = 0; i < view.tokens.size(); ++i) {
            Instance inst;
            for (const auto& feat : featurize(view, i, opts.features)) {
                inst.feats.push_back(model.intern_feature(feat));
            }
            bool in_trigger = i >= ex.trigger_begin && i < ex.trigger_end;
            inst.label = in_trigger ? label_index.at(ex.event_type) : TaggerModel::kNone;
            instances.push_back(std::move(inst));
        }
    }

    const std::size_t n_labels = labels.size();
    auto& w = model.weights();
    std::vector<std::vector<double>> acc(w.size(), std::vector<double>(n_labels, 0.0));

    Rng rng(opts.seed);
    std::vector<std::size_t> order(instances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    double t = 1.0;
    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t oi : order) {
            const Instance& inst = instances[oi];
            std::vector<double> scores(n_labels, 0.0);
            for (std::uint32_t f : inst.feats) {
                const auto& row = w[f];
                for (std::size_t l = 0; l < n_labels; ++l) scores[l] += row[l];
            }
            std::size_t pred = TaggerModel::argmax(scores);
            if (pred != inst.label) {
                for (std::uint32_t f : inst.feats) {
                    w[f][inst.label] += 1.0;
                    acc[f][inst.label] += t;
                    w[f][pred] -= 1.0;
                    acc[f][pred] -= t;
                }
            }
            t += 1.0;
        }
    }
    // Averaged weights: final minus accumulated/T, the usual trick to avoid
    // storing one weight vector per step.
    for (std::size_t f = 0; f < w.size(); ++f) {
        for (std::size_t l = 0; l < n_labels; ++l) {
            w[f][l] -= acc[f][l] / t;
        }
    }
    return model;
}

// Per-token argmax over the ontology plus NONE; only non-NONE decisions are
// returned, each with its score margin.
inline std::vector<Prediction> predict(const TaggerModel& model, const SentenceView& s) {
    std::vector<Prediction> out;
    if (model.empty()) return out;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        std::vector<double> scores = model.score_token(s, i);
        std::size_t best = TaggerModel::argmax(scores);
        if (best == TaggerModel::kNone) continue;
        double second = -std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < scores.size(); ++l) {
            if (l != best && scores[l] > second) second = scores[l];
        }
        Prediction p;
        p.token_index = static_cast<std::uint32_t>(i);
        p.event_type = model.labels()[best];
        p.margin = scores[best] - second;
        out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<Prediction> predict(const TaggerModel& model, const Sentence& s) {
    return predict(model, SentenceView::of(s));
}

namespace detail {

inline std::string escape_field(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '%': out += "%25"; break;
            case '\t': out += "%09"; break;
            case '\n': out += "%0A"; break;
            case '\r': out += "%0D"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string unescape_field(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '%' && i + 2 < s.size()) {
            int hi = std::stoi(s.substr(i + 1, 2), nullptr, 16);
            out.push_back(static_cast<char>(hi));
            i += 2;
        } else {
            out.push_back(s[i]);
        }
    }
    return out;
}

}  // namespace detail

// Versioned flat file: a config header, the ontology, then one
// (feature, label, weight) triple per line. Weights are written in shortest
// round-trip form so a reloaded model predicts identically.
inline void save_model(const TaggerModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    out << "eventboot-tagger v1\n";
    out << "window " << model.feature_config().window << "\n";
    out << "labels " << model.labels().size() << "\n";
    for (const auto& l : model.labels()) out << detail::escape_field(l) << "\n";

    std::vector<std::pair<std::string, std::uint32_t>> feats;
    for (std::uint32_t f = 0; f < model.feature_names().size(); ++f) {
        feats.emplace_back(model.feature_names()[f], f);
    }
    std::sort(feats.begin(), feats.end());
    std::size_t n = 0;
    for (const auto& [name, f] : feats) {
        for (double x : model.weights()[f]) {
            if (x != 0.0) ++n;
        }
    }
    out << "weights " << n << "\n";
    for (const auto& [name, f] : feats) {
        const auto& row = model.weights()[f];
        for (std::size_t l = 0; l < row.size(); ++l) {
            if (row[l] != 0.0) {
                out << detail::escape_field(name) << '\t' << detail::escape_field(model.labels()[l])
                    << '\t' << format_double(row[l]) << '\n';
            }
        }
    }
}

inline TaggerModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(in, line)) throw DataError(std::string("model file truncated at ") + what);
        return line;
    };
    if (next_line("magic") != "eventboot-tagger v1") {
        throw DataError("not an eventboot tagger model: " + path);
    }
    FeatureConfig cfg;
    {
        std::istringstream is(next_line("window"));
        std::string key;
        if (!(is >> key >> cfg.window) || key != "window") {
            throw DataError("model file: bad window line");
        }
    }
    std::size_t n_labels = 0;
    {
        std::istringstream is(next_line("labels"));
        std::string key;
        if (!(is >> key >> n_labels) || key != "labels" || n_labels < 2) {
            throw DataError("model file: bad labels line");
        }
    }
    std::vector<std::string> labels;
    for (std::size_t l = 0; l < n_labels; ++l) {
        labels.push_back(detail::unescape_field(next_line("label")));
    }
    if (labels[0] != "NONE") throw DataError("model file: first label must be NONE");
    TaggerModel model(cfg, labels);

    std::unordered_map<std::string, std::uint32_t> label_index;
    for (std::uint32_t l = 0; l < labels.size(); ++l) label_index[labels[l]] = l;

    std::size_t n_weights = 0;
    {
        std::istringstream is(next_line("weights"));
        std::string key;
        if (!(is >> key >> n_weights) || key != "weights") {
            throw DataError("model file: bad weights line");
        }
    }
    for (std::size_t k = 0; k < n_weights; ++k) {
        next_line("weight triple");
        auto t1 = line.find('\t');
        auto t2 = line.find('\t', t1 == std::string::npos ? t1 : t1 + 1);
        if (t1 == std::string::npos || t2 == std::string::npos) {
            throw DataError("model file: bad weight triple: " + line);
        }
        std::string feat = detail::unescape_field(line.substr(0, t1));
        std::string label = detail::unescape_field(line.substr(t1 + 1, t2 - t1 - 1));
        double value = 0.0;
        auto sv = line.substr(t2 + 1);
        auto res = std::from_chars(sv.data(), sv.data() + sv.size(), value);
        if (res.ec != std::errc()) throw DataError("model file: bad weight value: " + sv);
        auto lit = label_index.find(label);
        if (lit == label_index.end()) throw DataError("model file: unknown label: " + label);
        std::uint32_t fid = model.intern_feature(feat);
        model.weights()[fid][lit->second] = value;
    }
    return model;
}

}  // namespace eventboot
