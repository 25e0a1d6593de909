#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eventboot/date.hpp"

namespace eventboot {

struct EntityMention {
    std::string surface;
    std::string canonical;  // derived from surface, see canonical_key()
    std::string ner_type;
    std::uint32_t begin = 0;  // token index, half-open [begin, end)
    std::uint32_t end = 0;
};

struct Sentence {
    std::vector<std::string> tokens;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> char_offsets;
    std::vector<EntityMention> entities;
    // Optional per-token annotations; empty when the input did not carry them.
    std::vector<std::string> pos;
    std::vector<std::string> lemma;
};

struct Document {
    std::string doc_id;
    Date date;
    std::string title;
    std::vector<Sentence> sentences;
};

enum class Source { Gold, Bootstrap, Predicted };

inline const char* source_name(Source s) {
    switch (s) {
        case Source::Gold: return "GOLD";
        case Source::Bootstrap: return "BOOTSTRAP";
        case Source::Predicted: return "PREDICTED";
    }
    return "GOLD";
}

// One labeled trigger: a sentence, a token span, and an event type. This is
// the unit of training data, of harvesting, and of evaluation.
struct TriggerExample {
    std::string doc_id;
    std::vector<std::string> sentence_tokens;
    std::vector<EntityMention> entities;
    std::uint32_t trigger_begin = 0;  // token indices, half-open
    std::uint32_t trigger_end = 0;
    std::string event_type;
    Source source = Source::Gold;
    std::optional<std::string> cluster_id;   // set for bootstrapped examples
    std::optional<double> similarity;        // cosine that selected the trigger
    std::vector<std::string> pos;
    std::vector<std::string> lemma;
};

}  // namespace eventboot
