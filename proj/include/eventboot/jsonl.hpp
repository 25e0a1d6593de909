#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "eventboot/tokenize.hpp"
#include "eventboot/types.hpp"
#include "eventboot/util.hpp"

namespace eventboot {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;  // writers keep insertion order

inline std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

namespace detail {

inline Json parse_json_line(const std::string& line, std::size_t line_no) {
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded()) {
        throw data_error_at(line_no, "<record>", "not valid JSON");
    }
    if (!j.is_object()) {
        throw data_error_at(line_no, "<record>", "record is not a JSON object");
    }
    return j;
}

inline std::string require_string(const Json& j, const char* field, std::size_t line_no) {
    auto it = j.find(field);
    if (it == j.end()) throw data_error_at(line_no, field, "missing");
    if (!it->is_string()) throw data_error_at(line_no, field, "expected a string");
    return it->get<std::string>();
}

inline std::vector<std::string> string_array(const Json& j, const char* field,
                                             std::size_t line_no) {
    std::vector<std::string> out;
    auto it = j.find(field);
    if (it == j.end()) return out;
    if (!it->is_array()) throw data_error_at(line_no, field, "expected an array");
    for (const auto& v : *it) {
        if (!v.is_string()) throw data_error_at(line_no, field, "expected string elements");
        out.push_back(v.get<std::string>());
    }
    return out;
}

inline std::pair<std::uint32_t, std::uint32_t> token_span(const Json& j, const char* field,
                                                          std::size_t n_tokens,
                                                          std::size_t line_no) {
    auto it = j.find(field);
    if (it == j.end()) throw data_error_at(line_no, field, "missing");
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number_integer() ||
        !(*it)[1].is_number_integer()) {
        throw data_error_at(line_no, field, "expected [begin, end] token indices");
    }
    long long b = (*it)[0].get<long long>();
    long long e = (*it)[1].get<long long>();
    if (b < 0 || e <= b || static_cast<std::size_t>(e) > n_tokens) {
        throw data_error_at(line_no, field, "span out of token range");
    }
    return {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(e)};
}

inline std::vector<EntityMention> parse_entities(const Json& j, std::size_t n_tokens,
                                                 std::size_t line_no) {
    std::vector<EntityMention> out;
    auto it = j.find("entities");
    if (it == j.end()) return out;
    if (!it->is_array()) throw data_error_at(line_no, "entities", "expected an array");
    for (const auto& ej : *it) {
        if (!ej.is_object()) throw data_error_at(line_no, "entities", "expected objects");
        EntityMention m;
        m.surface = require_string(ej, "surface", line_no);
        m.ner_type = require_string(ej, "type", line_no);
        auto [b, e] = token_span(ej, "token_span", n_tokens, line_no);
        m.begin = b;
        m.end = e;
        m.canonical = canonical_key(m.surface);
        out.push_back(std::move(m));
    }
    return out;
}

// Byte offsets for externally supplied tokens: aligned greedily against the
// original text when possible, otherwise synthesized as if the tokens were
// joined by single spaces.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> align_offsets(
        const std::vector<std::string>& tokens, const std::string& text) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> offsets;
    offsets.reserve(tokens.size());
    std::size_t pos = 0;
    bool aligned = true;
    for (const auto& tok : tokens) {
        std::size_t at = text.find(tok, pos);
        if (at == std::string::npos) { aligned = false; break; }
        offsets.emplace_back(at, at + tok.size());
        pos = at + tok.size();
    }
    if (aligned && offsets.size() == tokens.size()) return offsets;
    offsets.clear();
    std::uint32_t cursor = 0;
    for (const auto& tok : tokens) {
        offsets.emplace_back(cursor, cursor + tok.size());
        cursor += static_cast<std::uint32_t>(tok.size()) + 1;
    }
    return offsets;
}

}  // namespace detail

inline Sentence parse_sentence_json(const Json& sj, std::size_t line_no) {
    if (!sj.is_object()) throw data_error_at(line_no, "sentences", "expected objects");
    Sentence s;
    s.tokens = detail::string_array(sj, "tokens", line_no);
    std::string text;
    if (auto it = sj.find("text"); it != sj.end()) {
        if (!it->is_string()) throw data_error_at(line_no, "text", "expected a string");
        text = it->get<std::string>();
    } else if (s.tokens.empty() && sj.find("tokens") == sj.end()) {
        throw data_error_at(line_no, "text", "sentence needs 'text' or 'tokens'");
    }
    if (s.tokens.empty() && sj.find("tokens") == sj.end()) {
        Tokenized t = tokenize(text);
        s.tokens = std::move(t.tokens);
        s.char_offsets = std::move(t.offsets);
    } else {
        s.char_offsets = detail::align_offsets(s.tokens, text);
    }
    s.entities = detail::parse_entities(sj, s.tokens.size(), line_no);
    s.pos = detail::string_array(sj, "pos", line_no);
    s.lemma = detail::string_array(sj, "lemma", line_no);
    if (!s.pos.empty() && s.pos.size() != s.tokens.size()) {
        throw data_error_at(line_no, "pos", "length differs from tokens");
    }
    if (!s.lemma.empty() && s.lemma.size() != s.tokens.size()) {
        throw data_error_at(line_no, "lemma", "length differs from tokens");
    }
    return s;
}

inline Document parse_document_json(const std::string& line, std::size_t line_no) {
    Json j = detail::parse_json_line(line, line_no);
    Document doc;
    doc.doc_id = detail::require_string(j, "doc_id", line_no);
    if (doc.doc_id.empty()) throw data_error_at(line_no, "doc_id", "empty");
    std::string date_str = detail::require_string(j, "date", line_no);
    auto date = Date::parse(date_str);
    if (!date) throw data_error_at(line_no, "date", "not a valid calendar day: " + date_str);
    doc.date = *date;
    if (auto it = j.find("title"); it != j.end() && it->is_string()) {
        doc.title = it->get<std::string>();
    }
    auto sit = j.find("sentences");
    if (sit == j.end() || !sit->is_array()) {
        throw data_error_at(line_no, "sentences", "missing or not an array");
    }
    for (const auto& sj : *sit) doc.sentences.push_back(parse_sentence_json(sj, line_no));
    return doc;
}

inline OJson sentence_to_json(const Sentence& s) {
    OJson sj;
    sj["tokens"] = s.tokens;
    OJson ents = OJson::array();
    for (const auto& m : s.entities) {
        ents.push_back({{"surface", m.surface},
                        {"type", m.ner_type},
                        {"token_span", {m.begin, m.end}}});
    }
    sj["entities"] = std::move(ents);
    if (!s.pos.empty()) sj["pos"] = s.pos;
    if (!s.lemma.empty()) sj["lemma"] = s.lemma;
    return sj;
}

inline OJson document_to_json(const Document& doc) {
    OJson j;
    j["doc_id"] = doc.doc_id;
    j["date"] = doc.date.str();
    j["title"] = doc.title;
    OJson sents = OJson::array();
    for (const auto& s : doc.sentences) sents.push_back(sentence_to_json(s));
    j["sentences"] = std::move(sents);
    return j;
}

inline TriggerExample parse_trigger_example_json(const std::string& line, std::size_t line_no) {
    Json j = detail::parse_json_line(line, line_no);
    TriggerExample ex;
    ex.doc_id = detail::require_string(j, "doc_id", line_no);
    ex.sentence_tokens = detail::string_array(j, "tokens", line_no);
    if (ex.sentence_tokens.empty()) throw data_error_at(line_no, "tokens", "missing or empty");
    ex.entities = detail::parse_entities(j, ex.sentence_tokens.size(), line_no);
    auto [b, e] = detail::token_span(j, "trigger_span", ex.sentence_tokens.size(), line_no);
    ex.trigger_begin = b;
    ex.trigger_end = e;
    ex.event_type = detail::require_string(j, "event_type", line_no);
    if (ex.event_type.empty() || ex.event_type == "NONE") {
        throw data_error_at(line_no, "event_type", "must name a real event type");
    }
    if (auto it = j.find("source"); it != j.end()) {
        std::string s = it->is_string() ? it->get<std::string>() : "";
        if (s == "GOLD") ex.source = Source::Gold;
        else if (s == "BOOTSTRAP") ex.source = Source::Bootstrap;
        else if (s == "PREDICTED") ex.source = Source::Predicted;
        else throw data_error_at(line_no, "source", "expected GOLD, BOOTSTRAP, or PREDICTED");
    }
    if (auto it = j.find("cluster_id"); it != j.end() && it->is_string()) {
        ex.cluster_id = it->get<std::string>();
    }
    if (auto it = j.find("similarity"); it != j.end() && it->is_number()) {
        ex.similarity = it->get<double>();
    }
    ex.pos = detail::string_array(j, "pos", line_no);
    ex.lemma = detail::string_array(j, "lemma", line_no);
    return ex;
}

inline OJson trigger_example_to_json(const TriggerExample& ex) {
    OJson j;
    j["doc_id"] = ex.doc_id;
    j["tokens"] = ex.sentence_tokens;
    OJson ents = OJson::array();
    for (const auto& m : ex.entities) {
        ents.push_back({{"surface", m.surface},
                        {"type", m.ner_type},
                        {"token_span", {m.begin, m.end}}});
    }
    j["entities"] = std::move(ents);
    j["trigger_span"] = {ex.trigger_begin, ex.trigger_end};
    j["event_type"] = ex.event_type;
    j["source"] = source_name(ex.source);
    if (ex.cluster_id) j["cluster_id"] = *ex.cluster_id;
    if (ex.similarity) j["similarity"] = *ex.similarity;
    if (!ex.pos.empty()) j["pos"] = ex.pos;
    if (!ex.lemma.empty()) j["lemma"] = ex.lemma;
    return j;
}

inline std::vector<TriggerExample> read_examples_jsonl(const std::string& path) {
    std::vector<TriggerExample> out;
    auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        out.push_back(parse_trigger_example_json(lines[i], i + 1));
    }
    return out;
}

inline void write_examples_jsonl(const std::string& path,
                                 const std::vector<TriggerExample>& examples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    for (const auto& ex : examples) out << trigger_example_to_json(ex).dump() << '\n';
}

inline void write_documents_jsonl(const std::string& path,
                                  const std::vector<Document>& docs) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    for (const auto& d : docs) out << document_to_json(d).dump() << '\n';
}

}  // namespace eventboot
