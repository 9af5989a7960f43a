#include "moral_debater/json_io.h"

namespace moral_debater {

namespace {

Json spans_to_json(const std::vector<TokenSpan>& spans) {
  Json arr = Json::array();
  for (const auto& s : spans) arr.push_back({s.begin, s.end});
  return arr;
}

std::vector<TokenSpan> spans_from_json(const Json& j) {
  std::vector<TokenSpan> out;
  for (const auto& pair : j) {
    out.push_back({pair.at(0).get<std::uint32_t>(), pair.at(1).get<std::uint32_t>()});
  }
  return out;
}

}  // namespace

void to_json(Json& j, const PipelineConfig& c) {
  j = Json{{"moral_confidence_threshold", c.moral_confidence_threshold},
           {"claim_threshold", c.claim_threshold},
           {"evidence_threshold", c.evidence_threshold},
           {"window_size", c.window_size},
           {"min_len", c.min_len},
           {"max_len", c.max_len},
           {"per_query_limit", c.per_query_limit},
           {"max_themes", c.max_themes},
           {"dedupe_threshold", c.dedupe_threshold},
           {"lexicon_normalization",
            c.lexicon_normalization == LexiconNormalization::kRaw ? "raw" : "per_token"}};
}

void from_json(const Json& j, PipelineConfig& c) {
  if (!j.is_object()) throw ValidationError("pipeline config must be an object");
  for (const auto& [key, value] : j.items()) {
    if (key == "moral_confidence_threshold") c.moral_confidence_threshold = value.get<double>();
    else if (key == "claim_threshold") c.claim_threshold = value.get<double>();
    else if (key == "evidence_threshold") c.evidence_threshold = value.get<double>();
    else if (key == "window_size") c.window_size = value.get<std::uint32_t>();
    else if (key == "min_len") c.min_len = value.get<std::uint32_t>();
    else if (key == "max_len") c.max_len = value.get<std::uint32_t>();
    else if (key == "per_query_limit") c.per_query_limit = value.get<std::uint32_t>();
    else if (key == "max_themes") c.max_themes = value.get<std::uint32_t>();
    else if (key == "dedupe_threshold") c.dedupe_threshold = value.get<double>();
    else if (key == "lexicon_normalization") {
      const auto mode = value.get<std::string>();
      if (mode == "raw") c.lexicon_normalization = LexiconNormalization::kRaw;
      else if (mode == "per_token") c.lexicon_normalization = LexiconNormalization::kPerToken;
      else throw ValidationError("lexicon_normalization must be 'raw' or 'per_token'");
    } else {
      throw ValidationError("unknown config key '" + key + "'");
    }
  }
}

void to_json(Json& j, MoralSet s) { j = s.labels(); }

void from_json(const Json& j, MoralSet& s) {
  s = MoralSet{};
  for (const auto& label : j) {
    auto f = parse_foundation(label.get<std::string>());
    if (!f) throw ValidationError("unknown moral foundation '" + label.get<std::string>() + "'");
    s.insert(*f);
  }
}

void to_json(Json& j, const MoralProfile& p) {
  j = Json::object();
  for (auto f : kAllFoundations) j[std::string(to_string(f))] = p[f];
}

void from_json(const Json& j, MoralProfile& p) {
  if (!j.is_object()) throw ValidationError("moral profile must be an object");
  std::array<double, kFoundationCount> scores{};
  for (auto f : kAllFoundations) {
    const auto key = std::string(to_string(f));
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw ValidationError("moral profile lacks numeric '" + key + "'");
    }
    scores[index_of(f)] = j.at(key).get<double>();
  }
  p = MoralProfile(scores);
}

void to_json(Json& j, const Sentence& s) {
  j = Json{{"id", s.id},
           {"doc_id", s.doc_id},
           {"text", s.text},
           {"tokens", s.tokens},
           {"markers",
            {{"sentiment", spans_to_json(s.markers.sentiment)},
             {"causality", spans_to_json(s.markers.causality)},
             {"evidence_cue", spans_to_json(s.markers.evidence_cue)}}}};
}

void from_json(const Json& j, Sentence& s) {
  s.id = j.at("id").get<SentenceId>();
  s.doc_id = j.at("doc_id").get<std::string>();
  s.text = j.at("text").get<std::string>();
  s.tokens = j.at("tokens").get<std::vector<std::string>>();
  const auto& m = j.at("markers");
  s.markers.sentiment = spans_from_json(m.at("sentiment"));
  s.markers.causality = spans_from_json(m.at("causality"));
  s.markers.evidence_cue = spans_from_json(m.at("evidence_cue"));
}

}  // namespace moral_debater
