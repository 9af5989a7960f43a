#include "moral_debater/retrieval.h"

#include <algorithm>
#include <unordered_set>

namespace moral_debater {

namespace {

std::size_t count_near(const std::vector<TokenSpan>& hits, const std::vector<TokenSpan>& topic,
                       std::uint32_t window) {
  std::size_t n = 0;
  for (const auto& h : hits) {
    const TokenSpan one[] = {h};
    if (window_cooccurs(one, topic, window)) ++n;
  }
  return n;
}

// Intersection of the topic tokens' posting lists.
std::vector<SentenceId> candidates(const SentenceIndex& index, const std::vector<std::string>& topic) {
  std::vector<SentenceId> result;
  bool first = true;
  for (const auto& tok : topic) {
    const auto list = index.postings(tok);
    if (first) {
      result.assign(list.begin(), list.end());
      first = false;
    } else {
      std::vector<SentenceId> next;
      std::set_intersection(result.begin(), result.end(), list.begin(), list.end(),
                            std::back_inserter(next));
      result = std::move(next);
    }
    if (result.empty()) break;
  }
  return result;
}

}  // namespace

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::kTopicOnly: return "topic_only";
    case QueryKind::kTopicCausality: return "topic_causality";
    case QueryKind::kTopicCausalitySentiment: return "topic_causality_sentiment";
    case QueryKind::kEvidenceCue: return "evidence_cue";
  }
  return "unknown";
}

std::vector<QuerySpec> build_topic_queries(std::string_view topic, const PipelineConfig& config) {
  auto tokens = tokenize(topic);
  if (tokens.empty()) throw ValidationError("topic has no tokens");
  std::vector<QuerySpec> out;
  for (auto kind : kAllQueryKinds) {
    out.push_back(QuerySpec{kind, tokens, config.window_size, config.min_len, config.max_len,
                            config.per_query_limit});
  }
  return out;
}

std::vector<TokenSpan> topic_occurrences(const Sentence& sentence,
                                         const std::vector<std::string>& topic) {
  std::vector<TokenSpan> spans;
  for (const auto& t : topic) {
    bool found = false;
    for (std::uint32_t i = 0; i < sentence.tokens.size(); ++i) {
      if (sentence.tokens[i] == t) {
        found = true;
        spans.push_back({i, i + 1});
      }
    }
    if (!found) return {};
  }
  std::sort(spans.begin(), spans.end(),
            [](const TokenSpan& a, const TokenSpan& b) { return a.begin < b.begin; });
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
  return spans;
}

std::optional<std::size_t> match_query(const Sentence& sentence, const QuerySpec& query) {
  const auto n = sentence.tokens.size();
  if (n < query.min_len || n > query.max_len) return std::nullopt;
  const auto topic = topic_occurrences(sentence, query.topic);
  if (topic.empty()) return std::nullopt;
  const auto& m = sentence.markers;
  switch (query.kind) {
    case QueryKind::kTopicOnly:
      return m.total();
    case QueryKind::kTopicCausality: {
      const auto c = count_near(m.causality, topic, query.window_size);
      if (c == 0) return std::nullopt;
      return c;
    }
    case QueryKind::kTopicCausalitySentiment: {
      const auto c = count_near(m.causality, topic, query.window_size);
      const auto s = count_near(m.sentiment, topic, query.window_size);
      if (c == 0 || s == 0) return std::nullopt;
      return c + s;
    }
    case QueryKind::kEvidenceCue:
      if (m.evidence_cue.empty()) return std::nullopt;
      return m.evidence_cue.size();
  }
  return std::nullopt;
}

std::vector<Sentence> retrieve(const SentenceIndex& index, const QuerySpec& query) {
  if (query.topic.empty()) throw ValidationError("query topic is empty");
  struct Hit {
    std::size_t score;
    SentenceId id;
  };
  std::vector<Hit> hits;
  for (auto id : candidates(index, query.topic)) {
    if (auto score = match_query(index.sentence(id), query)) hits.push_back({*score, id});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  if (hits.size() > query.limit) hits.resize(query.limit);
  std::vector<Sentence> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(index.sentence(h.id));
  return out;
}

std::vector<Sentence> retrieve_union(const SentenceIndex& index,
                                     const std::vector<QuerySpec>& queries) {
  std::vector<Sentence> out;
  std::unordered_set<SentenceId> seen;
  for (const auto& q : queries) {
    for (auto& s : retrieve(index, q)) {
      if (seen.insert(s.id).second) out.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace moral_debater
