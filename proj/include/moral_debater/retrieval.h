#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "moral_debater/index.h"

namespace moral_debater {

enum class QueryKind : std::uint8_t {
  kTopicOnly,
  kTopicCausality,
  kTopicCausalitySentiment,
  kEvidenceCue,
};

inline constexpr std::array<QueryKind, 4> kAllQueryKinds = {
    QueryKind::kTopicOnly, QueryKind::kTopicCausality, QueryKind::kTopicCausalitySentiment,
    QueryKind::kEvidenceCue};

std::string_view to_string(QueryKind kind);

struct QuerySpec {
  QueryKind kind = QueryKind::kTopicOnly;
  std::vector<std::string> topic;
  std::uint32_t window_size = 12;
  std::uint32_t min_len = 6;
  std::uint32_t max_len = 60;
  std::uint32_t limit = 10000;
};

// The four queries for a topic, in the order topic-only, topic+causality,
// topic+causality+sentiment, evidence-cue. Topic words are used as typed,
// without expansion. Throws ValidationError if the topic has no tokens.
std::vector<QuerySpec> build_topic_queries(std::string_view topic, const PipelineConfig& config);

// Every position of any topic token, as single-token spans. Empty unless all
// topic tokens occur in the sentence.
std::vector<TokenSpan> topic_occurrences(const Sentence& sentence,
                                         const std::vector<std::string>& topic);

// Number of marker hits the query counts toward ranking, or nullopt when the
// sentence does not satisfy the query (length bounds included).
std::optional<std::size_t> match_query(const Sentence& sentence, const QuerySpec& query);

// Matching sentences ordered by descending matched-marker count, then
// ascending id, truncated to `limit` after all constraints are applied.
std::vector<Sentence> retrieve(const SentenceIndex& index, const QuerySpec& query);

// Union of several result lists in query order, first occurrence wins.
std::vector<Sentence> retrieve_union(const SentenceIndex& index,
                                     const std::vector<QuerySpec>& queries);

}  // namespace moral_debater
