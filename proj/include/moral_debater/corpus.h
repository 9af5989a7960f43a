#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moral_debater/lexicon.h"

namespace moral_debater {

struct Document {
  std::string id;
  std::string title;
  std::string body;
  std::optional<std::string> topic;
};

using SentenceId = std::uint32_t;

// Half-open token range [begin, end).
struct TokenSpan {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  std::uint32_t size() const { return end - begin; }
  bool operator==(const TokenSpan&) const = default;
};

// Token distance between the nearest boundaries of two spans; 0 if they overlap.
std::uint32_t span_distance(TokenSpan a, TokenSpan b);

// Marker hits keyed by the token span of the matched entry. For single-token
// entries the span has size 1.
struct MarkerAnnotation {
  std::vector<TokenSpan> sentiment;
  std::vector<TokenSpan> causality;
  std::vector<TokenSpan> evidence_cue;

  std::size_t total() const { return sentiment.size() + causality.size() + evidence_cue.size(); }
  bool operator==(const MarkerAnnotation&) const = default;
};

struct Sentence {
  SentenceId id = 0;
  std::string doc_id;
  std::string text;
  std::vector<std::string> tokens;
  MarkerAnnotation markers;

  bool operator==(const Sentence&) const = default;
};

struct MarkerLexicons {
  MarkerLexicon sentiment;
  MarkerLexicon causality;
  MarkerLexicon evidence_cues = default_evidence_cues();
};

// Lowercase maximal runs of letters/digits joined by internal hyphens or
// apostrophes. Non-ASCII letters are kept as-is; Unicode punctuation in the
// U+2000 block separates tokens except the right single quote, which acts as
// an apostrophe.
std::vector<std::string> tokenize(std::string_view text);

// Splits on '.', '!' or '?' followed by whitespace or end of text, unless the
// preceding word is a known abbreviation. Returned pieces are trimmed.
std::vector<std::string> split_sentences(std::string_view body);

// Sentences of the body in order, with ids numbered from 0 and no markers.
// Pieces without any token are dropped.
std::vector<Sentence> segment_and_tokenize(const Document& document);

MarkerAnnotation annotate_markers(std::span<const std::string> tokens,
                                  const MarkerLexicons& lexicons);

// True iff some a in `a` and b in `b` lie strictly closer than `window_size`
// tokens (nearest span boundaries compared).
bool window_cooccurs(std::span<const TokenSpan> a, std::span<const TokenSpan> b,
                     std::uint32_t window_size);
bool window_cooccurs(std::span<const std::uint32_t> positions_a,
                     std::span<const std::uint32_t> positions_b,
                     std::uint32_t window_size);

}  // namespace moral_debater
