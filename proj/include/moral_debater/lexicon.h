#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "moral_debater/foundation.h"

namespace moral_debater {

// Word -> per-foundation weight. A zero weight means the word does not
// belong to that foundation.
class MoralLexicon {
 public:
  using Weights = std::array<double, kFoundationCount>;

  // Keeps the larger weight when (word, foundation) is already present.
  void add(std::string_view word, MoralFoundation f, double weight);

  const Weights* find(std::string_view word) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, Weights, std::less<>>& entries() const { return entries_; }

  // CSV with a header row, one row per (word, foundation) pair.
  std::string to_csv() const;

  bool operator==(const MoralLexicon&) const = default;

 private:
  std::map<std::string, Weights, std::less<>> entries_;
};

// Rows `word,foundation[,weight]`; optional header; '#' starts a comment
// line. Weight defaults to 1.0 and must lie in (0,1].
MoralLexicon load_moral_lexicon(std::string_view source);

class AspectMoralMap {
 public:
  void add(std::string_view aspect, MoralSet morals);
  // Case-insensitive lookup; empty set when unmapped.
  MoralSet lookup(std::string_view aspect) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, MoralSet, std::less<>>& entries() const { return entries_; }

  std::string to_tsv() const;

  bool operator==(const AspectMoralMap&) const = default;

 private:
  std::map<std::string, MoralSet, std::less<>> entries_;
};

// Rows `aspect<TAB>foundation[,foundation...]`; rows for the same aspect
// are unioned.
AspectMoralMap load_aspect_map(std::string_view source);

// Set of lowercase tokens and multi-token phrases.
class MarkerLexicon {
 public:
  MarkerLexicon() = default;
  MarkerLexicon(std::initializer_list<std::string_view> entries);

  void add(std::string_view phrase);
  // Length in tokens of the longest entry that starts at `pos`, or 0.
  std::size_t match_at(std::span<const std::string> tokens, std::size_t pos) const;
  bool contains(std::string_view token) const;
  std::size_t size() const { return size_; }

 private:
  std::unordered_map<std::string, std::vector<std::vector<std::string>>> by_first_;
  std::size_t size_ = 0;
};

// One entry per line, '#' comments and blank lines ignored.
MarkerLexicon load_marker_lexicon(std::string_view source);

// The six evidence cue tokens used when no cue list is supplied.
MarkerLexicon default_evidence_cues();

// Token -> signed weight in [-1,1], used by the stance scorer.
using PolarityLexicon = std::map<std::string, double, std::less<>>;

}  // namespace moral_debater
