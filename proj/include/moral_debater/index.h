#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "moral_debater/corpus.h"
#include "moral_debater/foundation.h"

namespace moral_debater {

// Reads the JSON-lines corpus format: one object per line with `id`, `text`,
// and optional `title` and `topic`. Blank lines are skipped.
std::vector<Document> read_corpus_jsonl(std::istream& in);

struct IndexStats {
  std::uint64_t sentence_count = 0;
  std::uint64_t token_count = 0;
  std::uint64_t document_count = 0;
  std::uint64_t excluded_by_length = 0;

  bool operator==(const IndexStats&) const = default;
};

// Immutable once built. Sentence ids are dense: sentence(i).id == i.
class SentenceIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  SentenceIndex() = default;

  const std::vector<Sentence>& sentences() const { return sentences_; }
  const Sentence& sentence(SentenceId id) const { return sentences_.at(id); }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }

  // Sorted ids of the sentences containing `token`; empty if none.
  std::span<const SentenceId> postings(std::string_view token) const;
  const std::map<std::string, std::vector<SentenceId>, std::less<>>& all_postings() const {
    return postings_;
  }

  const IndexStats& stats() const { return stats_; }
  const PipelineConfig& config() const { return config_; }

  // Directory layout: manifest.json, sentences.jsonl, postings.bin.
  void save(const std::filesystem::path& dir) const;
  static SentenceIndex load(const std::filesystem::path& dir);

  bool operator==(const SentenceIndex&) const = default;

 private:
  friend class IndexBuilder;

  std::vector<Sentence> sentences_;
  std::map<std::string, std::vector<SentenceId>, std::less<>> postings_;
  IndexStats stats_;
  PipelineConfig config_;
};

// Single-writer incremental construction.
class IndexBuilder {
 public:
  IndexBuilder(PipelineConfig config, MarkerLexicons lexicons);

  // Throws IngestError on a duplicate or empty document id.
  void add(const Document& document);
  SentenceIndex finish() &&;

 private:
  SentenceIndex index_;
  MarkerLexicons lexicons_;
  std::vector<std::string> seen_ids_;  // kept sorted
};

SentenceIndex build_index(std::span<const Document> documents, const PipelineConfig& config,
                          const MarkerLexicons& lexicons);

// Little-endian base-128 varints used by postings.bin.
void put_varint(std::string& out, std::uint64_t value);
// Advances `pos`; throws Error on truncated input.
std::uint64_t get_varint(std::string_view in, std::size_t& pos);

}  // namespace moral_debater
