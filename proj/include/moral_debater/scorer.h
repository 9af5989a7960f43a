#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "moral_debater/corpus.h"
#include "moral_debater/foundation.h"
#include "moral_debater/lexicon.h"

namespace moral_debater {

class TransportError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Produces a per-foundation confidence profile for a sentence.
// Implementations must be deterministic and safe for concurrent use.
class MoralScorer {
 public:
  virtual ~MoralScorer() = default;
  virtual MoralProfile score(const Sentence& sentence) const = 0;
};

// score(f) = min(1, sum of lexicon weights for f over the tokens), divided by
// the token count before capping in per-token mode. Zero when nothing hits.
MoralProfile score_sentence_morals_lexicon(std::span<const std::string> tokens,
                                           const MoralLexicon& lexicon,
                                           LexiconNormalization mode = LexiconNormalization::kPerToken);

class LexiconScorer final : public MoralScorer {
 public:
  LexiconScorer(std::shared_ptr<const MoralLexicon> lexicon, LexiconNormalization mode);

  MoralProfile score(const Sentence& sentence) const override;
  MoralProfile score_text(std::string_view text) const;

 private:
  std::shared_ptr<const MoralLexicon> lexicon_;
  LexiconNormalization mode_;
};

// Client for a classifier service. POSTs {"text": ...} and expects an
// object with the five foundation scores. Endpoint form:
// http://host[:port][/path].
class ExternalScorer final : public MoralScorer {
 public:
  explicit ExternalScorer(std::string endpoint,
                          std::chrono::milliseconds timeout = std::chrono::seconds(10));

  // Throws TransportError on connection failure, timeout or non-200 status;
  // ProtocolError on a malformed body or out-of-range score.
  MoralProfile score(const Sentence& sentence) const override;
  MoralProfile score_text(std::string_view text) const;

  const std::string& endpoint() const { return endpoint_; }

 private:
  std::string endpoint_;
  std::string base_;
  std::string path_;
  std::chrono::milliseconds timeout_;
};

// Uses `fallback` only when `primary` raises TransportError.
class FallbackScorer final : public MoralScorer {
 public:
  FallbackScorer(std::shared_ptr<const MoralScorer> primary,
                 std::shared_ptr<const MoralScorer> fallback);
  MoralProfile score(const Sentence& sentence) const override;

 private:
  std::shared_ptr<const MoralScorer> primary_;
  std::shared_ptr<const MoralScorer> fallback_;
};

// Union over the profiles of foundations scored strictly above `threshold`.
MoralSet aggregate_text_morals(std::span<const MoralProfile> profiles, double threshold);

// No target keeps everything; otherwise keep iff morals is nonempty and a
// subset of the target.
bool filter_by_target_morals(MoralSet sentence_morals, const std::optional<MoralSet>& target);

}  // namespace moral_debater
