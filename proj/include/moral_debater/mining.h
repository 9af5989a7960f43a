#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moral_debater/corpus.h"
#include "moral_debater/foundation.h"
#include "moral_debater/lexicon.h"
#include "moral_debater/scorer.h"

namespace moral_debater {

enum class UnitKind : std::uint8_t { kClaim, kEvidence };
std::string_view to_string(UnitKind kind);
std::optional<UnitKind> parse_unit_kind(std::string_view label);

struct ArgumentUnit {
  Sentence sentence;
  UnitKind kind = UnitKind::kEvidence;
  double claim_likelihood = 0.0;
  double evidence_likelihood = 0.0;
  std::optional<TokenSpan> claim_span;
  double stance_score = 0.0;
  MoralSet morals;

  // Stable identifier derived from the sentence id, e.g. "u42".
  std::string id() const;
  // Likelihood of the unit's own kind.
  double likelihood() const {
    return kind == UnitKind::kClaim ? claim_likelihood : evidence_likelihood;
  }
};

// Linear weights over the binary argumentativeness features.
struct FeatureWeights {
  double bias = 0.0;
  double topic = 0.0;
  double causality = 0.0;
  double sentiment = 0.0;
  double evidence_cue = 0.0;
  double length_in_range = 0.0;
  double leading_connective = 0.0;

  bool operator==(const FeatureWeights&) const = default;
};

struct ArgumentWeights {
  FeatureWeights claim;
  FeatureWeights evidence;
  std::uint32_t length_min = 6;
  std::uint32_t length_max = 60;
  PolarityLexicon polarity;
};

// Defaults. Claim: bias -3, topic 1.5, causality 1.5, sentiment 1,
// evidence cue -0.5, length 1, leading connective -0.5. Evidence: bias -3,
// topic 1, causality 0.5, sentiment 0, evidence cue 2.5, length 0.5,
// leading connective 0. The polarity lexicon is empty.
ArgumentWeights default_argument_weights();

// INI text with sections [claim_weights], [evidence_weights], [features]
// (length_min, length_max) and [polarity_lexicon] (token = signed weight).
// Omitted keys keep their defaults.
ArgumentWeights load_argument_weights(std::string_view ini_text);

struct ArgumentFeatures {
  bool topic = false;
  bool causality = false;
  bool sentiment = false;
  bool evidence_cue = false;
  bool length_in_range = false;
  bool leading_connective = false;
};

ArgumentFeatures extract_features(const Sentence& sentence, std::span<const std::string> topic,
                                  const ArgumentWeights& weights);

double logistic(double x);
double likelihood(const FeatureWeights& w, const ArgumentFeatures& f);

bool is_discourse_connective(std::string_view token);
bool is_negation(std::string_view token);

struct Argumentativeness {
  double claim_likelihood = 0.0;
  double evidence_likelihood = 0.0;
  // Present when claim_likelihood >= 0.5: from the first topic or content
  // token to the end of the sentence.
  std::optional<TokenSpan> claim_span;
};

Argumentativeness score_argumentativeness(const Sentence& sentence,
                                          std::span<const std::string> topic,
                                          const ArgumentWeights& weights);

// Sum of signed polarity weights over the tokens divided by the token count,
// clipped to [-1,1]. A negation within the three preceding tokens flips a
// polar word's sign.
double score_stance_tokens(std::span<const std::string> tokens, const PolarityLexicon& polarity);

// Claims are scored on their claim span, evidence on the whole sentence.
double score_stance(const ArgumentUnit& unit, const PolarityLexicon& polarity);

// Moral tagging, target-moral filter, likelihood thresholds (claim wins when
// both qualify) and stance filter, in that order. Retrieval order is kept.
std::vector<ArgumentUnit> select_units(std::span<const Sentence> sentences,
                                       std::span<const std::string> topic, Stance stance,
                                       const std::optional<MoralSet>& target_morals,
                                       const MoralScorer& scorer, const PipelineConfig& config,
                                       const ArgumentWeights& weights);

// Description of the first violated unit invariant, or nullopt.
std::optional<std::string> check_unit(const ArgumentUnit& unit, const PipelineConfig& config);

}  // namespace moral_debater
