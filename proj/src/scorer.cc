#include "moral_debater/scorer.h"

#include <algorithm>

namespace moral_debater {

MoralProfile score_sentence_morals_lexicon(std::span<const std::string> tokens,
                                           const MoralLexicon& lexicon,
                                           LexiconNormalization mode) {
  std::array<double, kFoundationCount> sums{};
  for (const auto& tok : tokens) {
    if (const auto* w = lexicon.find(tok)) {
      for (std::size_t f = 0; f < kFoundationCount; ++f) sums[f] += (*w)[f];
    }
  }
  MoralProfile profile;
  if (tokens.empty()) return profile;
  const double denom =
      mode == LexiconNormalization::kPerToken ? static_cast<double>(tokens.size()) : 1.0;
  for (auto f : kAllFoundations) {
    profile.set(f, std::min(1.0, sums[index_of(f)] / denom));
  }
  return profile;
}

LexiconScorer::LexiconScorer(std::shared_ptr<const MoralLexicon> lexicon,
                             LexiconNormalization mode)
    : lexicon_(std::move(lexicon)), mode_(mode) {
  if (!lexicon_) throw ValidationError("lexicon scorer needs a lexicon");
}

MoralProfile LexiconScorer::score(const Sentence& sentence) const {
  return score_sentence_morals_lexicon(sentence.tokens, *lexicon_, mode_);
}

MoralProfile LexiconScorer::score_text(std::string_view text) const {
  const auto tokens = tokenize(text);
  return score_sentence_morals_lexicon(tokens, *lexicon_, mode_);
}

FallbackScorer::FallbackScorer(std::shared_ptr<const MoralScorer> primary,
                               std::shared_ptr<const MoralScorer> fallback)
    : primary_(std::move(primary)), fallback_(std::move(fallback)) {}

MoralProfile FallbackScorer::score(const Sentence& sentence) const {
  try {
    return primary_->score(sentence);
  } catch (const TransportError&) {
    return fallback_->score(sentence);
  }
}

MoralSet aggregate_text_morals(std::span<const MoralProfile> profiles, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ValidationError("moral threshold must lie in [0,1]");
  }
  MoralSet out;
  for (const auto& p : profiles) out |= p.above(threshold);
  return out;
}

bool filter_by_target_morals(MoralSet sentence_morals, const std::optional<MoralSet>& target) {
  if (!target) return true;
  return !sentence_morals.empty() && sentence_morals.is_subset_of(*target);
}

}  // namespace moral_debater
