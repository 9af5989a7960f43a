#include "moral_debater/mining.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "moral_debater/text_util.h"

namespace moral_debater {

namespace {

constexpr std::array<std::string_view, 30> kConnectives = {
    "however", "but",      "and",         "also",      "moreover",  "furthermore",
    "therefore", "thus",   "so",          "yet",       "although",  "though",
    "while",   "additionally", "meanwhile", "nevertheless", "nonetheless", "still",
    "instead", "indeed",   "besides",     "consequently", "hence",  "then",
    "accordingly", "likewise", "similarly", "otherwise", "finally", "overall"};

constexpr std::array<std::string_view, 8> kNegations = {
    "not", "no", "never", "cannot", "nor", "neither", "without", "none"};

template <std::size_t N>
bool in_list(const std::array<std::string_view, N>& list, std::string_view token) {
  return std::find(list.begin(), list.end(), token) != list.end();
}

void read_feature_weights(const boost::property_tree::ptree& section, FeatureWeights& w) {
  for (const auto& [key, node] : section) {
    const double v = node.get_value<double>();
    if (key == "bias") w.bias = v;
    else if (key == "topic") w.topic = v;
    else if (key == "causality") w.causality = v;
    else if (key == "sentiment") w.sentiment = v;
    else if (key == "evidence_cue") w.evidence_cue = v;
    else if (key == "length_in_range") w.length_in_range = v;
    else if (key == "leading_connective") w.leading_connective = v;
    else throw ValidationError("unknown feature weight '" + key + "'");
  }
}

}  // namespace

std::string_view to_string(UnitKind kind) {
  return kind == UnitKind::kClaim ? "claim" : "evidence";
}

std::optional<UnitKind> parse_unit_kind(std::string_view label) {
  if (label == "claim") return UnitKind::kClaim;
  if (label == "evidence") return UnitKind::kEvidence;
  return std::nullopt;
}

std::string ArgumentUnit::id() const { return "u" + std::to_string(sentence.id); }

ArgumentWeights default_argument_weights() {
  ArgumentWeights w;
  w.claim = {-3.0, 1.5, 1.5, 1.0, -0.5, 1.0, -0.5};
  w.evidence = {-3.0, 1.0, 0.5, 0.0, 2.5, 0.5, 0.0};
  return w;
}

ArgumentWeights load_argument_weights(std::string_view ini_text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(ini_text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(e.message(), e.line());
  }
  auto weights = default_argument_weights();
  try {
    for (const auto& [section, node] : tree) {
      if (section == "claim_weights") {
        read_feature_weights(node, weights.claim);
      } else if (section == "evidence_weights") {
        read_feature_weights(node, weights.evidence);
      } else if (section == "features") {
        for (const auto& [key, value] : node) {
          if (key == "length_min") weights.length_min = value.get_value<std::uint32_t>();
          else if (key == "length_max") weights.length_max = value.get_value<std::uint32_t>();
          else throw ValidationError("unknown feature setting '" + key + "'");
        }
      } else if (section == "polarity_lexicon") {
        for (const auto& [key, value] : node) {
          const double v = value.get_value<double>();
          if (!(v >= -1.0 && v <= 1.0)) {
            throw ValidationError("polarity weight for '" + key + "' outside [-1,1]");
          }
          weights.polarity[to_lower(key)] = v;
        }
      } else {
        throw ValidationError("unknown section [" + section + "] in weights file");
      }
    }
  } catch (const pt::ptree_bad_data& e) {
    throw ValidationError(std::string("bad number in weights file: ") + e.what());
  }
  if (weights.length_min > weights.length_max) {
    throw ValidationError("length_min exceeds length_max");
  }
  return weights;
}

bool is_discourse_connective(std::string_view token) { return in_list(kConnectives, token); }

bool is_negation(std::string_view token) {
  if (in_list(kNegations, token)) return true;
  return token.size() > 3 && token.substr(token.size() - 3) == "n't";
}

ArgumentFeatures extract_features(const Sentence& sentence, std::span<const std::string> topic,
                                  const ArgumentWeights& weights) {
  ArgumentFeatures f;
  const auto& toks = sentence.tokens;
  f.topic = !topic.empty() && std::all_of(topic.begin(), topic.end(), [&](const std::string& t) {
    return std::find(toks.begin(), toks.end(), t) != toks.end();
  });
  f.causality = !sentence.markers.causality.empty();
  f.sentiment = !sentence.markers.sentiment.empty();
  f.evidence_cue = !sentence.markers.evidence_cue.empty();
  f.length_in_range = toks.size() >= weights.length_min && toks.size() <= weights.length_max;
  f.leading_connective = !toks.empty() && is_discourse_connective(toks.front());
  return f;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double likelihood(const FeatureWeights& w, const ArgumentFeatures& f) {
  double z = w.bias;
  if (f.topic) z += w.topic;
  if (f.causality) z += w.causality;
  if (f.sentiment) z += w.sentiment;
  if (f.evidence_cue) z += w.evidence_cue;
  if (f.length_in_range) z += w.length_in_range;
  if (f.leading_connective) z += w.leading_connective;
  return logistic(z);
}

Argumentativeness score_argumentativeness(const Sentence& sentence,
                                          std::span<const std::string> topic,
                                          const ArgumentWeights& weights) {
  const auto features = extract_features(sentence, topic, weights);
  Argumentativeness out;
  out.claim_likelihood = likelihood(weights.claim, features);
  out.evidence_likelihood = likelihood(weights.evidence, features);
  if (out.claim_likelihood >= 0.5 && !sentence.tokens.empty()) {
    const auto& toks = sentence.tokens;
    std::uint32_t start = 0;
    while (start < toks.size()) {
      const auto& t = toks[start];
      const bool is_topic = std::find(topic.begin(), topic.end(), t) != topic.end();
      if (is_topic || !(is_discourse_connective(t) || is_stopword(t))) break;
      ++start;
    }
    if (start == toks.size()) start = 0;
    out.claim_span = TokenSpan{start, static_cast<std::uint32_t>(toks.size())};
  }
  return out;
}

double score_stance_tokens(std::span<const std::string> tokens, const PolarityLexicon& polarity) {
  if (tokens.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = polarity.find(tokens[i]);
    if (it == polarity.end()) continue;
    double w = it->second;
    const std::size_t from = i >= 3 ? i - 3 : 0;
    for (std::size_t j = from; j < i; ++j) {
      if (is_negation(tokens[j])) {
        w = -w;
        break;
      }
    }
    sum += w;
  }
  return std::clamp(sum / static_cast<double>(tokens.size()), -1.0, 1.0);
}

double score_stance(const ArgumentUnit& unit, const PolarityLexicon& polarity) {
  std::span<const std::string> tokens = unit.sentence.tokens;
  if (unit.kind == UnitKind::kClaim && unit.claim_span) {
    tokens = tokens.subspan(unit.claim_span->begin, unit.claim_span->size());
  }
  return score_stance_tokens(tokens, polarity);
}

std::vector<ArgumentUnit> select_units(std::span<const Sentence> sentences,
                                       std::span<const std::string> topic, Stance stance,
                                       const std::optional<MoralSet>& target_morals,
                                       const MoralScorer& scorer, const PipelineConfig& config,
                                       const ArgumentWeights& weights) {
  std::vector<ArgumentUnit> out;
  for (const auto& s : sentences) {
    const MoralProfile profile = scorer.score(s);
    const MoralSet morals =
        aggregate_text_morals(std::span(&profile, 1), config.moral_confidence_threshold);
    if (!filter_by_target_morals(morals, target_morals)) continue;

    const auto arg = score_argumentativeness(s, topic, weights);
    ArgumentUnit unit;
    if (arg.claim_likelihood > config.claim_threshold) {
      unit.kind = UnitKind::kClaim;
    } else if (arg.evidence_likelihood > config.evidence_threshold) {
      unit.kind = UnitKind::kEvidence;
    } else {
      continue;
    }
    unit.sentence = s;
    unit.claim_likelihood = arg.claim_likelihood;
    unit.evidence_likelihood = arg.evidence_likelihood;
    unit.claim_span = arg.claim_span;
    unit.morals = morals;
    unit.stance_score = score_stance(unit, weights.polarity);

    const bool keep = stance == Stance::kPro ? unit.stance_score > 0.0 : unit.stance_score < 0.0;
    if (keep) out.push_back(std::move(unit));
  }
  return out;
}

std::optional<std::string> check_unit(const ArgumentUnit& unit, const PipelineConfig& config) {
  const auto n = unit.sentence.tokens.size();
  if (unit.kind == UnitKind::kClaim) {
    if (!(unit.claim_likelihood > config.claim_threshold)) {
      return unit.id() + ": claim likelihood not above claim threshold";
    }
    if (!unit.claim_span) return unit.id() + ": claim without span";
  } else if (!(unit.evidence_likelihood > config.evidence_threshold)) {
    return unit.id() + ": evidence likelihood not above evidence threshold";
  }
  if (unit.claim_span &&
      (unit.claim_span->begin >= unit.claim_span->end || unit.claim_span->end > n)) {
    return unit.id() + ": claim span outside sentence";
  }
  if (!(unit.stance_score >= -1.0 && unit.stance_score <= 1.0)) {
    return unit.id() + ": stance score outside [-1,1]";
  }
  return std::nullopt;
}

}  // namespace moral_debater
