#include "moral_debater/foundation.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "moral_debater/text_util.h"

namespace moral_debater {

namespace {

constexpr std::array<std::string_view, kFoundationCount> kFoundationNames = {
    "care", "fairness", "loyalty", "authority", "purity"};

constexpr std::array<std::string_view, 3> kFramingNames = {
    "individualizing", "binding", "uncontrolled"};

}  // namespace

std::string_view to_string(MoralFoundation f) {
  return kFoundationNames[index_of(f)];
}

std::optional<MoralFoundation> parse_foundation(std::string_view label) {
  const std::string lowered = to_lower(trim(label));
  for (auto f : kAllFoundations) {
    if (kFoundationNames[index_of(f)] == lowered) return f;
  }
  return std::nullopt;
}

std::vector<MoralFoundation> MoralSet::members() const {
  std::vector<MoralFoundation> out;
  for (auto f : kAllFoundations) {
    if (contains(f)) out.push_back(f);
  }
  return out;
}

std::vector<std::string> MoralSet::labels() const {
  std::vector<std::string> out;
  for (auto f : members()) out.emplace_back(to_string(f));
  return out;
}

std::string to_string(MoralSet set) {
  std::string out;
  for (auto f : set.members()) {
    if (!out.empty()) out += ", ";
    out += to_string(f);
  }
  return out;
}

MoralSet parse_moral_set(std::string_view csv) {
  MoralSet set;
  for (const auto& part : split(csv, ',')) {
    const auto label = trim(part);
    if (label.empty()) continue;
    auto f = parse_foundation(label);
    if (!f) {
      throw ValidationError("unknown moral foundation '" + std::string(label) + "'");
    }
    set.insert(*f);
  }
  return set;
}

std::string_view to_string(Framing f) {
  return kFramingNames[static_cast<std::size_t>(f)];
}

std::optional<Framing> parse_framing(std::string_view label) {
  const std::string lowered = to_lower(trim(label));
  for (auto f : kAllFramings) {
    if (kFramingNames[static_cast<std::size_t>(f)] == lowered) return f;
  }
  return std::nullopt;
}

std::optional<MoralSet> framing_to_morals(Framing framing) {
  switch (framing) {
    case Framing::kIndividualizing:
      return MoralSet{MoralFoundation::kCare, MoralFoundation::kFairness};
    case Framing::kBinding:
      return MoralSet{MoralFoundation::kLoyalty, MoralFoundation::kAuthority,
                      MoralFoundation::kPurity};
    case Framing::kUncontrolled:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string_view to_string(Stance s) { return s == Stance::kPro ? "pro" : "con"; }

std::optional<Stance> parse_stance(std::string_view label) {
  const std::string lowered = to_lower(trim(label));
  if (lowered == "pro") return Stance::kPro;
  if (lowered == "con") return Stance::kCon;
  return std::nullopt;
}

MoralProfile::MoralProfile(const std::array<double, kFoundationCount>& scores) {
  for (auto f : kAllFoundations) set(f, scores[index_of(f)]);
}

void MoralProfile::set(MoralFoundation f, double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    std::ostringstream msg;
    msg << "score for " << to_string(f) << " out of range [0,1]: " << score;
    throw ValidationError(msg.str());
  }
  scores_[index_of(f)] = score;
}

MoralSet MoralProfile::above(double threshold) const {
  MoralSet out;
  for (auto f : kAllFoundations) {
    if (scores_[index_of(f)] > threshold) out.insert(f);
  }
  return out;
}

void PipelineConfig::validate() const {
  auto unit = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError(std::string(name) + " must lie in [0,1]");
    }
  };
  unit(moral_confidence_threshold, "moral_confidence_threshold");
  unit(claim_threshold, "claim_threshold");
  unit(evidence_threshold, "evidence_threshold");
  unit(dedupe_threshold, "dedupe_threshold");
  if (window_size == 0) throw ValidationError("window_size must be positive");
  if (min_len == 0) throw ValidationError("min_len must be positive");
  if (min_len > max_len) throw ValidationError("min_len must not exceed max_len");
  if (per_query_limit == 0) throw ValidationError("per_query_limit must be positive");
  if (max_themes == 0) throw ValidationError("max_themes must be positive");
}

}  // namespace moral_debater
