#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace moral_debater {

// Error hierarchy shared by every module. Callers that need to distinguish
// failure classes catch the concrete type; everything else catches Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class IngestError : public Error {
 public:
  using Error::Error;
};

class CompositionError : public Error {
 public:
  using Error::Error;
};

enum class MoralFoundation : std::uint8_t {
  kCare = 0,
  kFairness = 1,
  kLoyalty = 2,
  kAuthority = 3,
  kPurity = 4,
};

inline constexpr std::size_t kFoundationCount = 5;

inline constexpr std::array<MoralFoundation, kFoundationCount> kAllFoundations = {
    MoralFoundation::kCare, MoralFoundation::kFairness,
    MoralFoundation::kLoyalty, MoralFoundation::kAuthority,
    MoralFoundation::kPurity};

std::string_view to_string(MoralFoundation f);
// Case-insensitive; nullopt for anything outside the five labels.
std::optional<MoralFoundation> parse_foundation(std::string_view label);

inline constexpr std::size_t index_of(MoralFoundation f) {
  return static_cast<std::size_t>(f);
}

// Value-type set of foundations backed by a 5-bit mask.
class MoralSet {
 public:
  constexpr MoralSet() = default;
  constexpr MoralSet(std::initializer_list<MoralFoundation> fs) {
    for (auto f : fs) insert(f);
  }

  static constexpr MoralSet all() { return MoralSet(0x1f); }
  static constexpr MoralSet from_mask(std::uint8_t mask) {
    return MoralSet(mask & 0x1f);
  }

  constexpr void insert(MoralFoundation f) { bits_ |= bit(f); }
  constexpr void erase(MoralFoundation f) { bits_ &= ~bit(f); }
  constexpr bool contains(MoralFoundation f) const { return bits_ & bit(f); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const {
    std::size_t n = 0;
    for (std::uint8_t b = bits_; b; b &= b - 1) ++n;
    return n;
  }
  constexpr std::uint8_t mask() const { return bits_; }

  constexpr bool is_subset_of(MoralSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr MoralSet operator|(MoralSet o) const { return MoralSet(bits_ | o.bits_); }
  constexpr MoralSet operator&(MoralSet o) const { return MoralSet(bits_ & o.bits_); }
  constexpr MoralSet& operator|=(MoralSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr bool operator==(const MoralSet&) const = default;

  // Members in canonical foundation order.
  std::vector<MoralFoundation> members() const;
  std::vector<std::string> labels() const;

 private:
  constexpr explicit MoralSet(std::uint8_t bits) : bits_(bits) {}
  static constexpr std::uint8_t bit(MoralFoundation f) {
    return static_cast<std::uint8_t>(1u << index_of(f));
  }
  std::uint8_t bits_ = 0;
};

// "care, fairness" style rendering, used in diagnostics and reports.
std::string to_string(MoralSet set);
// Parses a comma-separated label list; throws ValidationError on an unknown label.
MoralSet parse_moral_set(std::string_view csv);

enum class Framing : std::uint8_t { kIndividualizing, kBinding, kUncontrolled };

inline constexpr std::array<Framing, 3> kAllFramings = {
    Framing::kIndividualizing, Framing::kBinding, Framing::kUncontrolled};

std::string_view to_string(Framing f);
std::optional<Framing> parse_framing(std::string_view label);

// nullopt means the moral filter is disabled.
std::optional<MoralSet> framing_to_morals(Framing framing);

enum class Stance : std::uint8_t { kPro, kCon };
std::string_view to_string(Stance s);
std::optional<Stance> parse_stance(std::string_view label);

// Per-foundation confidence in [0,1].
class MoralProfile {
 public:
  MoralProfile() { scores_.fill(0.0); }
  // Throws ValidationError when a score lies outside [0,1] or is NaN.
  explicit MoralProfile(const std::array<double, kFoundationCount>& scores);

  double operator[](MoralFoundation f) const { return scores_[index_of(f)]; }
  void set(MoralFoundation f, double score);
  const std::array<double, kFoundationCount>& scores() const { return scores_; }

  // Foundations strictly above the threshold.
  MoralSet above(double threshold) const;

  bool operator==(const MoralProfile&) const = default;

 private:
  std::array<double, kFoundationCount> scores_;
};

enum class LexiconNormalization : std::uint8_t {
  kPerToken,  // min(1, hits / token count)
  kRaw,       // min(1, hits)
};

struct PipelineConfig {
  double moral_confidence_threshold = 0.5;
  double claim_threshold = 0.8;
  double evidence_threshold = 0.6;
  std::uint32_t window_size = 12;
  std::uint32_t min_len = 6;
  std::uint32_t max_len = 60;
  std::uint32_t per_query_limit = 10000;
  std::uint32_t max_themes = 4;
  double dedupe_threshold = 0.8;
  // Below a 0.5 confidence threshold the per-token mode can only tag
  // sentences that are more than half moral vocabulary, so the generator
  // scores with raw weighted counts.
  LexiconNormalization lexicon_normalization = LexiconNormalization::kRaw;

  // Throws ValidationError describing the first violated constraint.
  void validate() const;

  bool operator==(const PipelineConfig&) const = default;
};

}  // namespace moral_debater
