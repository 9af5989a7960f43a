#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "moral_debater/foundation.h"
#include "moral_debater/json_io.h"

namespace moral_debater {

enum class Ideology : std::uint8_t { kLiberal, kConservative, kUnknown };
std::string_view to_string(Ideology i);
std::optional<Ideology> parse_ideology(std::string_view label);

enum class Relation : std::uint8_t { kEmpowering, kChallenging };
std::string_view to_string(Relation r);
std::optional<Relation> parse_relation(std::string_view label);

// Empowering iff the participant's 1-5 stance agrees with the presented one
// (4-5 for pro, 1-2 for con). Undecided (3) counts as challenging.
Relation relation_for(int participant_stance, Stance presented);

struct RankingRecord {
  std::string participant_id;
  Ideology ideology = Ideology::kUnknown;
  std::string topic;
  Stance stance_presented = Stance::kPro;
  int participant_stance = 3;
  Relation relation = Relation::kChallenging;
  std::array<int, 3> ranks{1, 2, 3};  // indexed by Framing

  int rank_of(Framing f) const { return ranks[static_cast<std::size_t>(f)]; }
  // Throws ValidationError when ranks are not a permutation of {1,2,3}, the
  // stance is outside 1-5, or the relation disagrees with the stance rule.
  void validate() const;
};

Json to_json(const RankingRecord& r);
RankingRecord ranking_record_from_json(const Json& j);

// 1*p1 + 2*p2 + 3*p3.
double mean_rank_from_distribution(const std::array<double, 3>& shares);

struct RankDistribution {
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> shares{};
  double mean = 0.0;
  std::size_t n = 0;
};

struct TTest {
  double mean_difference = 0.0;  // mean(a) - mean(b)
  double t = 0.0;
  double df = 0.0;
  std::optional<double> p_value;  // two-sided; nullopt when undefined
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool zero_variance = false;
};

// Two-sample Student t-test with pooled variance. Identical constant
// samples give difference 0, p = 1 and zero_variance set; constant samples
// with different means leave p undefined.
TTest student_t_test(std::span<const double> a, std::span<const double> b,
                     double confidence = 0.95);

struct PairwiseComparison {
  Framing first;
  Framing second;
  TTest test;
};

struct RankStats {
  std::string ideology_group;  // liberal | conservative | unknown | all
  std::string relation_group;  // empowering | challenging | both
  std::size_t records = 0;
  std::array<RankDistribution, 3> by_framing{};  // indexed by Framing
  std::vector<PairwiseComparison> comparisons;   // all three framing pairs
  // Mean Kendall's W over topic-stance items rated by at least two
  // participants; nullopt when no such item exists.
  std::optional<double> kendalls_w;
};

struct RankStatsResult {
  std::vector<RankStats> groups;
  std::vector<std::string> warnings;  // e.g. empty groups that were omitted
};

// Always includes the all/both group; splitting adds the per-ideology and/or
// per-relation groups (and their crossings).
RankStatsResult rank_stats(std::span<const RankingRecord> records, bool by_ideology,
                           bool by_relation);

Json rank_stats_to_json(const RankStatsResult& result);
std::string rank_stats_csv(const RankStatsResult& result);
std::string format_rank_table(const RankStatsResult& result);

}  // namespace moral_debater
