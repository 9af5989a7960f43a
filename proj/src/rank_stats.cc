#include "moral_debater/rank_stats.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "moral_debater/metrics.h"

namespace moral_debater {

namespace {

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

bool is_permutation3(const std::array<int, 3>& r) {
  std::array<int, 3> s = r;
  std::sort(s.begin(), s.end());
  return s == std::array<int, 3>{1, 2, 3};
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sum_sq_dev(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s;
}

RankStats compute_group(std::span<const RankingRecord* const> records, std::string ideology,
                        std::string relation) {
  RankStats st;
  st.ideology_group = std::move(ideology);
  st.relation_group = std::move(relation);
  st.records = records.size();

  std::array<std::vector<double>, 3> samples;
  for (const auto* r : records) {
    for (auto f : kAllFramings) {
      const auto i = static_cast<std::size_t>(f);
      const int rank = r->rank_of(f);
      ++st.by_framing[i].counts[static_cast<std::size_t>(rank - 1)];
      samples[i].push_back(rank);
    }
  }
  for (auto& d : st.by_framing) {
    d.n = records.size();
    for (std::size_t k = 0; k < 3; ++k) {
      d.shares[k] = static_cast<double>(d.counts[k]) / static_cast<double>(d.n);
    }
    d.mean = mean_rank_from_distribution(d.shares);
  }
  constexpr std::array<std::pair<Framing, Framing>, 3> kPairs = {{
      {Framing::kIndividualizing, Framing::kBinding},
      {Framing::kIndividualizing, Framing::kUncontrolled},
      {Framing::kBinding, Framing::kUncontrolled},
  }};
  for (auto [a, b] : kPairs) {
    if (records.size() < 2) break;
    st.comparisons.push_back({a, b,
                              student_t_test(samples[static_cast<std::size_t>(a)],
                                             samples[static_cast<std::size_t>(b)])});
  }

  // Agreement per topic-stance item, averaged.
  std::map<std::pair<std::string, Stance>, std::vector<std::vector<int>>> items;
  for (const auto* r : records) {
    items[{r->topic, r->stance_presented}].push_back({r->ranks.begin(), r->ranks.end()});
  }
  double w_sum = 0.0;
  std::size_t w_n = 0;
  for (const auto& [key, rows] : items) {
    if (rows.size() < 2) continue;
    w_sum += kendalls_w(rows);
    ++w_n;
  }
  if (w_n > 0) st.kendalls_w = w_sum / static_cast<double>(w_n);
  return st;
}

}  // namespace

std::string_view to_string(Ideology i) {
  switch (i) {
    case Ideology::kLiberal: return "liberal";
    case Ideology::kConservative: return "conservative";
    case Ideology::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<Ideology> parse_ideology(std::string_view label) {
  if (label == "liberal") return Ideology::kLiberal;
  if (label == "conservative") return Ideology::kConservative;
  if (label == "unknown") return Ideology::kUnknown;
  return std::nullopt;
}

std::string_view to_string(Relation r) {
  return r == Relation::kEmpowering ? "empowering" : "challenging";
}

std::optional<Relation> parse_relation(std::string_view label) {
  if (label == "empowering") return Relation::kEmpowering;
  if (label == "challenging") return Relation::kChallenging;
  return std::nullopt;
}

Relation relation_for(int participant_stance, Stance presented) {
  if (participant_stance < 1 || participant_stance > 5) {
    throw ValidationError("participant stance must be 1-5, got " +
                          std::to_string(participant_stance));
  }
  const bool agrees = presented == Stance::kPro ? participant_stance >= 4 : participant_stance <= 2;
  return agrees ? Relation::kEmpowering : Relation::kChallenging;
}

void RankingRecord::validate() const {
  if (!is_permutation3(ranks)) {
    throw ValidationError("ranks of " + participant_id + " on '" + topic +
                          "' are not a permutation of 1,2,3");
  }
  if (relation_for(participant_stance, stance_presented) != relation) {
    throw ValidationError("relation of " + participant_id + " on '" + topic +
                          "' contradicts the stance rule");
  }
}

Json to_json(const RankingRecord& r) {
  Json ranks = Json::object();
  for (auto f : kAllFramings) ranks[std::string(to_string(f))] = r.rank_of(f);
  return Json{{"participant_id", r.participant_id},
              {"ideology", to_string(r.ideology)},
              {"topic", r.topic},
              {"stance_presented", to_string(r.stance_presented)},
              {"participant_stance", r.participant_stance},
              {"relation", to_string(r.relation)},
              {"ranks", ranks}};
}

RankingRecord ranking_record_from_json(const Json& j) {
  RankingRecord r;
  try {
    r.participant_id = j.at("participant_id").get<std::string>();
    auto ideology = parse_ideology(j.at("ideology").get<std::string>());
    if (!ideology) throw ValidationError("unknown ideology in ranking record");
    r.ideology = *ideology;
    r.topic = j.at("topic").get<std::string>();
    auto stance = parse_stance(j.at("stance_presented").get<std::string>());
    if (!stance) throw ValidationError("unknown stance in ranking record");
    r.stance_presented = *stance;
    r.participant_stance = j.at("participant_stance").get<int>();
    r.relation = relation_for(r.participant_stance, r.stance_presented);
    if (j.contains("relation")) {
      auto rel = parse_relation(j.at("relation").get<std::string>());
      if (!rel) throw ValidationError("unknown relation in ranking record");
      r.relation = *rel;
    }
    const auto& ranks = j.at("ranks");
    for (auto f : kAllFramings) {
      r.ranks[static_cast<std::size_t>(f)] = ranks.at(std::string(to_string(f))).get<int>();
    }
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed ranking record: ") + e.what());
  }
  r.validate();
  return r;
}

double mean_rank_from_distribution(const std::array<double, 3>& shares) {
  return 1.0 * shares[0] + 2.0 * shares[1] + 3.0 * shares[2];
}

TTest student_t_test(std::span<const double> a, std::span<const double> b, double confidence) {
  if (a.size() < 2 || b.size() < 2) {
    throw ValidationError("t-test needs at least two observations per sample");
  }
  TTest out;
  const double ma = mean_of(a), mb = mean_of(b);
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  out.mean_difference = ma - mb;
  out.df = na + nb - 2.0;
  const double pooled = (sum_sq_dev(a, ma) + sum_sq_dev(b, mb)) / out.df;
  const double se = std::sqrt(pooled * (1.0 / na + 1.0 / nb));
  if (se == 0.0) {
    out.zero_variance = true;
    out.ci_low = out.ci_high = out.mean_difference;
    if (out.mean_difference == 0.0) out.p_value = 1.0;
    return out;
  }
  boost::math::students_t dist(out.df);
  out.t = out.mean_difference / se;
  out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(out.t)));
  const double q = boost::math::quantile(boost::math::complement(dist, (1.0 - confidence) / 2.0));
  out.ci_low = out.mean_difference - q * se;
  out.ci_high = out.mean_difference + q * se;
  return out;
}

RankStatsResult rank_stats(std::span<const RankingRecord> records, bool by_ideology,
                           bool by_relation) {
  for (const auto& r : records) r.validate();

  std::vector<std::pair<std::string, std::optional<Ideology>>> ideologies = {{"all", std::nullopt}};
  if (by_ideology) {
    for (auto i : {Ideology::kLiberal, Ideology::kConservative, Ideology::kUnknown}) {
      ideologies.emplace_back(std::string(to_string(i)), i);
    }
  }
  std::vector<std::pair<std::string, std::optional<Relation>>> relations = {{"both", std::nullopt}};
  if (by_relation) {
    for (auto r : {Relation::kEmpowering, Relation::kChallenging}) {
      relations.emplace_back(std::string(to_string(r)), r);
    }
  }

  RankStatsResult result;
  for (const auto& [iname, ideology] : ideologies) {
    for (const auto& [rname, relation] : relations) {
      std::vector<const RankingRecord*> group;
      for (const auto& r : records) {
        if (ideology && r.ideology != *ideology) continue;
        if (relation && r.relation != *relation) continue;
        group.push_back(&r);
      }
      if (group.empty()) {
        // Unknown ideology is only worth mentioning when someone reported it.
        if (!(ideology == Ideology::kUnknown)) {
          result.warnings.push_back("group " + iname + "/" + rname + " has no records; omitted");
        }
        continue;
      }
      if (group.size() < 2) {
        result.warnings.push_back("group " + iname + "/" + rname +
                                  " has a single record; no significance tests");
      }
      result.groups.push_back(compute_group(group, iname, rname));
    }
  }
  return result;
}

Json rank_stats_to_json(const RankStatsResult& result) {
  Json groups = Json::array();
  for (const auto& g : result.groups) {
    Json framings = Json::object();
    for (auto f : kAllFramings) {
      const auto& d = g.by_framing[static_cast<std::size_t>(f)];
      framings[std::string(to_string(f))] = {
          {"counts", d.counts}, {"shares", d.shares}, {"mean_rank", d.mean}, {"n", d.n}};
    }
    Json comps = Json::array();
    for (const auto& c : g.comparisons) {
      Json t = {{"first", to_string(c.first)},
                {"second", to_string(c.second)},
                {"mean_difference", c.test.mean_difference},
                {"t", c.test.t},
                {"df", c.test.df},
                {"ci95", {c.test.ci_low, c.test.ci_high}},
                {"zero_variance", c.test.zero_variance}};
      t["p_value"] = c.test.p_value ? Json(*c.test.p_value) : Json(nullptr);
      comps.push_back(std::move(t));
    }
    Json group = {{"ideology", g.ideology_group},
                  {"relation", g.relation_group},
                  {"records", g.records},
                  {"framings", framings},
                  {"comparisons", comps}};
    group["kendalls_w"] = g.kendalls_w ? Json(*g.kendalls_w) : Json(nullptr);
    groups.push_back(std::move(group));
  }
  return Json{{"groups", groups}, {"warnings", result.warnings}};
}

std::string rank_stats_csv(const RankStatsResult& result) {
  std::string out = "ideology,relation,framing,n,rank1,rank2,rank3,mean_rank\n";
  for (const auto& g : result.groups) {
    for (auto f : kAllFramings) {
      const auto& d = g.by_framing[static_cast<std::size_t>(f)];
      out += g.ideology_group + ',' + g.relation_group + ',' + std::string(to_string(f)) + ',' +
             std::to_string(d.n) + ',' + fixed(d.shares[0], 6) + ',' + fixed(d.shares[1], 6) +
             ',' + fixed(d.shares[2], 6) + ',' + fixed(d.mean, 6) + '\n';
    }
  }
  return out;
}

std::string format_rank_table(const RankStatsResult& result) {
  std::string out;
  for (const auto& g : result.groups) {
    out += g.ideology_group + " / " + g.relation_group + " (" + std::to_string(g.records) +
           " records)\n";
    out += "  framing           1st    2nd    3rd    mean\n";
    for (auto f : kAllFramings) {
      const auto& d = g.by_framing[static_cast<std::size_t>(f)];
      std::string name(to_string(f));
      name.resize(16, ' ');
      out += "  " + name + "  " + fixed(d.shares[0] * 100, 0) + "%    " +
             fixed(d.shares[1] * 100, 0) + "%    " + fixed(d.shares[2] * 100, 0) + "%    " +
             fixed(d.mean, 2) + '\n';
    }
    for (const auto& c : g.comparisons) {
      out += "  " + std::string(to_string(c.first)) + " vs " + std::string(to_string(c.second)) +
             ": diff " + fixed(c.test.mean_difference, 2) + ", ";
      if (c.test.p_value) {
        out += "p " + fixed(*c.test.p_value, 4) + ", 95% CI [" + fixed(c.test.ci_low, 2) + ", " +
               fixed(c.test.ci_high, 2) + "]";
        if (*c.test.p_value < 0.05) out += " *";
      } else {
        out += "p undefined (zero variance)";
      }
      out += '\n';
    }
    if (g.kendalls_w) out += "  Kendall's W " + fixed(*g.kendalls_w, 2) + '\n';
  }
  for (const auto& w : result.warnings) out += "warning: " + w + '\n';
  return out;
}

}  // namespace moral_debater
