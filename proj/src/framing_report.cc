#include "moral_debater/framing_report.h"

#include <cstdio>
#include <numeric>

namespace moral_debater {

FoundationShares moral_mass(std::span<const MoralArgument> arguments, const MoralScorer& scorer) {
  FoundationShares mass{};
  for (const auto& arg : arguments) {
    for (const auto& theme : arg.themes) {
      for (const auto& unit : theme.units) {
        const auto profile = scorer.score(unit.sentence);
        for (std::size_t i = 0; i < kFoundationCount; ++i) mass[i] += profile.scores()[i];
      }
    }
  }
  return mass;
}

std::map<std::string, FoundationShares> framing_moral_distribution(
    std::span<const MoralArgument> arguments, const MoralScorer& scorer) {
  std::map<std::string, FoundationShares> rows;
  for (const auto& arg : arguments) {
    const std::string key = arg.framing ? std::string(to_string(*arg.framing)) : "custom";
    auto& row = rows[key];
    const auto mass = moral_mass(std::span(&arg, 1), scorer);
    for (std::size_t i = 0; i < kFoundationCount; ++i) row[i] += mass[i];
  }
  for (auto& [key, row] : rows) {
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    if (total <= 0.0) continue;
    for (auto& v : row) v = 100.0 * v / total;
  }
  return rows;
}

std::string format_distribution_table(const std::map<std::string, FoundationShares>& rows) {
  std::string out = "framing            care  fairness  loyalty  authority  purity\n";
  for (const auto& [key, row] : rows) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-16s %5.0f%% %8.0f%% %7.0f%% %9.0f%% %6.0f%%\n", key.c_str(),
                  row[0], row[1], row[2], row[3], row[4]);
    out += buf;
  }
  return out;
}

}  // namespace moral_debater
