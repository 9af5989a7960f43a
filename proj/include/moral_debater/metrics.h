#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moral_debater/foundation.h"

namespace moral_debater {

struct Confusion {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  bool operator==(const Confusion&) const = default;
};

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MultiLabelReport {
  std::array<Confusion, kFoundationCount> confusion{};
  std::array<PrecisionRecallF1, kFoundationCount> per_foundation{};
  PrecisionRecallF1 macro;  // unweighted means of the per-foundation values
  std::size_t examples = 0;
};

// Ratios with a zero denominator are reported as 0.
PrecisionRecallF1 prf_from_confusion(const Confusion& c);

// Throws ValidationError on a length mismatch.
MultiLabelReport multilabel_prf(std::span<const MoralSet> gold, std::span<const MoralSet> pred);

// Table-shaped text and CSV renderings of a report, one row per foundation
// plus a macro row.
std::string format_prf_table(const MultiLabelReport& report);
std::string format_prf_csv(const MultiLabelReport& report);

// Chance-corrected agreement of two binary labelings. When chance agreement
// is 1 the result is 1 if the labelings agree everywhere; otherwise throws.
double cohens_kappa(std::span<const bool> a, std::span<const bool> b);
double cohens_kappa(const std::vector<bool>& a, const std::vector<bool>& b);

// Agreement counts: both yes, only a, only b, both no.
double cohens_kappa_counts(std::size_t both_yes, std::size_t a_only, std::size_t b_only,
                           std::size_t both_no);

// Kendall's coefficient of concordance for m raters ranking n items. Each row
// must be a permutation of 1..n; ties are rejected.
double kendalls_w(const std::vector<std::vector<int>>& rankings);

}  // namespace moral_debater
