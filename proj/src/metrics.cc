#include "moral_debater/metrics.h"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace moral_debater {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double v, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

PrecisionRecallF1 prf_from_confusion(const Confusion& c) {
  PrecisionRecallF1 out;
  out.precision = ratio(c.tp, c.tp + c.fp);
  out.recall = ratio(c.tp, c.tp + c.fn);
  const double sum = out.precision + out.recall;
  out.f1 = sum == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / sum;
  return out;
}

MultiLabelReport multilabel_prf(std::span<const MoralSet> gold, std::span<const MoralSet> pred) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold and predicted label lists differ in length (" +
                          std::to_string(gold.size()) + " vs " + std::to_string(pred.size()) + ")");
  }
  MultiLabelReport report;
  report.examples = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    for (auto f : kAllFoundations) {
      auto& c = report.confusion[index_of(f)];
      const bool g = gold[i].contains(f);
      const bool p = pred[i].contains(f);
      if (g && p) ++c.tp;
      else if (!g && p) ++c.fp;
      else if (g && !p) ++c.fn;
      else ++c.tn;
    }
  }
  for (auto f : kAllFoundations) {
    const auto prf = prf_from_confusion(report.confusion[index_of(f)]);
    report.per_foundation[index_of(f)] = prf;
    report.macro.precision += prf.precision;
    report.macro.recall += prf.recall;
    report.macro.f1 += prf.f1;
  }
  report.macro.precision /= kFoundationCount;
  report.macro.recall /= kFoundationCount;
  report.macro.f1 /= kFoundationCount;
  return report;
}

std::string format_prf_table(const MultiLabelReport& report) {
  std::string out = "foundation   Pre    Rec    F1\n";
  auto row = [&](std::string name, const PrecisionRecallF1& v) {
    name.resize(12, ' ');
    out += name + ' ' + fixed(v.precision) + "   " + fixed(v.recall) + "   " + fixed(v.f1) + '\n';
  };
  for (auto f : kAllFoundations) row(std::string(to_string(f)), report.per_foundation[index_of(f)]);
  row("macro", report.macro);
  return out;
}

std::string format_prf_csv(const MultiLabelReport& report) {
  std::string out = "foundation,precision,recall,f1,tp,fp,fn,tn\n";
  for (auto f : kAllFoundations) {
    const auto& v = report.per_foundation[index_of(f)];
    const auto& c = report.confusion[index_of(f)];
    out += std::string(to_string(f)) + ',' + fixed(v.precision, 6) + ',' + fixed(v.recall, 6) +
           ',' + fixed(v.f1, 6) + ',' + std::to_string(c.tp) + ',' + std::to_string(c.fp) + ',' +
           std::to_string(c.fn) + ',' + std::to_string(c.tn) + '\n';
  }
  out += "macro," + fixed(report.macro.precision, 6) + ',' + fixed(report.macro.recall, 6) + ',' +
         fixed(report.macro.f1, 6) + ",,,,\n";
  return out;
}

double cohens_kappa_counts(std::size_t both_yes, std::size_t a_only, std::size_t b_only,
                           std::size_t both_no) {
  const std::uint64_t n = both_yes + a_only + b_only + both_no;
  if (n == 0) throw ValidationError("kappa needs at least one labeled item");
  // Kept in integers: kappa = (agree*n - M) / (n^2 - M) with M the sum of
  // marginal products, so exact inputs give correctly rounded results.
  const std::uint64_t agree = both_yes + both_no;
  const std::uint64_t a_yes = both_yes + a_only, b_yes = both_yes + b_only;
  const std::uint64_t m = a_yes * b_yes + (n - a_yes) * (n - b_yes);
  const std::uint64_t n2 = n * n;
  if (m == n2) {
    if (agree == n) return 1.0;
    throw ValidationError("kappa undefined: chance agreement is 1 but labelers disagree");
  }
  const double num = static_cast<double>(static_cast<std::int64_t>(agree * n) -
                                         static_cast<std::int64_t>(m));
  return num / static_cast<double>(n2 - m);
}

namespace {

template <typename Seq>
double kappa_of(const Seq& a, const Seq& b) {
  if (a.size() != b.size()) throw ValidationError("kappa inputs differ in length");
  std::size_t yy = 0, yn = 0, ny = 0, nn = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] && b[i]) ++yy;
    else if (a[i]) ++yn;
    else if (b[i]) ++ny;
    else ++nn;
  }
  return cohens_kappa_counts(yy, yn, ny, nn);
}

}  // namespace

double cohens_kappa(std::span<const bool> a, std::span<const bool> b) { return kappa_of(a, b); }

double cohens_kappa(const std::vector<bool>& a, const std::vector<bool>& b) { return kappa_of(a, b); }

double kendalls_w(const std::vector<std::vector<int>>& rankings) {
  if (rankings.empty()) throw ValidationError("Kendall's W needs at least one ranking");
  const std::size_t n = rankings.front().size();
  if (n < 2) throw ValidationError("Kendall's W needs at least two items");
  std::vector<double> sums(n, 0.0);
  for (const auto& row : rankings) {
    if (row.size() != n) throw ValidationError("rankings have unequal lengths");
    std::vector<int> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i) {
      if (sorted[i] != static_cast<int>(i + 1)) {
        throw ValidationError("ranking row is not a permutation of 1..n (ties are not supported)");
      }
    }
    for (std::size_t i = 0; i < n; ++i) sums[i] += row[i];
  }
  const double m = static_cast<double>(rankings.size());
  const double nn = static_cast<double>(n);
  const double mean = std::accumulate(sums.begin(), sums.end(), 0.0) / nn;
  double s = 0.0;
  for (double r : sums) s += (r - mean) * (r - mean);
  return 12.0 * s / (m * m * (nn * nn * nn - nn));
}

}  // namespace moral_debater
