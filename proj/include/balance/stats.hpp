#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace balance {

enum class StdKind { Population, Sample };

struct SurrogateSummary {
  double empirical = 0.0;
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std = std::numeric_limits<double>::quiet_NaN();
  std::size_t n_valid = 0;
  std::optional<double> z;
  bool degenerate = true;
};

/// z = (empirical - mean) / std over the defined samples. Degenerate (no z) when fewer than two
/// samples are defined or all defined samples are equal.
inline SurrogateSummary zscore(double empirical, std::span<const std::optional<double>> samples,
                               StdKind kind = StdKind::Population) {
  SurrogateSummary s;
  s.empirical = empirical;
  std::vector<double> valid;
  valid.reserve(samples.size());
  for (const auto& x : samples)
    if (x && std::isfinite(*x)) valid.push_back(*x);
  s.n_valid = valid.size();
  if (valid.empty()) return s;

  double sum = 0.0;
  for (double x : valid) sum += x;
  s.mean = sum / static_cast<double>(valid.size());
  double ss = 0.0;
  for (double x : valid) ss += (x - s.mean) * (x - s.mean);
  const auto [lo, hi] = std::minmax_element(valid.begin(), valid.end());
  const bool constant = *lo == *hi;
  if (constant) {
    s.mean = *lo;
    s.std = 0.0;
  } else if (kind == StdKind::Sample) {
    s.std = valid.size() > 1 ? std::sqrt(ss / static_cast<double>(valid.size() - 1)) : 0.0;
  } else {
    s.std = std::sqrt(ss / static_cast<double>(valid.size()));
  }

  s.degenerate = valid.size() < 2 || constant || !(s.std > 0.0);
  if (!s.degenerate) s.z = (empirical - s.mean) / s.std;
  return s;
}

inline SurrogateSummary zscore(double empirical, std::span<const double> samples, StdKind kind = StdKind::Population) {
  std::vector<std::optional<double>> wrapped(samples.begin(), samples.end());
  return zscore(empirical, wrapped, kind);
}

enum class Significance { SignificantHigh, SignificantLow, NotSignificant };

/// |z| > 2 benchmark, strict on both sides.
constexpr Significance significance(double z) {
  if (z > 2.0) return Significance::SignificantHigh;
  if (z < -2.0) return Significance::SignificantLow;
  return Significance::NotSignificant;
}

}  // namespace balance
