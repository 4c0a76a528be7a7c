#pragma once

// Small statistical helpers shared by the test suites. These stay
// independent of the library's estimation paths on purpose: they are the
// yardsticks the library is measured against.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace testsupport {

inline double mean(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double variance(const std::vector<double>& xs) {
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// Rejection threshold for the two-sample KS test; c(0.01) = 1.628.
inline double ks_threshold_alpha01(std::size_t n, std::size_t m) {
  return 1.628 * std::sqrt(static_cast<double>(n + m) /
                           (static_cast<double>(n) * static_cast<double>(m)));
}

// Pearson chi-square statistic against uniform expected counts.
inline double chi_square_uniform(const std::vector<long long>& counts) {
  long long total = std::accumulate(counts.begin(), counts.end(), 0LL);
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (long long c : counts) {
    const double d = static_cast<double>(c) - expected;
    stat += d * d / expected;
  }
  return stat;
}

// 0.99 quantiles of the chi-square distribution by degrees of freedom.
inline double chi_square_crit_alpha01(int df) {
  switch (df) {
    case 1: return 6.635;
    case 3: return 11.345;
    case 5: return 15.086;
    case 19: return 36.191;
  }
  return 0.0;
}

// Composite Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int panels) {
  if (panels % 2 == 1) ++panels;
  const double h = (hi - lo) / panels;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) acc += f(lo + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace testsupport
