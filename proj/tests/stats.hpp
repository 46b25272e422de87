#pragma once

// Small goodness-of-fit helpers shared by the statistical tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace testing_stats {

// Kolmogorov-Smirnov statistic of a sample against a continuous cdf.
inline double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

// Asymptotic 0.1% critical value of the KS statistic.
inline double ks_critical(std::size_t n) { return 1.95 / std::sqrt(static_cast<double>(n)); }

// Upper 0.1% quantile of chi-square(dof), Wilson-Hilferty approximation.
inline double chi_square_critical(double dof) {
  const double z = 3.090232306167813;
  const double a = 2.0 / (9.0 * dof);
  return dof * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

// Pearson statistic comparing observed counts to expected probabilities.
inline double chi_square(const std::vector<double>& observed, const std::vector<double>& probs) {
  double n = 0.0;
  for (double o : observed) n += o;
  double s = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * probs[i];
    if (e > 0.0) s += (observed[i] - e) * (observed[i] - e) / e;
  }
  return s;
}

// Two-sample chi-square homogeneity statistic for a 2 x C contingency table.
inline double chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  double na = 0.0, nb = 0.0;
  for (double v : a) na += v;
  for (double v : b) nb += v;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double col = a[i] + b[i];
    if (col == 0.0) continue;
    const double ea = col * na / (na + nb);
    const double eb = col * nb / (na + nb);
    s += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
  }
  return s;
}

}  // namespace testing_stats

namespace testing_stats {

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

// Asymptotic 0.1% critical value of the two-sample KS statistic.
inline double ks_two_sample_critical(std::size_t n, std::size_t m) {
  return 1.95 * std::sqrt((static_cast<double>(n) + m) / (static_cast<double>(n) * m));
}

}  // namespace testing_stats
