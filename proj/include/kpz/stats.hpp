#pragma once

// Small-sample statistics used by the experiment drivers and the tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "kpz/errors.hpp"

namespace kpz {

inline double mean(const std::vector<double>& v) {
  if (v.empty()) throw DomainError("mean: empty sample");
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Unbiased sample variance.
inline double variance(const std::vector<double>& v) {
  if (v.size() < 2) throw DomainError("variance: needs at least 2 points");
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double sample_sd(const std::vector<double>& v) {
  return std::sqrt(variance(v));
}

inline double covariance(const std::vector<double>& a,
                         const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw DomainError("covariance: needs two equal samples of size >= 2");
  const double ma = mean(a), mb = mean(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
  return s / static_cast<double>(a.size() - 1);
}

inline double pearson(const std::vector<double>& a,
                      const std::vector<double>& b) {
  const double va = variance(a), vb = variance(b);
  if (va <= 0.0 || vb <= 0.0)
    throw DomainError("pearson: a sample is constant");
  return covariance(a, b) / std::sqrt(va * vb);
}

struct LinearFit {
  double slope;
  double intercept;
  double slope_se;  // from the residual scatter
  double r2;
};

inline LinearFit linear_fit(const std::vector<double>& x,
                            const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw DomainError("linear_fit: needs two equal samples of size >= 2");
  const double mx = mean(x), my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw DomainError("linear_fit: degenerate abscissae");
  LinearFit f{};
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  const double dof = static_cast<double>(x.size()) - 2.0;
  f.slope_se = dof > 0.0 ? std::sqrt(ss_res / dof / sxx) : 0.0;
  f.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

// Standard error of a proportion, floored away from zero so empty tails keep
// a positive error bar.
inline double binomial_se(double phat, std::size_t n) {
  if (n == 0) throw DomainError("binomial_se: needs n >= 1");
  const double dn = static_cast<double>(n);
  const double v = std::max(phat * (1.0 - phat), 1.0 / dn);
  return std::sqrt(v / dn);
}

inline double sample_quantile(std::vector<double> v, double p) {
  if (v.empty()) throw DomainError("sample_quantile: empty sample");
  if (p < 0.0 || p > 1.0) throw DomainError("sample_quantile: p outside [0, 1]");
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

inline double fisher_z(double r) {
  if (r <= -1.0 || r >= 1.0) throw DomainError("fisher_z: |r| must be < 1");
  return std::atanh(r);
}

inline double fisher_z_se(std::size_t n) {
  if (n < 4) throw DomainError("fisher_z_se: needs n >= 4");
  return 1.0 / std::sqrt(static_cast<double>(n) - 3.0);
}

// Edges of a normal-theory confidence interval for a correlation.
inline double pearson_ci_low(double r, std::size_t n, double zmult) {
  return std::tanh(fisher_z(r) - zmult * fisher_z_se(n));
}

inline double pearson_ci_high(double r, std::size_t n, double zmult) {
  return std::tanh(fisher_z(r) + zmult * fisher_z_se(n));
}

}  // namespace kpz
