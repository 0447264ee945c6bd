#pragma once

// Reference distributions for the statistical acceptance layer: the Airy
// function, Tracy-Widom CDFs through Fredholm determinants of integral
// kernels, Gaussian combinations, and Kolmogorov-Smirnov distances.

#include <string>
#include <vector>

namespace kpz {

// Airy function and derivative, |err| <= ~1e-11 on [-15, 30]: Maclaurin
// series in long double in the middle, asymptotic expansions outside.
double airy_ai(double x);
double airy_ai_deriv(double x);

// GUE Tracy-Widom CDF: Nystrom discretization of det(I - K_Ai) on (s, inf)
// with an n-node Gauss-Legendre rule mapped through x = s + u/(1-u).  The
// value is computed at n and 2n nodes; disagreement beyond 1e-6 raises an
// accuracy error, otherwise the 2n value is returned.
double tw_gue_cdf(double s, int nodes = 40);

// GOE Tracy-Widom CDF via the scalar kernel Ai((x+y)/2)/2; same scheme.
double tw_goe_cdf(double s, int nodes = 48);

struct TwMoments {
  double mean;
  double sd;
};

// Mean and standard deviation of the GUE Tracy-Widom law by integrating the
// CDF on a fine grid.
TwMoments tw_gue_moments(int nodes = 40);

double gaussian_cdf(double x, double mean = 0.0, double sd = 1.0);

// Closed family of reference laws the experiments compare against.
class RefDist {
 public:
  static RefDist gue();
  static RefDist gaussian(double mean, double sd);
  static RefDist max_two_gaussians(double mean1, double sd1, double mean2,
                                   double sd2);
  // Table of (s, GOE CDF) rows; the reference is the square of the table.
  static RefDist goe_squared(const std::string& table_path);
  static RefDist empirical(std::vector<double> sample);

  double cdf(double x) const;
  double quantile(double p) const;
  bool is_empirical() const { return kind_ == Kind::Empirical; }
  const std::vector<double>& sample() const { return xs_; }
  std::string name() const;

 private:
  enum class Kind { Gue, Gaussian, MaxTwoGaussians, GoeSquared, Empirical };
  RefDist(Kind kind) : kind_(kind) {}

  Kind kind_;
  double m1_ = 0.0, s1_ = 1.0, m2_ = 0.0, s2_ = 1.0;
  std::vector<double> xs_;  // table abscissae or sorted sample
  std::vector<double> ys_;  // table ordinates
};

// Sup distance between the sample's empirical CDF and the reference; an
// empirical reference gives the two-sample statistic.
double ks_statistic(std::vector<double> sample, const RefDist& ref);

}  // namespace kpz
