#include "kpz/refdist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "kpz/errors.hpp"

namespace kpz {
namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

constexpr long double kSqrtPi = 1.772453850905516027298167483341145183L;
constexpr long double kPi = 3.141592653589793238462643383279502884L;

struct AiryPair {
  double ai;
  double aip;
};

// Maclaurin series in long double.  Both cancellation regimes (x near +7,
// x near -8) keep the intermediate terms below ~1e7 times the result, so the
// 64-bit mantissa leaves ~1e-12 absolute accuracy.
AiryPair airy_series(double xd) {
  const long double x = xd;
  const long double x2 = x * x;
  const long double x3 = x2 * x;
  long double tf = 1.0L;
  long double tg = x;
  long double f = tf, g = tg, fp = 0.0L, gp = 1.0L;
  for (int k = 0; k < 260; ++k) {
    const long double a = 3.0L * k;
    fp += tf * x2 / (a + 2.0L);
    gp += tg * x2 / (a + 3.0L);
    tf *= x3 / ((a + 2.0L) * (a + 3.0L));
    tg *= x3 / ((a + 3.0L) * (a + 4.0L));
    f += tf;
    g += tg;
    if (fabsl(tf) + fabsl(tg) < 1e-25L * (fabsl(f) + fabsl(g) + 1.0L)) break;
  }
  const long double c1 = 0.355028053887817239260063186004183176L;  // Ai(0)
  const long double c2 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
  return {static_cast<double>(c1 * f - c2 * g),
          static_cast<double>(c1 * fp - c2 * gp)};
}

// Large positive argument: exponentially damped expansion.  The term ratio
// passes through a minimum well below 1e-20 for x >= 7, so truncating at the
// smallest term is more than enough.
AiryPair airy_asym_pos(double xd) {
  const long double x = xd;
  const long double zeta = (2.0L / 3.0L) * x * sqrtl(x);
  long double t = 1.0L;
  long double su = 1.0L, sv = 1.0L;
  long double sign = -1.0L;
  for (int k = 0; k < 40; ++k) {
    const long double tn =
        t * (6.0L * k + 1.0L) * (6.0L * k + 5.0L) / (72.0L * (k + 1) * zeta);
    if (fabsl(tn) >= fabsl(t)) break;
    const long double vn = tn * (6.0L * (k + 1) + 1.0L) / (1.0L - 6.0L * (k + 1));
    su += sign * tn;
    sv += sign * vn;
    t = tn;
    sign = -sign;
    if (fabsl(tn) < 1e-24L) break;
  }
  const long double root4 = powl(x, 0.25L);
  const long double pref = expl(-zeta) / (2.0L * kSqrtPi);
  return {static_cast<double>(pref * su / root4),
          static_cast<double>(-pref * sv * root4)};
}

// Large negative argument: oscillatory expansion, summed with the term signs
// grouped by parity.
AiryPair airy_asym_neg(double xd) {
  const long double z = -static_cast<long double>(xd);
  const long double zeta = (2.0L / 3.0L) * z * sqrtl(z);
  long double t = 1.0L;
  long double pc = 0.0L, qs = 0.0L, rc = 0.0L, ss = 0.0L;
  for (int k = 0; k < 40; ++k) {
    const long double vt =
        (k == 0) ? 1.0L : t * (6.0L * k + 1.0L) / (1.0L - 6.0L * k);
    const long double sgn = ((k / 2) % 2 == 0) ? 1.0L : -1.0L;
    if (k % 2 == 0) {
      pc += sgn * t;
      rc += sgn * vt;
    } else {
      qs += sgn * t;
      ss += sgn * vt;
    }
    const long double tn =
        t * (6.0L * k + 1.0L) * (6.0L * k + 5.0L) / (72.0L * (k + 1) * zeta);
    if (fabsl(tn) >= fabsl(t) || fabsl(tn) < 1e-24L) break;
    t = tn;
  }
  const long double ang = zeta - kPi / 4.0L;
  const long double c = cosl(ang), s = sinl(ang);
  const long double root4 = powl(z, 0.25L);
  return {static_cast<double>((c * pc + s * qs) / (kSqrtPi * root4)),
          static_cast<double>((s * rc - c * ss) * root4 / kSqrtPi)};
}

AiryPair airy_core(double x) {
  if (x >= 7.0) return airy_asym_pos(x);
  if (x <= -8.2) return airy_asym_neg(x);
  return airy_series(x);
}

// Gauss-Legendre rule on (0, 1), Newton iteration on the recurrence.
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double t = cosl(kPi * (i + 0.75L) / (n + 0.5L));
    long double p0 = 0.0L, p1 = 0.0L, dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0L;
      p1 = t;
      for (int j = 2; j <= n; ++j) {
        const long double p2 = ((2.0L * j - 1.0L) * t * p1 - (j - 1.0L) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0L);
      const long double dt = p1 / dp;
      t -= dt;
      if (fabsl(dt) < 1e-19L) break;
    }
    p0 = 1.0L;
    p1 = t;
    for (int j = 2; j <= n; ++j) {
      const long double p2 = ((2.0L * j - 1.0L) * t * p1 - (j - 1.0L) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (t * p1 - p0) / (t * t - 1.0L);
    const long double wi = 1.0L / ((1.0L - t * t) * dp * dp);
    const std::size_t lo = static_cast<std::size_t>(i);
    const std::size_t hi = static_cast<std::size_t>(n - 1 - i);
    x[lo] = static_cast<double>(0.5L - 0.5L * t);
    x[hi] = static_cast<double>(0.5L + 0.5L * t);
    w[lo] = static_cast<double>(wi);
    w[hi] = static_cast<double>(wi);
  }
}

// det(I - diag(sw) K diag(sw)) by Gaussian elimination with partial pivots.
double det_i_minus_k(std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(m[r][c]) > std::fabs(m[piv][c])) piv = r;
    if (m[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      if (f == 0.0) continue;
      for (std::size_t k = c + 1; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

enum class KernelKind { AiryTwoPoint, AiryScalar };

// Nystrom value of det(I - K) on L^2(s, inf), nodes mapped through
// x = s + u/(1-u) so the Jacobian 1/(1-u)^2 folds into the weights.
double fredholm_det(double s, int n, KernelKind kind) {
  std::vector<double> u, w;
  gauss_legendre_01(n, u, w);
  const std::size_t sn = static_cast<std::size_t>(n);
  std::vector<double> xs(sn), sw(sn), ai(sn), aip(sn);
  for (std::size_t i = 0; i < sn; ++i) {
    xs[i] = s + u[i] / (1.0 - u[i]);
    sw[i] = std::sqrt(w[i]) / (1.0 - u[i]);
    if (kind == KernelKind::AiryTwoPoint) {
      const AiryPair p = airy_core(xs[i]);
      ai[i] = p.ai;
      aip[i] = p.aip;
    }
  }
  std::vector<std::vector<double>> m(sn, std::vector<double>(sn));
  for (std::size_t i = 0; i < sn; ++i) {
    for (std::size_t j = i; j < sn; ++j) {
      double k;
      if (kind == KernelKind::AiryTwoPoint) {
        k = (i == j) ? aip[i] * aip[i] - xs[i] * ai[i] * ai[i]
                     : (ai[i] * aip[j] - aip[i] * ai[j]) / (xs[i] - xs[j]);
      } else {
        k = 0.5 * airy_core(0.5 * (xs[i] + xs[j])).ai;
      }
      const double e = sw[i] * sw[j] * k;
      m[i][j] = (i == j ? 1.0 : 0.0) - e;
      m[j][i] = m[i][j];
    }
  }
  return det_i_minus_k(m);
}

double tw_cdf_doubled(double s, int nodes, KernelKind kind, const char* op) {
  const double d1 = fredholm_det(s, nodes, kind);
  const double d2 = fredholm_det(s, 2 * nodes, kind);
  if (std::fabs(d2 - d1) > 1e-6) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%s: value moved by %.3e when doubling %d quadrature nodes",
                  op, std::fabs(d2 - d1), nodes);
    throw AccuracyError(buf);
  }
  return std::min(1.0, std::max(0.0, d2));
}

}  // namespace

double airy_ai(double x) {
  require(x >= -15.0 && x <= 30.0, "airy_ai: input outside [-15, 30]");
  return airy_core(x).ai;
}

double airy_ai_deriv(double x) {
  require(x >= -15.0 && x <= 30.0, "airy_ai_deriv: input outside [-15, 30]");
  return airy_core(x).aip;
}

double tw_gue_cdf(double s, int nodes) {
  require(s >= -10.0 && s <= 6.0, "tw_gue_cdf: input outside [-10, 6]");
  require(nodes >= 20, "tw_gue_cdf: needs at least 20 nodes");
  return tw_cdf_doubled(s, nodes, KernelKind::AiryTwoPoint, "tw_gue_cdf");
}

double tw_goe_cdf(double s, int nodes) {
  require(s >= -10.0 && s <= 6.0, "tw_goe_cdf: input outside [-10, 6]");
  require(nodes >= 20, "tw_goe_cdf: needs at least 20 nodes");
  return tw_cdf_doubled(s, nodes, KernelKind::AiryScalar, "tw_goe_cdf");
}

TwMoments tw_gue_moments(int nodes) {
  require(nodes >= 20, "tw_gue_moments: needs at least 20 nodes");
  // Simpson rule for int F ds and int s F ds on [-10, 6]; the moments follow
  // by parts.  Mass outside the window is below 1e-9.
  const double a = -10.0, b = 6.0;
  const int cells = 800;
  const double h = (b - a) / cells;
  double int_f = 0.0, int_sf = 0.0, fa = 0.0, fb = 0.0;
  for (int i = 0; i <= cells; ++i) {
    const double s = a + h * i;
    const double f = fredholm_det(s, nodes, KernelKind::AiryTwoPoint);
    const double c = (i == 0 || i == cells) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    int_f += c * f;
    int_sf += c * s * f;
    if (i == 0) fa = f;
    if (i == cells) fb = f;
  }
  int_f *= h / 3.0;
  int_sf *= h / 3.0;
  const double mean = b * fb - a * fa - int_f;
  const double ex2 = b * b * fb - a * a * fa - 2.0 * int_sf;
  return {mean, std::sqrt(std::max(0.0, ex2 - mean * mean))};
}

double gaussian_cdf(double x, double mean, double sd) {
  require(sd > 0.0, "gaussian_cdf: needs sd > 0");
  return 0.5 * std::erfc(-(x - mean) / (sd * 1.4142135623730951));
}

RefDist RefDist::gue() { return RefDist(Kind::Gue); }

RefDist RefDist::gaussian(double mean, double sd) {
  require(sd > 0.0, "RefDist::gaussian: needs sd > 0");
  RefDist r(Kind::Gaussian);
  r.m1_ = mean;
  r.s1_ = sd;
  return r;
}

RefDist RefDist::max_two_gaussians(double mean1, double sd1, double mean2,
                                   double sd2) {
  require(sd1 > 0.0 && sd2 > 0.0, "RefDist::max_two_gaussians: needs sd > 0");
  RefDist r(Kind::MaxTwoGaussians);
  r.m1_ = mean1;
  r.s1_ = sd1;
  r.m2_ = mean2;
  r.s2_ = sd2;
  return r;
}

RefDist RefDist::goe_squared(const std::string& table_path) {
  std::ifstream in(table_path);
  if (!in)
    throw ConfigError("RefDist::goe_squared: cannot open " + table_path);
  RefDist r(Kind::GoeSquared);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double s, f;
    if (!(row >> s >> f))
      throw ConfigError("RefDist::goe_squared: bad row in " + table_path);
    if (!r.xs_.empty() && s <= r.xs_.back())
      throw ConfigError("RefDist::goe_squared: abscissae not increasing in " +
                        table_path);
    r.xs_.push_back(s);
    r.ys_.push_back(std::min(1.0, std::max(0.0, f)));
  }
  if (r.xs_.size() < 2)
    throw ConfigError("RefDist::goe_squared: table too short: " + table_path);
  return r;
}

RefDist RefDist::empirical(std::vector<double> sample) {
  if (sample.empty())
    throw DomainError("RefDist::empirical: needs a nonempty sample");
  RefDist r(Kind::Empirical);
  std::sort(sample.begin(), sample.end());
  r.xs_ = std::move(sample);
  return r;
}

double RefDist::cdf(double x) const {
  switch (kind_) {
    case Kind::Gue:
      if (x < -10.0) return 0.0;
      if (x > 6.0) return 1.0;
      return tw_gue_cdf(x, 40);
    case Kind::Gaussian:
      return gaussian_cdf(x, m1_, s1_);
    case Kind::MaxTwoGaussians:
      return gaussian_cdf(x, m1_, s1_) * gaussian_cdf(x, m2_, s2_);
    case Kind::GoeSquared: {
      double t;
      if (x <= xs_.front()) {
        t = ys_.front();
      } else if (x >= xs_.back()) {
        t = ys_.back();
      } else {
        const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const std::size_t j = static_cast<std::size_t>(it - xs_.begin());
        const double frac = (x - xs_[j - 1]) / (xs_[j] - xs_[j - 1]);
        t = ys_[j - 1] + frac * (ys_[j] - ys_[j - 1]);
      }
      return t * t;
    }
    case Kind::Empirical: {
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      return static_cast<double>(it - xs_.begin()) /
             static_cast<double>(xs_.size());
    }
  }
  return 0.0;
}

double RefDist::quantile(double p) const {
  require(p > 0.0 && p < 1.0, "RefDist::quantile: needs p in (0, 1)");
  if (kind_ == Kind::Empirical) {
    const auto idx = static_cast<std::size_t>(p * static_cast<double>(xs_.size()));
    return xs_[std::min(idx, xs_.size() - 1)];
  }
  double lo = -1e8, hi = 1e8;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < p)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1.0 + std::fabs(hi))) break;
  }
  return 0.5 * (lo + hi);
}

std::string RefDist::name() const {
  switch (kind_) {
    case Kind::Gue: return "tw-gue";
    case Kind::Gaussian: return "gaussian";
    case Kind::MaxTwoGaussians: return "max-two-gaussians";
    case Kind::GoeSquared: return "goe-squared";
    case Kind::Empirical: return "empirical";
  }
  return "unknown";
}

double ks_statistic(std::vector<double> sample, const RefDist& ref) {
  if (sample.empty())
    throw DomainError("ks_statistic: needs a nonempty sample");
  std::sort(sample.begin(), sample.end());
  const double na = static_cast<double>(sample.size());
  if (!ref.is_empirical()) {
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
      const double f = ref.cdf(sample[i]);
      d = std::max(d, f - static_cast<double>(i) / na);
      d = std::max(d, static_cast<double>(i + 1) / na - f);
    }
    return d;
  }
  const std::vector<double>& b = ref.sample();
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sample.size() || j < b.size()) {
    const double v = (j >= b.size() || (i < sample.size() && sample[i] <= b[j]))
                         ? sample[i]
                         : b[j];
    while (i < sample.size() && sample[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na -
                              static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace kpz
