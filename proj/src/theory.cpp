#include "kpz/theory.hpp"

#include <cmath>
#include <limits>

#include "kpz/errors.hpp"

namespace kpz {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// Relative tie detector for the pin thresholds.  Generic parameters never
// land within 1e-9 of a threshold; deliberately tuned ones computed in
// double arithmetic always do.
bool near(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return false;
  double ref = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= 1e-9 * ref;
}

}  // namespace

double corner_limit_shape(double v) {
  double a = std::fabs(v);
  return a < 1.0 ? 0.5 * (v * v + 1.0) : a;
}

double tasep_characteristic_speed(double rho) { return 1.0 - 2.0 * rho; }

double pp_shape(double u1, double u2) {
  require(u1 >= 0.0 && u2 >= 0.0, "pp_shape: negative direction component");
  double r = std::sqrt(u1) + std::sqrt(u2);
  return r * r;
}

double pp_scale(double u1, double u2) {
  require(u1 > 0.0 && u2 > 0.0, "pp_scale: direction components must be positive");
  return std::pow(std::sqrt(u1) + std::sqrt(u2), 4.0 / 3.0) /
         std::pow(u1 * u2, 1.0 / 6.0);
}

CharacteristicInfo classify_two_sided(double pi, double eta, double kappa) {
  require(std::isfinite(pi) && pi > 0.0, "classify: pi must be positive");
  require(std::isfinite(eta) && eta > 0.0, "classify: eta must be positive");
  require(std::isfinite(kappa) && kappa > 0.0, "classify: kappa must be positive");

  // A rate >= 1 side is no heavier than the bulk and can never pin.
  double kcol = eta >= 1.0 ? kInf : eta / (1.0 - eta);
  double krow = pi >= 1.0 ? 0.0 : (1.0 - pi) / pi;
  double kshock = std::isfinite(kcol) ? std::sqrt(kcol * krow) : kInf;

  CharacteristicInfo info;
  info.p = {1.0, kappa * kappa};
  info.gamma_step = 1.0 / 3.0;
  info.kappa = kappa;
  info.kappa_column = kcol;
  info.kappa_row = krow;
  info.kappa_shock = kshock;

  bool at_col = near(kappa, kcol);
  bool at_row = near(kappa, krow);
  // pi + eta >= 1 is exactly when krow <= kcol, so the bulk window exists.
  bool fan = pi + eta >= 1.0;

  GrowthRegime regime;
  if (fan) {
    if (at_col || at_row || (kappa <= kcol && kappa >= krow)) {
      regime = GrowthRegime::Bulk;
    } else {
      regime = kappa > kcol ? GrowthRegime::ColumnPinned : GrowthRegime::RowPinned;
    }
  } else {
    if (near(kappa, kshock)) {
      regime = GrowthRegime::ShockPoint;
    } else {
      regime = kappa > kshock ? GrowthRegime::ColumnPinned : GrowthRegime::RowPinned;
    }
  }

  switch (regime) {
    case GrowthRegime::Bulk: {
      info.regime = GrowthRegime::Bulk;
      info.law = at_col && at_row  ? LimitLaw::BaikRains
                 : at_col || at_row ? LimitLaw::GOESquared
                                    : LimitLaw::TracyWidomGUE;
      info.ell = pp_shape(1.0, kappa * kappa);
      info.gamma = 1.0 / 3.0;
      info.scale = pp_scale(1.0, kappa * kappa);
      info.scale_is_empirical = false;
      info.u = info.p;
      info.slow_decorrelation = true;
      break;
    }
    case GrowthRegime::ColumnPinned: {
      info.regime = GrowthRegime::ColumnPinned;
      info.law = LimitLaw::Gaussian;
      info.ell = kappa * kappa / eta + 1.0 / (1.0 - eta);
      info.gamma = 0.5;
      info.scale = kNan;
      info.scale_is_empirical = true;
      info.u = {1.0, kcol * kcol};
      info.slow_decorrelation = true;
      break;
    }
    case GrowthRegime::RowPinned: {
      info.regime = GrowthRegime::RowPinned;
      info.law = LimitLaw::Gaussian;
      info.ell = 1.0 / pi + kappa * kappa / (1.0 - pi);
      info.gamma = 0.5;
      info.scale = kNan;
      info.scale_is_empirical = true;
      info.u = {1.0, krow * krow};
      info.slow_decorrelation = true;
      break;
    }
    case GrowthRegime::ShockPoint: {
      info.regime = GrowthRegime::ShockPoint;
      info.law = LimitLaw::MaxTwoGaussians;
      // Common value of the two pinned rates at the tie.
      info.ell = 1.0 / (pi * (1.0 - eta));
      info.gamma = 0.5;
      info.scale = kNan;
      info.scale_is_empirical = true;
      info.u = {kNan, kNan};
      info.slow_decorrelation = false;
      break;
    }
  }

  if (std::isfinite(info.u.x)) {
    info.ell_step = pp_shape(info.u.x, info.u.y);
    info.scale_step = pp_scale(info.u.x, info.u.y);
  } else {
    info.ell_step = kNan;
    info.scale_step = kNan;
  }
  info.nu_max = info.gamma / info.gamma_step;
  return info;
}

CharacteristicInfo classify_bulk(double kappa) {
  return classify_two_sided(1.0, 1.0, kappa);
}

double boundary_shape(double pi, double eta, double x, double y) {
  require(std::isfinite(pi) && pi > 0.0, "boundary_shape: pi must be positive");
  require(std::isfinite(eta) && eta > 0.0, "boundary_shape: eta must be positive");
  require(x > 0.0 && y > 0.0, "boundary_shape: interior directions only");
  // The pinned closed forms are tangent lines to the concave bulk shape, so
  // each one only bounds the true constant where its pin is active: the
  // column form needs sqrt(y/x) >= eta/(1-eta), the row form needs
  // sqrt(y/x) <= (1-pi)/pi.  Outside those wedges the optimal boundary
  // stretch is empty and the strategy's value falls back to the bulk value,
  // not to the closed form.
  double best = pp_shape(x, y);
  if (eta < 1.0 && y * (1.0 - eta) * (1.0 - eta) >= x * eta * eta)
    best = std::max(best, y / eta + x / (1.0 - eta));
  if (pi < 1.0 && y * pi * pi <= x * (1.0 - pi) * (1.0 - pi))
    best = std::max(best, x / pi + y / (1.0 - pi));
  return best;
}

FrameTriple scaling_frame(double t, double nu, double tau, double theta, double s) {
  require(t > 0.0, "scaling_frame: t must be positive");
  require(nu >= 0.0 && nu < 1.0, "scaling_frame: nu must lie in [0, 1)");
  double shifted = t + theta * std::pow(t, nu);
  double off = tau * std::pow(2.0, -2.0 / 3.0) * std::pow(t, 2.0 / 3.0);
  FrameTriple f;
  f.x = static_cast<long long>(std::floor(0.25 * shifted + off));
  f.y = static_cast<long long>(std::floor(0.25 * shifted - off));
  f.ell = shifted + (s - tau * tau) * std::pow(2.0, 2.0 / 3.0) * std::cbrt(t);
  return f;
}

double theta_fixed_row(double t, double nu, double tau) {
  return tau * std::pow(2.0, 4.0 / 3.0) * std::pow(t, 2.0 / 3.0 - nu);
}

double theta_level_set(double t, double nu, double tau, double s) {
  return -(s - tau * tau) * std::pow(2.0, 2.0 / 3.0) * std::pow(t, 1.0 / 3.0 - nu);
}

double theta_time_offset(double t, double nu, double tau, double s,
                         double theta_tilde) {
  return theta_tilde + theta_level_set(t, nu, tau, s);
}

double frame_tau(double x, double y, double t) {
  require(t > 0.0, "frame_tau: t must be positive");
  return (x - y) / (std::cbrt(2.0) * std::pow(t, 2.0 / 3.0));
}

Projected project_to_reference_line(Point2d pt, double y_ref, Point2d u,
                                    double t) {
  require(u.y != 0.0 && std::isfinite(u.y) && std::isfinite(u.x),
          "project_to_reference_line: direction parallel to the reference line");
  double r = (y_ref - pt.y) / u.y;
  Projected out;
  out.x = pt.x + r * u.x;
  out.y = y_ref;
  out.tau = frame_tau(out.x, out.y, t);
  return out;
}

HeightFrame height_frame(double v, double t) {
  return airy_chart(v, t, 0.0);
}

HeightFrame airy_chart(double v, double t, double tau) {
  require(t > 0.0, "airy_chart: t must be positive");
  require(std::fabs(v) < 1.0, "airy_chart: |v| must be below 1");
  double om = 1.0 - v * v;
  double sc = std::pow(om, 2.0 / 3.0) / std::cbrt(2.0) * std::cbrt(t);
  double spread = std::cbrt(2.0 * om) * std::pow(t, 2.0 / 3.0);
  HeightFrame f;
  f.position = v * t + tau * spread;
  f.center = 0.5 * (1.0 + v * v) * t + tau * v * spread + tau * tau * sc;
  f.scale = sc;
  return f;
}

double rescale_height(double h, const HeightFrame& frame) {
  return (frame.center - h) / frame.scale;
}

FixedPointChart fixed_point_chart(double v, double X, double T, double t) {
  require(t > 0.0 && T > 0.0, "fixed_point_chart: t and T must be positive");
  double tt = T * t;
  FixedPointChart c;
  c.position = v * tt + X * std::pow(tt, 2.0 / 3.0);
  c.time = tt;
  c.center = tt * corner_limit_shape(v + X / std::cbrt(tt));
  c.scale = std::cbrt(tt);
  return c;
}

double rescale_passage(double raw, double t, double nu,
                       const CharacteristicInfo& info, ScaledQuantity which) {
  require(t > 0.0, "rescale_passage: t must be positive");
  double tn = std::pow(t, nu);
  switch (which) {
    case ScaledQuantity::BasePoint:
      return (raw - t * info.ell) / (info.scale * std::pow(t, info.gamma));
    case ScaledQuantity::ShiftedPoint:
      return (raw - t * info.ell - tn * info.ell_step) /
             (info.scale * std::pow(t, info.gamma));
    case ScaledQuantity::StepLeg:
      return (raw - tn * info.ell_step) /
             (info.scale_step * std::pow(tn, info.gamma_step));
  }
  throw DomainError("rescale_passage: unknown quantity");
}

double step_height_center(double x, double time, double bias) {
  require(bias > 0.0, "step_height_center: bias must be positive");
  require(time >= 0.0, "step_height_center: time must be nonnegative");
  double s = bias * time;
  if (s <= 0.0) return std::fabs(x);
  double v = x / s;
  if (std::fabs(v) >= 1.0) return std::fabs(x);
  return s * corner_limit_shape(v);
}

const char* regime_name(GrowthRegime regime) {
  switch (regime) {
    case GrowthRegime::Bulk: return "bulk";
    case GrowthRegime::ColumnPinned: return "column-pinned";
    case GrowthRegime::RowPinned: return "row-pinned";
    case GrowthRegime::ShockPoint: return "shock-point";
  }
  return "unknown";
}

const char* law_name(LimitLaw law) {
  switch (law) {
    case LimitLaw::TracyWidomGUE: return "tw-gue";
    case LimitLaw::GOESquared: return "goe-squared";
    case LimitLaw::BaikRains: return "baik-rains";
    case LimitLaw::Gaussian: return "gaussian";
    case LimitLaw::MaxTwoGaussians: return "max-two-gaussians";
  }
  return "unknown";
}

}  // namespace kpz
