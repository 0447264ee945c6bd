#pragma once

// Closed-form limit shapes, fluctuation scales, characteristic directions,
// and the scaling frames used to normalize raw passage values and heights.
// Everything here is a pure function of its arguments.

#include "kpz/environment.hpp"

namespace kpz {

// Macroscopic height profile of the corner growth interface:
// (1+v^2)/2 inside the cone |v| < 1, |v| outside.
double corner_limit_shape(double v);

// Slope of the characteristic ray leaving a site with local density rho.
double tasep_characteristic_speed(double rho);

// Linear growth rate of rate-1 point-to-point passage along (u1, u2):
// L(t*u1, t*u2) / t -> (sqrt(u1) + sqrt(u2))^2.  Requires u1, u2 >= 0.
double pp_shape(double u1, double u2);

// Matching fluctuation scale: L - t*pp_shape is of order pp_scale * t^{1/3},
// with pp_scale = (sqrt(u1)+sqrt(u2))^{4/3} / (u1*u2)^{1/6}.  Symmetric in
// (u1, u2); requires both positive.
double pp_scale(double u1, double u2);

// Where the maximizing path to t*(1, kappa^2) lives in the two-sided
// boundary model, which controls both the fluctuation exponent and the
// limit law.
enum class GrowthRegime {
  Bulk,          // path stays in the bulk; cube-root fluctuations
  ColumnPinned,  // path clings to the left column; CLT fluctuations
  RowPinned,     // path clings to the bottom row; CLT fluctuations
  ShockPoint,    // row and column pins tie; no slow decorrelation
};

enum class LimitLaw {
  TracyWidomGUE,
  GOESquared,       // exactly one pin threshold attained
  BaikRains,        // both thresholds attained (stationary tuning)
  Gaussian,
  MaxTwoGaussians,  // shock point: max of two independent Gaussians
};

struct CharacteristicInfo {
  GrowthRegime regime;
  LimitLaw law;

  // Long ray: L(t*p) = ell*t + scale*D*t^gamma + o(t^gamma).
  Point2d p;     // query direction (1, kappa^2)
  double ell;
  double gamma;  // 1/3 in the bulk, 1/2 when pinned
  double scale;  // NaN when only known empirically (all CLT regimes)
  bool scale_is_empirical;

  // Transverse step: rate-1 point-to-point leg along u, GUE-distributed
  // with exponent 1/3.  u has NaN components at the shock point, where no
  // direction works.
  Point2d u;
  double ell_step;
  double gamma_step;
  double scale_step;

  bool slow_decorrelation;  // false exactly at the shock point
  double nu_max;            // admissible shift exponents: 0 < nu < nu_max

  // Thresholds used by the classification, clamped for absent boundaries.
  double kappa;
  double kappa_column;  // pin to the column when kappa exceeds this
  double kappa_row;     // pin to the row when kappa is below this
  double kappa_shock;   // geometric mean of the two, the tie point
};

// Classify the direction (1, kappa^2) for the two-sided boundary model with
// bottom-row rate pi and left-column rate eta.  A rate >= 1 means that side
// cannot pin and its threshold is clamped out of the way, so pi = eta = 1
// reduces to the pure bulk model.  Threshold ties are detected with a 1e-9
// relative tolerance.
CharacteristicInfo classify_two_sided(double pi, double eta, double kappa);

// Stable lowercase labels for reports and CSV headers.
const char* regime_name(GrowthRegime regime);
const char* law_name(LimitLaw law);

// Pure rate-1 quadrant shorthand.
CharacteristicInfo classify_bulk(double kappa);

// Law of large numbers for the two-sided boundary passage value to (x, y),
// x, y > 0: the best of the bulk value and the two pinned values.
double boundary_shape(double pi, double eta, double x, double y);

// Space-time sampling frame for the corner model written in lattice
// coordinates.  The base point sits at (t + theta*t^nu)/4 on the diagonal,
// tau measures transverse t^{2/3} offsets, and ell is the passage-time level
// whose s-offset probes t^{1/3} fluctuations.
struct FrameTriple {
  long long x;
  long long y;
  double ell;
};

FrameTriple scaling_frame(double t, double nu, double tau, double theta, double s);

// Theta choices that specialize the frame.
double theta_fixed_row(double t, double nu, double tau);   // keeps y = t/4
double theta_level_set(double t, double nu, double tau, double s);  // ell = t
double theta_time_offset(double t, double nu, double tau, double s,
                         double theta_tilde);  // ell = t + theta_tilde*t^nu

// Transverse frame coordinate of a lattice point: tau such that
// x - y = tau * 2^{1/3} t^{2/3}.
double frame_tau(double x, double y, double t);

// Intersection of the line {pt + r*u} with the horizontal line y = y_ref,
// plus the frame coordinate of the result at scale t.  u.y must be nonzero.
struct Projected {
  double x;
  double y;
  double tau;
};

Projected project_to_reference_line(Point2d pt, double y_ref, Point2d u,
                                    double t);

// One-point normalization of the height at position v*t, time t, oriented so
// the normalized value converges to the GUE Tracy-Widom law:
//   normalized = (center - h(position, t)) / scale.
struct HeightFrame {
  double position;
  double center;
  double scale;
};

HeightFrame height_frame(double v, double t);

// Spatial frame at transverse coordinate tau around velocity v; with the
// same orientation the normalized values converge to the Airy2 process in
// tau.  |v| < 1 required.
HeightFrame airy_chart(double v, double t, double tau);

double rescale_height(double h, const HeightFrame& frame);

// Space-time chart of the conjectural scaling limit: the height is read at
// position v*T*t + X*(T*t)^{2/3} and time T*t, centered by the limit shape
// at the tilted velocity and scaled by (T*t)^{1/3}.
struct FixedPointChart {
  double position;
  double time;
  double center;
  double scale;
};

FixedPointChart fixed_point_chart(double v, double X, double T, double t);

// Normalizations of raw passage values against a CharacteristicInfo.
enum class ScaledQuantity {
  BasePoint,     // (raw - t*ell) / (scale * t^gamma)
  ShiftedPoint,  // also subtracts t^nu * ell_step before scaling
  StepLeg,       // (raw - t^nu*ell_step) / (scale_step * t^{nu/3})
};

double rescale_passage(double raw, double t, double nu,
                       const CharacteristicInfo& info, ScaledQuantity which);

// Mean of the step-initial-data height profile at displacement x after
// running for the given time with drift bias (right rate minus left rate):
// bias*time*hbar(x/(bias*time)), degenerating to |x| at time 0.  Centering
// the integrated current at bond x >= 0 uses half of (this - x).
double step_height_center(double x, double time, double bias);

}  // namespace kpz
