#pragma once

// Monte Carlo experiment drivers.  Each driver validates its configuration,
// runs index-seeded samples (reproducible for any worker count), reduces them
// in index order, and returns a report that the CLI serializes to CSV.
//
// Common conventions:
//  - Ray endpoints are rounded to lattice points once per t; the achieved
//    integer targets are recorded in the report.
//  - Two-point comparisons couple both readings through one environment.
//  - Tail probabilities are quoted against thresholds M * t^gamma with the
//    regime's own exponent, and carry binomial standard errors.
//  - Numerical acceptance thresholds (KS bounds, correlation floors) are
//    calibration choices and are labeled as such where they are written out.

#include <cstdint>
#include <string>
#include <vector>

#include "kpz/models.hpp"
#include "kpz/pasep.hpp"
#include "kpz/report.hpp"
#include "kpz/stats.hpp"
#include "kpz/theory.hpp"

namespace kpz {

struct TailPoint {
  double t;
  double m;
  double phat;
  double se;
};

// ------------------------------------------------------------------
// Two-time comparison along (or off) the transverse step direction in the
// boundary lattice models.
//
// Per sample, on one environment: the passage value to the base point a at
// shape time t, to the shifted point b = a + round(t^nu * u / ell_pp(u)),
// and the bridge from a to b.  The report aggregates
//   delta = L(b) - L(a) - ell_pp(w)        (w the achieved displacement)
//   gap   = L(b) - L(a) - bridge           (nonnegative, max-plus)
// and the standardized one-point values chi1, chi2 plus the standardized
// bridge chi3.

struct DecorrConfig {
  ModelSpec model = ModelSpec::corner_growth();
  double kappa = 1.0;
  double nu = 0.5;
  std::vector<double> t_values;
  std::vector<double> thresholds{1.0};
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  // Direction of the t^nu displacement; unset means the transverse step
  // direction of the classified regime.
  bool has_ray_override = false;
  Point2d ray_override{1.0, 1.0};
  // Opt-in for regimes without a two-time limit (shock-point controls).
  bool allow_no_limit = false;
  // Swaps the bulk for weights that are zero almost surely, turning the run
  // into a deterministic sanity check of the centering bookkeeping.
  bool debug_zero_weights = false;
};

struct DecorrPerT {
  double t;
  Point a;
  Point b;
  double nu_achieved;  // log of the achieved bridge shape, base t
  double gap_min, gap_mean, gap_max;
  long long gap_sign_violations;
  double scaled_gap_mean;  // mean gap / t^gamma
  double corr12;
  std::vector<double> chi1;   // standardized value at a
  std::vector<double> chi2;   // standardized value at b
  std::vector<double> chi3;   // standardized bridge leg a -> b
  std::vector<double> delta;  // two-point difference minus the bridge shape
  std::vector<double> gaps;
};

struct DecorrReport {
  CharacteristicInfo info;
  double nu;
  bool used_ray_override;
  Point2d ray;
  bool scale_empirical;
  std::vector<DecorrPerT> per_t;
  std::vector<TailPoint> tails;  // P(|delta| >= m * t^gamma)
};

DecorrReport run_decorrelation(const DecorrConfig& cfg);

// Same machinery restricted to displaced rays: requires an override off the
// transverse step direction and nu > 1/3, so the deterministic shape
// mismatch dominates the fluctuations and the tail should climb toward 1.
DecorrReport run_off_characteristic_control(const DecorrConfig& cfg);

// ------------------------------------------------------------------
// Fluctuation-exponent fit.

struct ExponentConfig {
  ModelSpec model = ModelSpec::corner_growth();
  double kappa = 1.0;
  std::vector<double> t_values;  // at least 4, spanning a factor of 10
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
  int workers = 1;
  bool debug_zero_weights = false;  // forces zero variance, so the fit throws
};

struct ExponentReport {
  CharacteristicInfo info;
  std::vector<double> t_values;
  std::vector<Point> points;
  std::vector<double> sds;  // sample sd of the centered passage value
  std::vector<double> residuals;
  LinearFit fit;  // log sd against log t
  double gamma_expected;
};

ExponentReport run_exponent_fit(const ExponentConfig& cfg);

// ------------------------------------------------------------------
// One-point distribution against the classified reference law.  t is the
// ray parameter: the endpoint is round(t * (1, kappa^2)).

struct DistConfig {
  ModelSpec model = ModelSpec::corner_growth();
  double kappa = 1.0;
  double t = 1000.0;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  int workers = 1;
  // "auto" picks by the classified law; explicit choices are "tw-gue",
  // "gaussian" (empirically standardized), or "goe-squared" (needs a table).
  std::string reference = "auto";
  std::string goe_table_path;
};

struct DistReport {
  CharacteristicInfo info;
  Point a;
  std::string reference;
  bool standardized_empirically;
  double ks;
  std::vector<double> chi;
  std::vector<double> quantile_probs;
  std::vector<double> sample_quantiles;
  std::vector<double> reference_quantiles;
};

DistReport run_distribution_test(const DistConfig& cfg);

// ------------------------------------------------------------------
// Projection experiment on the corner model.  R is the row-frame point at
// transverse coordinate tau on the reference row y = t/4.  Each offset
// theta displaces the frame a further theta * t^nu in time; the displaced
// point is projected radially back to the reference row, and the
// standardized readings at the pair are correlated.  A same-row pair at
// order-t separation (delta * t columns) serves as the space-like contrast.

struct ProjectionConfig {
  double t = 4000.0;
  double nu = 0.6;
  double tau = 0.6;
  std::vector<double> theta_offsets{1.0};
  double spacelike_delta = 0.5;
  std::size_t samples = 10000;
  std::size_t control_samples = 2000;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct ProjectionPair {
  double theta;
  Point displaced;
  Point projected;
  double tau_displaced;  // frame coordinate at the displaced time
  double tau_projected;
  double corr;
  double corr_low;  // lower 2-sigma Fisher bound
  std::vector<double> chi_displaced;
  std::vector<double> chi_projected;
};

struct ProjectionReport {
  double t;
  double nu;
  Point reference;
  Point control;
  std::vector<ProjectionPair> pairs;
  double corr_spacelike;
  double corr_spacelike_high;  // upper 2-sigma Fisher bound
  std::vector<double> chi_reference;
  std::vector<double> chi_control;
};

ProjectionReport run_projection_experiment(const ProjectionConfig& cfg);

// ------------------------------------------------------------------
// Particle-system mirror of the two-time comparison, built on the coupled
// step-reset split.  The compensator (gap) is integer-exact per sample and
// never positive.

struct PasepDecorrConfig {
  double p = 0.75;
  PasepIc ic = PasepIc::step();  // step or step-Bernoulli
  double v = 0.0;
  double u = 1.0;
  double nu = 0.5;
  double margin = 1.5;
  std::vector<double> t_values;
  std::vector<double> thresholds{1.0};
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
  // Runs the coupling with no particles at all; every per-sample quantity is
  // then exactly zero, which pins down the crossing and height bookkeeping.
  bool debug_empty = false;
};

struct PasepDecorrPerT {
  double t;
  double dt;
  int x1;
  int x2;
  double gap_min, gap_mean, gap_max;
  long long gap_sign_violations;  // gap must be <= 0, exactly
  double scaled_neg_gap_mean;     // mean(-gap) / t^{1/3}
  double corr12;
  std::vector<double> delta;  // centered height difference between the times
  std::vector<long long> gaps;
};

struct PasepDecorrReport {
  double bias;  // right rate minus left rate
  double nu;
  std::vector<PasepDecorrPerT> per_t;
  std::vector<TailPoint> tails;  // P(|delta| >= m * t^{1/3})
};

PasepDecorrReport run_pasep_decorrelation(const PasepDecorrConfig& cfg);

// ------------------------------------------------------------------
// Positive-temperature mirror: free-energy two-time comparison with the
// log-sum-exp compensator, which is nonnegative.  The free-energy shape has
// no closed form here, so the two-point difference is centered empirically
// (per-t sample mean) and the report says so.  t is the ray parameter:
// a = round(t * p), b = a + round(t^nu * u).

struct PolymerDecorrConfig {
  double beta = 1.0;
  BulkSpec bulk = BulkSpec::exponential();
  Point2d p{1.0, 1.0};
  Point2d u{1.0, 1.0};
  double nu = 0.5;
  std::vector<double> t_values;
  std::vector<double> thresholds{1.0};
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct PolymerDecorrPerT {
  double t;
  Point a;
  Point b;
  double gap_min, gap_mean, gap_max;
  long long gap_sign_violations;  // gap < -tol occurrences
  double scaled_gap_mean;         // mean gap / t^{1/3}
  double corr12;
  std::vector<double> delta;
  std::vector<double> gaps;
};

struct PolymerDecorrReport {
  double beta;
  double nu;
  bool empirical_centering;  // always true; recorded in the CSV header
  std::vector<PolymerDecorrPerT> per_t;
  std::vector<TailPoint> tails;  // P(|delta| >= m * t^{1/3})
};

PolymerDecorrReport run_polymer_decorrelation(const PolymerDecorrConfig& cfg);

// ------------------------------------------------------------------
// CSV output.  Each writer produces {run_dir}/{name}*.csv files; sample-level
// files carry one row per (t, index) in index order, so reruns and different
// worker counts produce identical bytes.

void write_decorr_csv(const DecorrReport& r, const RunContext& ctx,
                      const std::string& name);
void write_exponent_csv(const ExponentReport& r, const RunContext& ctx);
void write_dist_csv(const DistReport& r, const RunContext& ctx);
void write_projection_csv(const ProjectionReport& r, const RunContext& ctx);
void write_pasep_csv(const PasepDecorrReport& r, const RunContext& ctx);
void write_polymer_csv(const PolymerDecorrReport& r, const RunContext& ctx);

}  // namespace kpz
