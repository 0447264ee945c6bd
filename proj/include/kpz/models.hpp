#pragma once

// Catalog of concrete growth models: which environment they sample, which
// semiring reads them, and how exclusion-process initial conditions map onto
// boundary weights.  Also extracts growth-interface height profiles from
// passage values.

#include <cstdint>
#include <vector>

#include "kpz/environment.hpp"
#include "kpz/passage.hpp"

namespace kpz {

enum class ModelId {
  CornerGrowthStep,
  TwoSidedBoundaryLpp,
  ThickOneSidedLpp,
  FlatTasep,
  HalfFlatTasep,
  PngDroplet,
  PngFlat,
  PngTwoSources,
  Polymer,
  Fpp,
};

struct ModelSpec {
  ModelId id = ModelId::CornerGrowthStep;
  double pi = 1.0;                 // bottom-row rate (TwoSidedBoundaryLpp)
  double eta = 1.0;                // left-column rate (TwoSidedBoundaryLpp)
  std::vector<double> row_rates;   // ThickOneSidedLpp, bottom rows upward
  double intensity = 1.0;          // PNG bulk Poisson intensity
  double source_rate_x = 0.0;      // PngTwoSources axis intensities
  double source_rate_y = 0.0;
  double beta = 1.0;               // Polymer inverse temperature
  BulkSpec bulk = BulkSpec::exponential();  // Polymer / Fpp weight law

  static ModelSpec corner_growth();
  static ModelSpec two_sided(double pi, double eta);
  static ModelSpec thick_one_sided(std::vector<double> rates);
  static ModelSpec flat_tasep();
  static ModelSpec half_flat_tasep();
  static ModelSpec png_droplet(double intensity);
  static ModelSpec png_flat(double intensity);
  static ModelSpec png_two_sources(double intensity, double rate_x, double rate_y);
  static ModelSpec polymer(double beta, BulkSpec bulk = BulkSpec::exponential());
  static ModelSpec fpp(BulkSpec bulk = BulkSpec::exponential());
};

// Point-process models (the PNG family) sample a PointField; the rest
// sample a WeightField.  Asking for the wrong one is a config error.
bool model_uses_points(ModelId id);
WeightField make_weight_field(const ModelSpec& spec, std::uint64_t seed);
PointField make_point_field(const ModelSpec& spec, std::uint64_t seed);
SemiringMode model_semiring(const ModelSpec& spec);
PngGeometry model_png_geometry(ModelId id);

// Exclusion-process initial conditions and their boundary-weight images.
enum class TasepIc { Step, TwoSidedBernoulli, Flat, HalfFlat };

struct TasepInitialCondition {
  TasepIc kind = TasepIc::Step;
  double rho_minus = 1.0;  // density on sites <= 0
  double rho_plus = 0.0;   // density on sites >= 1

  static TasepInitialCondition step();
  static TasepInitialCondition two_sided_bernoulli(double rho_minus, double rho_plus);
  static TasepInitialCondition flat();
  static TasepInitialCondition half_flat();
};

// Step (and the equivalent Bernoulli(1, 0)) maps to the pure corner model;
// general two-sided Bernoulli maps to boundary rates pi = 1 - rho_plus,
// eta = rho_minus.  The mapped model drops the almost-surely-finite run of
// zero boundary weights of the exact correspondence, so prelimit laws agree
// only asymptotically; the pure-model maps are exact.
ModelSpec map_tasep_initial_condition(const TasepInitialCondition& ic);

// Growth-interface height profile on an integer window, read at a fixed
// time.  Heights move by +-1 between neighboring positions.
struct HeightProfile {
  double t = 0.0;
  int x_lo = 0;
  std::vector<int> h;

  int x_hi() const { return x_lo + static_cast<int>(h.size()) - 1; }
  int at(int x) const;
  double value_at(double x) const;  // linear interpolation between sites
};

// Level-set reading of the growth cluster: position X at time t has height
//   max(base(X), max{i + j + 2 : i - j = X, L(i, j) <= t}),
// where base is the empty-cluster profile of the field's support (wedge for
// the quadrant, sawtooth for the flat half plane, mixed for half flat).
// The box is sized automatically from t and the window and regrown until
// the cluster demonstrably ends inside it.
HeightProfile height_from_passage(const WeightField& field, double t,
                                  int x_lo, int x_hi);

// Integrated-current reading of a height value at site x (exact for the
// step profile at x >= 0).
double current_from_height(double h, double x);

}  // namespace kpz
