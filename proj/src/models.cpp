#include "kpz/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "kpz/errors.hpp"

namespace kpz {

ModelSpec ModelSpec::corner_growth() { return {}; }

ModelSpec ModelSpec::two_sided(double pi, double eta) {
  ModelSpec s;
  s.id = ModelId::TwoSidedBoundaryLpp;
  s.pi = pi;
  s.eta = eta;
  return s;
}

ModelSpec ModelSpec::thick_one_sided(std::vector<double> rates) {
  ModelSpec s;
  s.id = ModelId::ThickOneSidedLpp;
  s.row_rates = std::move(rates);
  return s;
}

ModelSpec ModelSpec::flat_tasep() {
  ModelSpec s;
  s.id = ModelId::FlatTasep;
  return s;
}

ModelSpec ModelSpec::half_flat_tasep() {
  ModelSpec s;
  s.id = ModelId::HalfFlatTasep;
  return s;
}

ModelSpec ModelSpec::png_droplet(double intensity) {
  ModelSpec s;
  s.id = ModelId::PngDroplet;
  s.intensity = intensity;
  return s;
}

ModelSpec ModelSpec::png_flat(double intensity) {
  ModelSpec s;
  s.id = ModelId::PngFlat;
  s.intensity = intensity;
  return s;
}

ModelSpec ModelSpec::png_two_sources(double intensity, double rate_x, double rate_y) {
  ModelSpec s;
  s.id = ModelId::PngTwoSources;
  s.intensity = intensity;
  s.source_rate_x = rate_x;
  s.source_rate_y = rate_y;
  return s;
}

ModelSpec ModelSpec::polymer(double beta, BulkSpec bulk) {
  ModelSpec s;
  s.id = ModelId::Polymer;
  s.beta = beta;
  s.bulk = bulk;
  return s;
}

ModelSpec ModelSpec::fpp(BulkSpec bulk) {
  ModelSpec s;
  s.id = ModelId::Fpp;
  s.bulk = bulk;
  return s;
}

bool model_uses_points(ModelId id) {
  return id == ModelId::PngDroplet || id == ModelId::PngFlat ||
         id == ModelId::PngTwoSources;
}

WeightField make_weight_field(const ModelSpec& spec, std::uint64_t seed) {
  switch (spec.id) {
    case ModelId::CornerGrowthStep:
      return WeightField(seed, Support::Quadrant, BulkSpec::exponential(),
                         BoundarySpec::none());
    case ModelId::TwoSidedBoundaryLpp:
      return WeightField(seed, Support::Quadrant, BulkSpec::exponential(),
                         BoundarySpec::two_sided(spec.pi, spec.eta));
    case ModelId::ThickOneSidedLpp:
      return WeightField(seed, Support::Quadrant, BulkSpec::exponential(),
                         BoundarySpec::thick_rows(spec.row_rates));
    case ModelId::FlatTasep:
      return WeightField(seed, Support::FlatHalfPlane, BulkSpec::exponential(),
                         BoundarySpec::none());
    case ModelId::HalfFlatTasep:
      return WeightField(seed, Support::HalfFlat, BulkSpec::exponential(),
                         BoundarySpec::none());
    case ModelId::Polymer:
    case ModelId::Fpp:
      return WeightField(seed, Support::Quadrant, spec.bulk, BoundarySpec::none());
    default:
      throw ConfigError("model samples a point process; use make_point_field");
  }
}

PointField make_point_field(const ModelSpec& spec, std::uint64_t seed) {
  switch (spec.id) {
    case ModelId::PngDroplet: {
      return PointField(seed, spec.intensity, PointRegion::Quadrant);
    }
    case ModelId::PngFlat: {
      return PointField(seed, spec.intensity, PointRegion::HalfPlane);
    }
    case ModelId::PngTwoSources: {
      PointField f(seed, spec.intensity, PointRegion::Quadrant);
      f.set_axis_sources(spec.source_rate_x, spec.source_rate_y);
      return f;
    }
    default:
      throw ConfigError("model samples lattice weights; use make_weight_field");
  }
}

SemiringMode model_semiring(const ModelSpec& spec) {
  switch (spec.id) {
    case ModelId::Polymer:
      return SemiringMode::log_sum_exp(spec.beta);
    case ModelId::Fpp:
      return SemiringMode::min_plus();
    default:
      return SemiringMode::max_plus();
  }
}

PngGeometry model_png_geometry(ModelId id) {
  switch (id) {
    case ModelId::PngDroplet:
      return PngGeometry::Droplet;
    case ModelId::PngFlat:
      return PngGeometry::Flat;
    case ModelId::PngTwoSources:
      return PngGeometry::TwoSource;
    default:
      throw ConfigError("not a point-process model");
  }
}

TasepInitialCondition TasepInitialCondition::step() {
  return {TasepIc::Step, 1.0, 0.0};
}

TasepInitialCondition TasepInitialCondition::two_sided_bernoulli(double rho_minus,
                                                                 double rho_plus) {
  return {TasepIc::TwoSidedBernoulli, rho_minus, rho_plus};
}

TasepInitialCondition TasepInitialCondition::flat() {
  return {TasepIc::Flat, 0.5, 0.5};
}

TasepInitialCondition TasepInitialCondition::half_flat() {
  return {TasepIc::HalfFlat, 0.5, 0.0};
}

ModelSpec map_tasep_initial_condition(const TasepInitialCondition& ic) {
  switch (ic.kind) {
    case TasepIc::Step:
      return ModelSpec::corner_growth();
    case TasepIc::TwoSidedBernoulli: {
      double rm = ic.rho_minus;
      double rp = ic.rho_plus;
      if (!(rm >= 0.0 && rm <= 1.0 && rp >= 0.0 && rp <= 1.0)) {
        throw ConfigError("Bernoulli densities must lie in [0, 1]");
      }
      double pi = 1.0 - rp;
      double eta = rm;
      if (pi == 1.0 && eta == 1.0) return ModelSpec::corner_growth();
      if (pi <= 0.0) {
        throw ConfigError("rho_plus = 1 has no boundary-weight image (row rate 0)");
      }
      if (eta <= 0.0) {
        throw ConfigError("rho_minus = 0 has no boundary-weight image (column rate 0)");
      }
      return ModelSpec::two_sided(pi, eta);
    }
    case TasepIc::Flat:
      return ModelSpec::flat_tasep();
    case TasepIc::HalfFlat:
      return ModelSpec::half_flat_tasep();
  }
  throw ConfigError("unknown initial condition");
}

int HeightProfile::at(int x) const {
  if (x < x_lo || x > x_hi()) throw DomainError("height query outside window");
  return h[static_cast<std::size_t>(x - x_lo)];
}

double HeightProfile::value_at(double x) const {
  if (x < x_lo || x > x_hi()) throw DomainError("height query outside window");
  double fl = std::floor(x);
  int k = static_cast<int>(fl);
  if (k == x_hi()) return at(k);
  double frac = x - fl;
  return (1.0 - frac) * at(k) + frac * at(k + 1);
}

namespace {

// Empty-cluster profile per support.
int base_height(Support support, int x) {
  switch (support) {
    case Support::Quadrant:
      return std::abs(x);
    case Support::FlatHalfPlane:
      return std::abs(x) % 2;
    case Support::HalfFlat:
      return x >= 0 ? x : std::abs(x) % 2;
  }
  return 0;
}

int ceil_half(int x) { return x >= 0 ? (x + 1) / 2 : x / 2; }

// Lowest row index of the diagonal ray {i - j = x} within the support.
int ray_min_row(Support support, int x) {
  switch (support) {
    case Support::Quadrant:
      return std::max(0, x);
    case Support::FlatHalfPlane:
      return ceil_half(x);
    case Support::HalfFlat:
      return x >= 0 ? x : ceil_half(x);
  }
  return 0;
}

}  // namespace

HeightProfile height_from_passage(const WeightField& field, double t,
                                  int x_lo, int x_hi) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError("height_from_passage: time must be finite and nonnegative");
  }
  if (x_lo > x_hi) throw DomainError("height_from_passage: empty window");

  const Support support = field.support();
  const int width = x_hi - x_lo + 1;
  const int maxabs = std::max(std::abs(x_lo), std::abs(x_hi));

  // Highest cluster level i + j the box must contain.  The interface moves
  // at speed 1/2, so 0.52 t plus a cube-root fluctuation allowance ends
  // above it with overwhelming probability; the frontier check below
  // regrows the box in the rare miss.
  long long ncap = static_cast<long long>(
      std::ceil(0.52 * t + 10.0 * std::cbrt(t + 1.0) + maxabs + 24.0));

  HeightProfile out;
  out.t = t;
  out.x_lo = x_lo;

  SweepWorkspace ws;
  PassageQuery q;
  q.mode = SemiringMode::max_plus();
  q.source = SourceMode::Boundary;

  for (int attempt = 0;; ++attempt) {
    std::vector<Point> targets;
    std::vector<std::size_t> frontier(static_cast<std::size_t>(width));
    long long imax = 0;
    long long jmax = 0;
    for (int x = x_lo; x <= x_hi; ++x) {
      long long hi = (ncap + x) / 2;
      for (long long i = ray_min_row(support, x); i <= hi; ++i) {
        targets.push_back({static_cast<int>(i), static_cast<int>(i - x)});
        imax = std::max(imax, i);
        jmax = std::max(jmax, i - x);
      }
      frontier[static_cast<std::size_t>(x - x_lo)] = targets.size() - 1;
    }
    // Rows swept run from -jmax (flat supports) to imax.
    long long rows = imax + (support == Support::Quadrant ? 0 : jmax) + 1;
    if (rows * (jmax + 1) > 200'000'000LL) {
      throw DomainError("height_from_passage: window/time needs too large a box");
    }

    q.targets = targets;
    std::vector<double> vals = passage_values(field, q, &ws);

    bool boxed = true;
    for (int x = x_lo; x <= x_hi && boxed; ++x) {
      boxed = vals[frontier[static_cast<std::size_t>(x - x_lo)]] > t;
    }
    if (boxed) {
      out.h.assign(static_cast<std::size_t>(width), 0);
      for (int x = x_lo; x <= x_hi; ++x) {
        out.h[static_cast<std::size_t>(x - x_lo)] = base_height(support, x);
      }
      for (std::size_t k = 0; k < targets.size(); ++k) {
        if (vals[k] <= t) {
          int level = targets[k].x + targets[k].y + 2;
          int& hx = out.h[static_cast<std::size_t>(targets[k].x - targets[k].y - x_lo)];
          hx = std::max(hx, level);
        }
      }
      return out;
    }
    if (attempt >= 4) {
      throw AccuracyError("height_from_passage: cluster kept reaching the box frontier");
    }
    ncap += ncap / 2 + 16;
  }
}

double current_from_height(double h, double x) { return 0.5 * (h - x); }

}  // namespace kpz
