#include "kpz/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "kpz/errors.hpp"
#include "kpz/hashrng.hpp"
#include "kpz/parallel.hpp"
#include "kpz/passage.hpp"
#include "kpz/refdist.hpp"

namespace kpz {
namespace {

void require_cfg(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

void require_dom(bool ok, const std::string& msg) {
  if (!ok) throw DomainError(msg);
}

Point to_lattice(double x, double y, const char* what) {
  const long long ix = std::llround(x);
  const long long iy = std::llround(y);
  if (ix < 0 || iy < 0 || ix > 1000000000LL || iy > 1000000000LL)
    throw DomainError(std::string(what) + ": lattice target out of range");
  return Point{static_cast<int>(ix), static_cast<int>(iy)};
}

CharacteristicInfo classify_model(const ModelSpec& m, double kappa) {
  switch (m.id) {
    case ModelId::CornerGrowthStep:
      return classify_bulk(kappa);
    case ModelId::TwoSidedBoundaryLpp:
      return classify_two_sided(m.pi, m.eta, kappa);
    default:
      break;
  }
  throw ConfigError(
      "lattice experiments run on the corner growth or two-sided boundary model");
}

WeightField lattice_field(const ModelSpec& m, bool zero_debug,
                          std::uint64_t sseed) {
  if (zero_debug) {
    // Geometric weights whose zero class has the largest probability below 1:
    // every cell any realistic run touches comes out zero.
    return WeightField(sseed, Support::Quadrant,
                       BulkSpec::geometric(std::nextafter(1.0, 0.0)),
                       BoundarySpec::none());
  }
  return make_weight_field(m, sseed);
}

double safe_corr(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2 || y.size() != x.size()) return 0.0;
  if (!(variance(x) > 0.0) || !(variance(y) > 0.0)) return 0.0;
  return pearson(x, y);
}

double relative_gap_tol(double reference) {
  return 1e-9 * std::max(1.0, std::fabs(reference));
}

void check_grid(const std::vector<double>& ts, const std::vector<double>& ms,
                std::size_t samples, double t_floor) {
  require_cfg(!ts.empty(), "t grid must be nonempty");
  for (double t : ts)
    require_cfg(std::isfinite(t) && t >= t_floor,
                "t grid entries must be finite and >= " + fmt_double(t_floor));
  require_cfg(!ms.empty(), "threshold grid must be nonempty");
  for (double m : ms)
    require_cfg(std::isfinite(m) && m > 0.0, "thresholds must be positive");
  require_cfg(samples >= 2, "need at least 2 samples");
}

struct Triple {
  double la;
  double lb;
  double bridge;
  double gap;
};

DecorrReport decorr_impl(const DecorrConfig& cfg, bool off_characteristic) {
  check_grid(cfg.t_values, cfg.thresholds, cfg.samples, 8.0);
  require_cfg(std::isfinite(cfg.nu) && cfg.nu > 0.0 && cfg.nu < 1.0,
              "nu must lie in (0,1)");
  require_cfg(std::isfinite(cfg.kappa) && cfg.kappa > 0.0,
              "kappa must be positive");

  const CharacteristicInfo info = classify_model(cfg.model, cfg.kappa);
  if (!info.slow_decorrelation) {
    require_dom(cfg.allow_no_limit,
                "this direction sits at the shock point, where the two-time "
                "limit fails; set allow_no_limit to run it as a control");
    require_dom(cfg.has_ray_override,
                "the shock point has no transverse step direction; supply a "
                "ray override");
  }
  require_dom(cfg.nu < info.nu_max,
              "nu must stay below gamma/gamma_step for the classified regime");
  if (off_characteristic)
    require_dom(cfg.nu > info.gamma_step,
                "the off-characteristic control needs nu > 1/3 so the shape "
                "mismatch outgrows the fluctuations");

  const Point2d ray = cfg.has_ray_override ? cfg.ray_override : info.u;
  require_cfg(std::isfinite(ray.x) && std::isfinite(ray.y) && ray.x > 0.0 &&
                  ray.y > 0.0,
              "shift ray needs positive coordinates");

  const SemiringMode mode = SemiringMode::max_plus();
  const double lray = pp_shape(ray.x, ray.y);
  const std::size_t tcount = cfg.t_values.size();

  struct PerT {
    Point a{}, b{}, w{};
    double center_w = 0.0;
    double center_a = 0.0;
    double center_b = 0.0;
    std::vector<Triple> samples;
  };
  std::vector<PerT> data(tcount);

  for (std::size_t ti = 0; ti < tcount; ++ti) {
    const double t = cfg.t_values[ti];
    PerT& d = data[ti];
    d.a = to_lattice(t / info.ell * info.p.x, t / info.ell * info.p.y,
                     "base point");
    require_dom(d.a.x >= 1 && d.a.y >= 1,
                "base point collapses onto the axes; increase t");
    const double shift = std::pow(t, cfg.nu) / lray;
    d.w = to_lattice(shift * ray.x, shift * ray.y, "shift");
    require_dom(d.w.x >= 1 && d.w.y >= 1,
                "shift displacement rounds below one lattice step; increase t "
                "or nu");
    d.b = Point{d.a.x + d.w.x, d.a.y + d.w.y};
    d.center_w = pp_shape(d.w.x, d.w.y);
    // Single-point values to (x, y) sum over an (x+1) by (y+1) block of
    // cells, so their centering and cube-root scale use the block sides.
    // The displacement leg keeps the bare coordinates: the junction drops
    // the shared corner cell, and that convention centers delta best.
    d.center_a =
        boundary_shape(cfg.model.pi, cfg.model.eta, d.a.x + 1, d.a.y + 1);
    d.center_b =
        boundary_shape(cfg.model.pi, cfg.model.eta, d.b.x + 1, d.b.y + 1);
    d.samples = parallel_map<Triple>(
        cfg.samples, cfg.workers, [&, ti](std::size_t i) {
          const std::uint64_t sseed =
              rng::sample_seed(cfg.seed, ti * cfg.samples + i);
          WeightField f = lattice_field(cfg.model, cfg.debug_zero_weights, sseed);
          SweepWorkspace ws;
          const JunctionSplit js = superadditivity_check(f, mode, d.a, d.b, &ws);
          return Triple{js.start, js.direct,
                        js.junction + f.weight(d.a.x, d.a.y), js.gap};
        });
  }

  // CLT-regime constants have no closed form here; one empirical unit, read
  // at the largest t, standardizes every chi column.
  double unit = 1.0;
  if (info.scale_is_empirical) {
    std::size_t ti_max = 0;
    for (std::size_t ti = 1; ti < tcount; ++ti)
      if (cfg.t_values[ti] > cfg.t_values[ti_max]) ti_max = ti;
    std::vector<double> centered(cfg.samples);
    for (std::size_t i = 0; i < cfg.samples; ++i)
      centered[i] = data[ti_max].samples[i].la - data[ti_max].center_a;
    const double sd = sample_sd(centered);
    unit = sd / std::pow(cfg.t_values[ti_max], info.gamma);
    if (!(unit > 0.0)) unit = 1.0;
  }

  DecorrReport rep;
  rep.info = info;
  rep.nu = cfg.nu;
  rep.used_ray_override = cfg.has_ray_override;
  rep.ray = ray;
  rep.scale_empirical = info.scale_is_empirical;
  rep.per_t.resize(tcount);

  for (std::size_t ti = 0; ti < tcount; ++ti) {
    const double t = cfg.t_values[ti];
    const PerT& d = data[ti];
    DecorrPerT& pt = rep.per_t[ti];
    const std::size_t n = d.samples.size();
    pt.t = t;
    pt.a = d.a;
    pt.b = d.b;
    pt.nu_achieved = std::log(d.center_w) / std::log(t);
    pt.chi1.resize(n);
    pt.chi2.resize(n);
    pt.chi3.resize(n);
    pt.delta.resize(n);
    pt.gaps.resize(n);

    const double denom1 = info.scale_is_empirical
                              ? unit * std::pow(t, info.gamma)
                              : pp_scale(d.a.x + 1, d.a.y + 1);
    const double denom2 = info.scale_is_empirical
                              ? unit * std::pow(t, info.gamma)
                              : pp_scale(d.b.x + 1, d.b.y + 1);
    const double denom3 = pp_scale(d.w.x, d.w.y);

    std::vector<double> la(n), lb(n);
    double gmin = d.samples[0].gap, gmax = d.samples[0].gap, gsum = 0.0;
    long long violations = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Triple& s = d.samples[i];
      la[i] = s.la;
      lb[i] = s.lb;
      gmin = std::min(gmin, s.gap);
      gmax = std::max(gmax, s.gap);
      gsum += s.gap;
      if (s.gap < -relative_gap_tol(s.lb)) ++violations;
      pt.chi1[i] = (s.la - d.center_a) / denom1;
      pt.chi2[i] = (s.lb - d.center_b) / denom2;
      pt.chi3[i] = (s.bridge - d.center_w) / denom3;
      pt.delta[i] = s.lb - s.la - d.center_w;
      pt.gaps[i] = s.gap;
    }
    pt.gap_min = gmin;
    pt.gap_max = gmax;
    pt.gap_mean = gsum / static_cast<double>(n);
    pt.gap_sign_violations = violations;
    pt.scaled_gap_mean = pt.gap_mean / std::pow(t, info.gamma);
    pt.corr12 = safe_corr(la, lb);

    for (double m : cfg.thresholds) {
      const double thr = m * std::pow(t, info.gamma);
      std::size_t hits = 0;
      for (double dlt : pt.delta)
        if (std::fabs(dlt) >= thr) ++hits;
      const double phat = static_cast<double>(hits) / static_cast<double>(n);
      rep.tails.push_back(TailPoint{t, m, phat, binomial_se(phat, n)});
    }
  }
  return rep;
}

}  // namespace

DecorrReport run_decorrelation(const DecorrConfig& cfg) {
  return decorr_impl(cfg, false);
}

DecorrReport run_off_characteristic_control(const DecorrConfig& cfg) {
  return decorr_impl(cfg, true);
}

ExponentReport run_exponent_fit(const ExponentConfig& cfg) {
  require_cfg(cfg.t_values.size() >= 4, "exponent fit needs at least 4 t values");
  double t_lo = cfg.t_values.front(), t_hi = cfg.t_values.front();
  for (double t : cfg.t_values) {
    require_cfg(std::isfinite(t) && t >= 2.0, "t grid entries must be >= 2");
    t_lo = std::min(t_lo, t);
    t_hi = std::max(t_hi, t);
  }
  require_cfg(t_hi >= 10.0 * t_lo, "t grid must span at least one decade");
  require_cfg(cfg.samples >= 2, "need at least 2 samples");
  require_cfg(std::isfinite(cfg.kappa) && cfg.kappa > 0.0,
              "kappa must be positive");

  const CharacteristicInfo info = classify_model(cfg.model, cfg.kappa);
  const SemiringMode mode = SemiringMode::max_plus();

  ExponentReport rep;
  rep.info = info;
  rep.t_values = cfg.t_values;
  rep.gamma_expected = info.gamma;

  for (std::size_t ti = 0; ti < cfg.t_values.size(); ++ti) {
    const double t = cfg.t_values[ti];
    const Point a =
        to_lattice(t * info.p.x, t * info.p.y, "observation point");
    require_dom(a.x >= 1 && a.y >= 1,
                "observation point collapses onto the axes; increase t");
    rep.points.push_back(a);
    const std::vector<double> vals = parallel_map<double>(
        cfg.samples, cfg.workers, [&, ti](std::size_t i) {
          const std::uint64_t sseed =
              rng::sample_seed(cfg.seed, ti * cfg.samples + i);
          WeightField f = lattice_field(cfg.model, cfg.debug_zero_weights, sseed);
          return passage_value(f, mode, a);
        });
    const double sd = sample_sd(vals);
    require_dom(sd > 0.0,
                "fluctuation scale degenerates at t=" + fmt_double(t) +
                    "; no exponent to fit");
    rep.sds.push_back(sd);
  }

  std::vector<double> lx(cfg.t_values.size()), ly(cfg.t_values.size());
  for (std::size_t i = 0; i < cfg.t_values.size(); ++i) {
    lx[i] = std::log(cfg.t_values[i]);
    ly[i] = std::log(rep.sds[i]);
  }
  rep.fit = linear_fit(lx, ly);
  rep.residuals.resize(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i)
    rep.residuals[i] = ly[i] - (rep.fit.intercept + rep.fit.slope * lx[i]);
  return rep;
}

DistReport run_distribution_test(const DistConfig& cfg) {
  require_cfg(std::isfinite(cfg.t) && cfg.t >= 8.0, "t must be >= 8");
  require_cfg(cfg.samples >= 10, "distribution test needs at least 10 samples");
  require_cfg(std::isfinite(cfg.kappa) && cfg.kappa > 0.0,
              "kappa must be positive");
  require_cfg(cfg.reference == "auto" || cfg.reference == "tw-gue" ||
                  cfg.reference == "gaussian" || cfg.reference == "goe-squared",
              "unknown reference '" + cfg.reference +
                  "'; use auto, tw-gue, gaussian, or goe-squared");

  const CharacteristicInfo info = classify_model(cfg.model, cfg.kappa);
  const Point a =
      to_lattice(cfg.t * info.p.x, cfg.t * info.p.y, "observation point");
  require_dom(a.x >= 1 && a.y >= 1,
              "observation point collapses onto the axes; increase t");
  // The value at (x, y) sums over an (x+1) by (y+1) block of cells, so the
  // law-of-large-numbers centering takes the block sides. Using the bare
  // coordinates leaves a location offset of order t^{-2/3} in chi that a
  // KS test against the limit law picks up at practical sizes.
  const double center =
      boundary_shape(cfg.model.pi, cfg.model.eta, a.x + 1, a.y + 1);

  const SemiringMode mode = SemiringMode::max_plus();
  const std::vector<double> raw = parallel_map<double>(
      cfg.samples, cfg.workers, [&](std::size_t i) {
        const std::uint64_t sseed = rng::sample_seed(cfg.seed, i);
        WeightField f = lattice_field(cfg.model, false, sseed);
        return passage_value(f, mode, a);
      });

  std::string refname = cfg.reference;
  if (refname == "auto") {
    switch (info.law) {
      case LimitLaw::TracyWidomGUE: refname = "tw-gue"; break;
      case LimitLaw::Gaussian: refname = "gaussian"; break;
      case LimitLaw::GOESquared: refname = "goe-squared"; break;
      default:
        throw ConfigError(std::string("no built-in reference for the ") +
                          law_name(info.law) + " law; pick one explicitly");
    }
  }
  if (refname == "goe-squared")
    require_cfg(!cfg.goe_table_path.empty(),
                "the goe-squared reference needs goe_table_path");

  DistReport rep;
  rep.info = info;
  rep.a = a;
  rep.reference = refname;
  rep.chi.resize(raw.size());
  if (refname == "gaussian") {
    rep.standardized_empirically = true;
    const double m = mean(raw);
    const double sd = sample_sd(raw);
    require_dom(sd > 0.0, "sample is degenerate; cannot standardize");
    for (std::size_t i = 0; i < raw.size(); ++i)
      rep.chi[i] = (raw[i] - m) / sd;
  } else {
    rep.standardized_empirically = false;
    const double denom = pp_scale(a.x + 1, a.y + 1);
    for (std::size_t i = 0; i < raw.size(); ++i)
      rep.chi[i] = (raw[i] - center) / denom;
  }

  const RefDist ref = [&]() -> RefDist {
    if (refname == "tw-gue") return RefDist::gue();
    if (refname == "gaussian") return RefDist::gaussian(0.0, 1.0);
    return RefDist::goe_squared(cfg.goe_table_path);
  }();

  rep.ks = ks_statistic(rep.chi, ref);
  rep.quantile_probs = {0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99};
  for (double p : rep.quantile_probs) {
    rep.sample_quantiles.push_back(sample_quantile(rep.chi, p));
    rep.reference_quantiles.push_back(ref.quantile(p));
  }
  return rep;
}

ProjectionReport run_projection_experiment(const ProjectionConfig& cfg) {
  require_cfg(std::isfinite(cfg.t) && cfg.t >= 64.0,
              "t must be >= 64 for the scaling frame");
  require_cfg(cfg.nu > 0.0 && cfg.nu < 1.0, "nu must lie in (0,1)");
  require_cfg(std::isfinite(cfg.tau), "tau must be finite");
  require_cfg(!cfg.theta_offsets.empty(), "need at least one offset");
  for (double th : cfg.theta_offsets)
    require_cfg(std::isfinite(th), "offsets must be finite");
  require_cfg(std::isfinite(cfg.spacelike_delta) && cfg.spacelike_delta > 0.0,
              "spacelike_delta must be positive");
  require_cfg(cfg.samples >= 4 && cfg.control_samples >= 4,
              "correlation intervals need at least 4 samples");

  const double t = cfg.t;
  const double th0 = theta_fixed_row(t, cfg.nu, cfg.tau);
  const FrameTriple rf = scaling_frame(t, cfg.nu, cfg.tau, th0, 0.0);
  const Point r = to_lattice(static_cast<double>(rf.x),
                             static_cast<double>(rf.y), "reference point");
  require_cfg(r.x >= 1 && r.y >= 1,
              "reference point leaves the quadrant; shrink tau");
  const Point c = Point{
      r.x + static_cast<int>(std::llround(cfg.spacelike_delta * t)), r.y};

  const std::size_t k_count = cfg.theta_offsets.size();
  std::vector<Point> ps(k_count), qs(k_count);
  std::vector<double> tau_p(k_count), tau_q(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double theta = cfg.theta_offsets[k];
    const FrameTriple pf = scaling_frame(t, cfg.nu, cfg.tau, th0 + theta, 0.0);
    ps[k] = to_lattice(static_cast<double>(pf.x), static_cast<double>(pf.y),
                       "displaced point");
    require_cfg(ps[k].x >= 1 && ps[k].y >= 1,
                "offset pushes the frame point out of the quadrant");
    tau_p[k] = frame_tau(ps[k].x, ps[k].y, t + theta * std::pow(t, cfg.nu));
    const Point2d pd{static_cast<double>(ps[k].x),
                     static_cast<double>(ps[k].y)};
    const Projected pr =
        project_to_reference_line(pd, static_cast<double>(r.y), pd, t);
    qs[k] = to_lattice(pr.x, static_cast<double>(r.y), "projected point");
    require_cfg(qs[k].x >= 1, "projection leaves the quadrant; shrink offsets");
    tau_q[k] = pr.tau;
  }

  PassageQuery query;
  query.mode = SemiringMode::max_plus();
  query.targets.reserve(2 * k_count);
  query.targets.insert(query.targets.end(), ps.begin(), ps.end());
  query.targets.insert(query.targets.end(), qs.begin(), qs.end());

  const auto standardize = [](Point pt, double value) {
    return (value - pp_shape(pt.x + 1, pt.y + 1)) / pp_scale(pt.x + 1, pt.y + 1);
  };

  const std::vector<std::vector<double>> main_vals =
      parallel_map<std::vector<double>>(
          cfg.samples, cfg.workers, [&](std::size_t i) {
            const std::uint64_t sseed = rng::sample_seed(cfg.seed, i);
            WeightField f(sseed, Support::Quadrant, BulkSpec::exponential(),
                          BoundarySpec::none());
            SweepWorkspace ws;
            return passage_values(f, query, &ws);
          });

  PassageQuery ctl;
  ctl.mode = SemiringMode::max_plus();
  ctl.targets = {r, c};
  const std::vector<std::vector<double>> ctl_vals =
      parallel_map<std::vector<double>>(
          cfg.control_samples, cfg.workers, [&](std::size_t j) {
            const std::uint64_t sseed =
                rng::sample_seed(cfg.seed, cfg.samples + j);
            WeightField f(sseed, Support::Quadrant, BulkSpec::exponential(),
                          BoundarySpec::none());
            SweepWorkspace ws;
            return passage_values(f, ctl, &ws);
          });

  ProjectionReport rep;
  rep.t = t;
  rep.nu = cfg.nu;
  rep.reference = r;
  rep.control = c;
  rep.pairs.resize(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    ProjectionPair& pair = rep.pairs[k];
    pair.theta = cfg.theta_offsets[k];
    pair.displaced = ps[k];
    pair.projected = qs[k];
    pair.tau_displaced = tau_p[k];
    pair.tau_projected = tau_q[k];
    pair.chi_displaced.resize(cfg.samples);
    pair.chi_projected.resize(cfg.samples);
    for (std::size_t i = 0; i < cfg.samples; ++i) {
      pair.chi_displaced[i] = standardize(ps[k], main_vals[i][k]);
      pair.chi_projected[i] = standardize(qs[k], main_vals[i][k_count + k]);
    }
    if (ps[k].x == qs[k].x && ps[k].y == qs[k].y) {
      pair.corr = 1.0;
      pair.corr_low = 1.0;
    } else {
      const double rr = safe_corr(pair.chi_displaced, pair.chi_projected);
      pair.corr = rr;
      pair.corr_low = std::fabs(rr) >= 1.0 - 1e-12
                          ? rr
                          : pearson_ci_low(rr, cfg.samples, 2.0);
    }
  }

  rep.chi_reference.resize(cfg.control_samples);
  rep.chi_control.resize(cfg.control_samples);
  for (std::size_t j = 0; j < cfg.control_samples; ++j) {
    rep.chi_reference[j] = standardize(r, ctl_vals[j][0]);
    rep.chi_control[j] = standardize(c, ctl_vals[j][1]);
  }
  const double rc = safe_corr(rep.chi_reference, rep.chi_control);
  rep.corr_spacelike = rc;
  rep.corr_spacelike_high = std::fabs(rc) >= 1.0 - 1e-12
                                ? rc
                                : pearson_ci_high(rc, cfg.control_samples, 2.0);
  return rep;
}

PasepDecorrReport run_pasep_decorrelation(const PasepDecorrConfig& cfg) {
  require_cfg(cfg.p > 0.5 && cfg.p <= 1.0, "p must lie in (1/2, 1]");
  if (!cfg.debug_empty)
    require_cfg(cfg.ic.kind == PasepIc::Kind::Step ||
                    cfg.ic.kind == PasepIc::Kind::StepBernoulli,
                "initial data must be step or step-Bernoulli");
  require_cfg(std::isfinite(cfg.nu) && cfg.nu > 0.0 && cfg.nu < 1.0,
              "nu must lie in (0,1)");
  require_cfg(std::isfinite(cfg.u) && cfg.u >= 0.0, "u must be nonnegative");
  require_cfg(std::isfinite(cfg.v), "v must be finite");
  require_cfg(cfg.margin >= 1.0, "light-cone margin must be >= 1");
  check_grid(cfg.t_values, cfg.thresholds, cfg.samples, 2.0);

  const double bias = 2.0 * cfg.p - 1.0;

  PasepDecorrReport rep;
  rep.bias = bias;
  rep.nu = cfg.nu;
  rep.per_t.resize(cfg.t_values.size());

  struct Obs {
    double delta;
    long long gap;
    double h1;
    double h2;
  };

  for (std::size_t ti = 0; ti < cfg.t_values.size(); ++ti) {
    const double t = cfg.t_values[ti];
    const double dt = std::pow(t, cfg.nu);
    const long long x1 = std::llround(cfg.v * t);
    const long long x2 = x1 + std::llround(cfg.u * dt);

    const std::vector<Obs> obs = parallel_map<Obs>(
        cfg.samples, cfg.workers, [&, ti](std::size_t i) {
          const std::uint64_t sseed =
              rng::sample_seed(cfg.seed, ti * cfg.samples + i);
          if (cfg.debug_empty) {
            const int maxsite =
                static_cast<int>(std::max(std::llabs(x1), std::llabs(x2)));
            const int radius =
                static_cast<int>(std::ceil(cfg.margin * (t + dt))) + maxsite + 2;
            PasepSimulator sim(sseed, radius, cfg.p);
            const std::vector<std::uint8_t> nobody(2 * radius + 1, 0);
            const int main = sim.add_replica(nobody);
            sim.run_to(t);
            const long long i_start = sim.crossings(main, static_cast<int>(x1));
            const int reset = sim.add_replica(nobody);
            sim.run_to(t + dt);
            const long long i_end = sim.crossings(main, static_cast<int>(x2));
            const long long i_reset =
                sim.crossings(reset, static_cast<int>(x2));
            const long long h01 = sim.height0(main, static_cast<int>(x1));
            const long long h02 = sim.height0(main, static_cast<int>(x2));
            const long long n0 = ((x2 - x1) - (h02 - h01)) / 2;
            const long long gap = i_end - i_start - i_reset - n0;
            // The empty profile is frozen, so any nonzero here is a phantom
            // crossing; delta and gap must come out exactly 0.
            return Obs{2.0 * static_cast<double>(i_end - i_start), gap,
                       static_cast<double>(h01 + 2 * i_start),
                       static_cast<double>(h02 + 2 * i_end)};
          }
          PasepRunConfig rc;
          rc.p = cfg.p;
          rc.ic = cfg.ic;
          rc.radius = 0;
          rc.margin = cfg.margin;
          rc.seed = sseed;
          const StepResetSplit s = coupled_step_reset(rc, cfg.v, cfg.u, cfg.nu, t);
          const double delta =
              (static_cast<double>(s.h_end) -
               step_height_center(static_cast<double>(s.x2), t + s.dt, bias)) -
              (static_cast<double>(s.h_start) -
               step_height_center(static_cast<double>(s.x1), t, bias));
          return Obs{delta, s.gap, static_cast<double>(s.h_start),
                     static_cast<double>(s.h_end)};
        });

    PasepDecorrPerT& pt = rep.per_t[ti];
    const std::size_t n = obs.size();
    pt.t = t;
    pt.dt = dt;
    pt.x1 = static_cast<int>(x1);
    pt.x2 = static_cast<int>(x2);
    pt.delta.resize(n);
    pt.gaps.resize(n);
    std::vector<double> h1(n), h2(n);
    double gmin = static_cast<double>(obs[0].gap);
    double gmax = gmin, gsum = 0.0;
    long long violations = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double g = static_cast<double>(obs[i].gap);
      gmin = std::min(gmin, g);
      gmax = std::max(gmax, g);
      gsum += g;
      if (obs[i].gap > 0) ++violations;
      pt.delta[i] = obs[i].delta;
      pt.gaps[i] = obs[i].gap;
      h1[i] = obs[i].h1;
      h2[i] = obs[i].h2;
    }
    pt.gap_min = gmin;
    pt.gap_max = gmax;
    pt.gap_mean = gsum / static_cast<double>(n);
    pt.gap_sign_violations = violations;
    pt.scaled_neg_gap_mean = -pt.gap_mean / std::cbrt(t);
    pt.corr12 = safe_corr(h1, h2);

    for (double m : cfg.thresholds) {
      const double thr = m * std::cbrt(t);
      std::size_t hits = 0;
      for (double dlt : pt.delta)
        if (std::fabs(dlt) >= thr) ++hits;
      const double phat = static_cast<double>(hits) / static_cast<double>(n);
      rep.tails.push_back(TailPoint{t, m, phat, binomial_se(phat, n)});
    }
  }
  return rep;
}

PolymerDecorrReport run_polymer_decorrelation(const PolymerDecorrConfig& cfg) {
  require_cfg(std::isfinite(cfg.beta) && cfg.beta > 0.0, "beta must be positive");
  require_cfg(std::isfinite(cfg.p.x) && std::isfinite(cfg.p.y) && cfg.p.x > 0.0 &&
                  cfg.p.y > 0.0,
              "ray p needs positive coordinates");
  require_cfg(std::isfinite(cfg.u.x) && std::isfinite(cfg.u.y) && cfg.u.x > 0.0 &&
                  cfg.u.y > 0.0,
              "shift u needs positive coordinates");
  require_cfg(std::isfinite(cfg.nu) && cfg.nu > 0.0 && cfg.nu < 1.0,
              "nu must lie in (0,1)");
  check_grid(cfg.t_values, cfg.thresholds, cfg.samples, 2.0);

  const ModelSpec spec = ModelSpec::polymer(cfg.beta, cfg.bulk);
  const SemiringMode mode = model_semiring(spec);

  PolymerDecorrReport rep;
  rep.beta = cfg.beta;
  rep.nu = cfg.nu;
  rep.empirical_centering = true;
  rep.per_t.resize(cfg.t_values.size());

  for (std::size_t ti = 0; ti < cfg.t_values.size(); ++ti) {
    const double t = cfg.t_values[ti];
    const Point a = to_lattice(t * cfg.p.x, t * cfg.p.y, "base point");
    require_dom(a.x >= 1 && a.y >= 1,
                "base point collapses onto the axes; increase t");
    const Point w = to_lattice(std::pow(t, cfg.nu) * cfg.u.x,
                               std::pow(t, cfg.nu) * cfg.u.y, "shift");
    require_dom(w.x >= 1 && w.y >= 1,
                "shift displacement rounds below one lattice step; increase t "
                "or nu");
    const Point b{a.x + w.x, a.y + w.y};

    const std::vector<Triple> samples = parallel_map<Triple>(
        cfg.samples, cfg.workers, [&, ti](std::size_t i) {
          const std::uint64_t sseed =
              rng::sample_seed(cfg.seed, ti * cfg.samples + i);
          WeightField f = make_weight_field(spec, sseed);
          SweepWorkspace ws;
          const JunctionSplit js = superadditivity_check(f, mode, a, b, &ws);
          return Triple{js.start, js.direct, 0.0, js.gap};
        });

    PolymerDecorrPerT& pt = rep.per_t[ti];
    const std::size_t n = samples.size();
    pt.t = t;
    pt.a = a;
    pt.b = b;
    pt.delta.resize(n);
    pt.gaps.resize(n);
    std::vector<double> la(n), lb(n);
    double gmin = samples[0].gap, gmax = samples[0].gap, gsum = 0.0;
    double dsum = 0.0;
    long long violations = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Triple& s = samples[i];
      la[i] = s.la;
      lb[i] = s.lb;
      gmin = std::min(gmin, s.gap);
      gmax = std::max(gmax, s.gap);
      gsum += s.gap;
      if (s.gap < -relative_gap_tol(s.lb)) ++violations;
      pt.delta[i] = s.lb - s.la;
      dsum += pt.delta[i];
    }
    const double dmean = dsum / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      pt.delta[i] -= dmean;
      pt.gaps[i] = samples[i].gap;
    }
    pt.gap_min = gmin;
    pt.gap_max = gmax;
    pt.gap_mean = gsum / static_cast<double>(n);
    pt.gap_sign_violations = violations;
    pt.scaled_gap_mean = pt.gap_mean / std::cbrt(t);
    pt.corr12 = safe_corr(la, lb);

    for (double m : cfg.thresholds) {
      const double thr = m * std::cbrt(t);
      std::size_t hits = 0;
      for (double dlt : pt.delta)
        if (std::fabs(dlt) >= thr) ++hits;
      const double phat = static_cast<double>(hits) / static_cast<double>(n);
      rep.tails.push_back(TailPoint{t, m, phat, binomial_se(phat, n)});
    }
  }
  return rep;
}

// ------------------------------------------------------------------
// CSV / JSON output

namespace {

using nlohmann::json;

json point_json(Point p) { return json::array({p.x, p.y}); }

json finite_or_null(double v) {
  if (std::isfinite(v)) return json(v);
  return json();
}

void write_summary(const RunContext& ctx, const std::string& name,
                   json body) {
  body["config_hash"] = ctx.config_hash;
  body["seed"] = ctx.seed;
  body["experiment"] = name;
  write_text_file(ctx.run_dir() + "/" + name + "_summary.json",
                  body.dump(2) + "\n");
}

void write_tails(const RunContext& ctx, const std::string& name,
                 const std::vector<TailPoint>& tails) {
  CsvWriter out(ctx, name + "_tails");
  out.header({"t", "m", "phat", "se"});
  for (const TailPoint& tp : tails)
    out.row({fmt_double(tp.t), fmt_double(tp.m), fmt_double(tp.phat),
             fmt_double(tp.se)});
}

json tails_json(const std::vector<TailPoint>& tails) {
  json arr = json::array();
  for (const TailPoint& tp : tails)
    arr.push_back({{"t", tp.t}, {"m", tp.m}, {"phat", tp.phat}, {"se", tp.se}});
  return arr;
}

}  // namespace

void write_decorr_csv(const DecorrReport& r, const RunContext& ctx,
                      const std::string& name) {
  CsvWriter samples(ctx, name + "_samples");
  samples.comment(std::string("regime=") + regime_name(r.info.regime) +
                  " law=" + law_name(r.info.law));
  if (r.scale_empirical)
    samples.comment("chi columns use the sample std at the largest t");
  samples.header({"t", "index", "chi1", "chi2", "chi3", "delta", "gap"});
  for (const DecorrPerT& pt : r.per_t)
    for (std::size_t i = 0; i < pt.delta.size(); ++i)
      samples.row({fmt_double(pt.t), fmt_int(static_cast<long long>(i)),
                   fmt_double(pt.chi1[i]), fmt_double(pt.chi2[i]),
                   fmt_double(pt.chi3[i]), fmt_double(pt.delta[i]),
                   fmt_double(pt.gaps[i])});

  write_tails(ctx, name, r.tails);

  json per_t = json::array();
  for (const DecorrPerT& pt : r.per_t)
    per_t.push_back({{"t", pt.t},
                     {"a", point_json(pt.a)},
                     {"b", point_json(pt.b)},
                     {"nu_achieved", pt.nu_achieved},
                     {"gap_min", pt.gap_min},
                     {"gap_mean", pt.gap_mean},
                     {"gap_max", pt.gap_max},
                     {"gap_sign_violations", pt.gap_sign_violations},
                     {"scaled_gap_mean", pt.scaled_gap_mean},
                     {"corr12", pt.corr12}});
  write_summary(ctx, name,
                {{"regime", regime_name(r.info.regime)},
                 {"law", law_name(r.info.law)},
                 {"ell", r.info.ell},
                 {"gamma", r.info.gamma},
                 {"scale", finite_or_null(r.info.scale)},
                 {"nu", r.nu},
                 {"nu_max", r.info.nu_max},
                 {"ray", json::array({r.ray.x, r.ray.y})},
                 {"used_ray_override", r.used_ray_override},
                 {"scale_empirical", r.scale_empirical},
                 {"per_t", per_t},
                 {"tails", tails_json(r.tails)}});
}

void write_exponent_csv(const ExponentReport& r, const RunContext& ctx) {
  CsvWriter out(ctx, "exponent_fit");
  out.comment(std::string("regime=") + regime_name(r.info.regime));
  out.header({"t", "x", "y", "sd", "log_t", "log_sd", "fitted", "residual"});
  for (std::size_t i = 0; i < r.t_values.size(); ++i) {
    const double lt = std::log(r.t_values[i]);
    const double ls = std::log(r.sds[i]);
    out.row({fmt_double(r.t_values[i]), fmt_int(r.points[i].x),
             fmt_int(r.points[i].y), fmt_double(r.sds[i]), fmt_double(lt),
             fmt_double(ls), fmt_double(r.fit.intercept + r.fit.slope * lt),
             fmt_double(r.residuals[i])});
  }
  write_summary(ctx, "exponent",
                {{"regime", regime_name(r.info.regime)},
                 {"law", law_name(r.info.law)},
                 {"gamma_hat", r.fit.slope},
                 {"gamma_se", r.fit.slope_se},
                 {"gamma_expected", r.gamma_expected},
                 {"intercept", r.fit.intercept},
                 {"r2", r.fit.r2}});
}

void write_dist_csv(const DistReport& r, const RunContext& ctx) {
  CsvWriter samples(ctx, "dist_samples");
  samples.comment(std::string("reference=") + r.reference +
                  (r.standardized_empirically ? " standardized=empirical"
                                              : " standardized=exact"));
  samples.header({"index", "chi"});
  for (std::size_t i = 0; i < r.chi.size(); ++i)
    samples.row({fmt_int(static_cast<long long>(i)), fmt_double(r.chi[i])});

  CsvWriter q(ctx, "dist_quantiles");
  q.header({"p", "sample", "reference"});
  for (std::size_t i = 0; i < r.quantile_probs.size(); ++i)
    q.row({fmt_double(r.quantile_probs[i]), fmt_double(r.sample_quantiles[i]),
           fmt_double(r.reference_quantiles[i])});

  write_summary(ctx, "dist",
                {{"regime", regime_name(r.info.regime)},
                 {"law", law_name(r.info.law)},
                 {"point", point_json(r.a)},
                 {"reference", r.reference},
                 {"standardized_empirically", r.standardized_empirically},
                 {"n", r.chi.size()},
                 {"ks", r.ks}});
}

void write_projection_csv(const ProjectionReport& r, const RunContext& ctx) {
  CsvWriter pairs(ctx, "projection_pairs");
  pairs.header({"theta", "displaced_x", "displaced_y", "projected_x",
                "projected_y", "tau_displaced", "tau_projected", "corr",
                "corr_low"});
  for (const ProjectionPair& p : r.pairs)
    pairs.row({fmt_double(p.theta), fmt_int(p.displaced.x),
               fmt_int(p.displaced.y), fmt_int(p.projected.x),
               fmt_int(p.projected.y), fmt_double(p.tau_displaced),
               fmt_double(p.tau_projected), fmt_double(p.corr),
               fmt_double(p.corr_low)});

  CsvWriter samples(ctx, "projection_samples");
  samples.header({"theta", "index", "chi_displaced", "chi_projected"});
  for (const ProjectionPair& p : r.pairs)
    for (std::size_t i = 0; i < p.chi_displaced.size(); ++i)
      samples.row({fmt_double(p.theta), fmt_int(static_cast<long long>(i)),
                   fmt_double(p.chi_displaced[i]),
                   fmt_double(p.chi_projected[i])});

  CsvWriter control(ctx, "projection_control");
  control.header({"index", "chi_reference", "chi_control"});
  for (std::size_t i = 0; i < r.chi_reference.size(); ++i)
    control.row({fmt_int(static_cast<long long>(i)),
                 fmt_double(r.chi_reference[i]), fmt_double(r.chi_control[i])});

  json pj = json::array();
  for (const ProjectionPair& p : r.pairs)
    pj.push_back({{"theta", p.theta},
                  {"displaced", point_json(p.displaced)},
                  {"projected", point_json(p.projected)},
                  {"tau_displaced", p.tau_displaced},
                  {"tau_projected", p.tau_projected},
                  {"corr", p.corr},
                  {"corr_low", p.corr_low}});
  write_summary(ctx, "projection",
                {{"t", r.t},
                 {"nu", r.nu},
                 {"reference", point_json(r.reference)},
                 {"control", point_json(r.control)},
                 {"pairs", pj},
                 {"corr_spacelike", r.corr_spacelike},
                 {"corr_spacelike_high", r.corr_spacelike_high}});
}

void write_pasep_csv(const PasepDecorrReport& r, const RunContext& ctx) {
  CsvWriter samples(ctx, "pasep_samples");
  samples.header({"t", "index", "delta", "gap"});
  for (const PasepDecorrPerT& pt : r.per_t)
    for (std::size_t i = 0; i < pt.delta.size(); ++i)
      samples.row({fmt_double(pt.t), fmt_int(static_cast<long long>(i)),
                   fmt_double(pt.delta[i]), fmt_int(pt.gaps[i])});

  write_tails(ctx, "pasep", r.tails);

  json per_t = json::array();
  for (const PasepDecorrPerT& pt : r.per_t)
    per_t.push_back({{"t", pt.t},
                     {"dt", pt.dt},
                     {"x1", pt.x1},
                     {"x2", pt.x2},
                     {"gap_min", pt.gap_min},
                     {"gap_mean", pt.gap_mean},
                     {"gap_max", pt.gap_max},
                     {"gap_sign_violations", pt.gap_sign_violations},
                     {"scaled_neg_gap_mean", pt.scaled_neg_gap_mean},
                     {"corr12", pt.corr12}});
  write_summary(ctx, "pasep",
                {{"bias", r.bias},
                 {"nu", r.nu},
                 {"per_t", per_t},
                 {"tails", tails_json(r.tails)}});
}

void write_polymer_csv(const PolymerDecorrReport& r, const RunContext& ctx) {
  CsvWriter samples(ctx, "polymer_samples");
  samples.comment("delta column is centered by its per-t sample mean");
  samples.header({"t", "index", "delta", "gap"});
  for (const PolymerDecorrPerT& pt : r.per_t)
    for (std::size_t i = 0; i < pt.delta.size(); ++i)
      samples.row({fmt_double(pt.t), fmt_int(static_cast<long long>(i)),
                   fmt_double(pt.delta[i]), fmt_double(pt.gaps[i])});

  write_tails(ctx, "polymer", r.tails);

  json per_t = json::array();
  for (const PolymerDecorrPerT& pt : r.per_t)
    per_t.push_back({{"t", pt.t},
                     {"a", point_json(pt.a)},
                     {"b", point_json(pt.b)},
                     {"gap_min", pt.gap_min},
                     {"gap_mean", pt.gap_mean},
                     {"gap_max", pt.gap_max},
                     {"gap_sign_violations", pt.gap_sign_violations},
                     {"scaled_gap_mean", pt.scaled_gap_mean},
                     {"corr12", pt.corr12}});
  write_summary(ctx, "polymer",
                {{"beta", r.beta},
                 {"nu", r.nu},
                 {"empirical_centering", r.empirical_centering},
                 {"per_t", per_t},
                 {"tails", tails_json(r.tails)}});
}

}  // namespace kpz
