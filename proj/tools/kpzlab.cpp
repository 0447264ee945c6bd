// kpzlab: growth-model experiment runner and self-check harness.
//
//   kpzlab run --config cfg.json [--seed N] [--out DIR] [--workers K]
//   kpzlab verify [--suite fast|full] [--workers K]
//
// Exit codes: 0 success, 1 failed check, 2 bad configuration or usage,
// 3 domain violation, 4 accuracy failure.  KPZLAB_OUT overrides the default
// output directory when --out is not given.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kpz/config.hpp"
#include "kpz/environment.hpp"
#include "kpz/errors.hpp"
#include "kpz/experiments.hpp"
#include "kpz/models.hpp"
#include "kpz/report.hpp"
#include "kpz/theory.hpp"
#include "kpz/verify.hpp"

namespace {

using namespace kpz;

std::string model_label(const ModelSpec& m) {
  switch (m.id) {
    case ModelId::CornerGrowthStep:
      return "corner-growth";
    case ModelId::TwoSidedBoundaryLpp: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "two-sided(pi=%g, eta=%g)", m.pi, m.eta);
      return buf;
    }
    default:
      return "custom";
  }
}

std::string point_str(Point p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
}

std::string point2d_str(Point2d p) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%g, %g)", p.x, p.y);
  return buf;
}

void print_provenance(const RunContext& ctx) {
  std::printf("  config hash  %s\n", ctx.config_hash.c_str());
  std::printf("  seed         %llu\n",
              static_cast<unsigned long long>(ctx.seed));
  std::printf("  output       %s\n", ctx.run_dir().c_str());
}

// The classification cases, numbered in reading order: 1 covers the bulk
// regime regardless of the limit law; 2/3 are the column/row pins when the
// boundary rates sum to at least one, 4/5 the same pins below that line, and
// 6 the shock point where they tie.
int case_number(const CharacteristicInfo& info, const ModelSpec& m) {
  const bool fan = m.pi + m.eta >= 1.0;
  switch (info.regime) {
    case GrowthRegime::Bulk:
      return 1;
    case GrowthRegime::ColumnPinned:
      return fan ? 2 : 4;
    case GrowthRegime::RowPinned:
      return fan ? 3 : 5;
    case GrowthRegime::ShockPoint:
      return 6;
  }
  return 0;
}

void print_info(const CharacteristicInfo& info, const ModelSpec& m) {
  std::printf("  case         %d (%s, %s limit)\n", case_number(info, m),
              regime_name(info.regime), law_name(info.law));
  std::printf("  ray          p = %s, ell = %g, gamma = %g\n",
              point2d_str(info.p).c_str(), info.ell, info.gamma);
  std::printf("  step ray     u = %s, ell = %g, gamma = %g\n",
              point2d_str(info.u).c_str(), info.ell_step, info.gamma_step);
  std::printf("  two-time     %s, nu < %g\n",
              info.slow_decorrelation ? "slow decorrelation" : "no limit",
              info.nu_max);
}

void print_tails(const std::vector<TailPoint>& tails) {
  std::printf("  %-10s %-8s %-12s %s\n", "t", "m", "tail", "se");
  for (const TailPoint& tp : tails)
    std::printf("  %-10g %-8g %-12.5f %.5f\n", tp.t, tp.m, tp.phat, tp.se);
}

void summarize_decorr(const DecorrReport& r, const ModelSpec& m) {
  print_info(r.info, m);
  if (r.used_ray_override)
    std::printf("  override     displacement along %s\n",
                point2d_str(r.ray).c_str());
  std::printf("  nu           %g%s\n", r.nu,
              r.scale_empirical ? " (empirical scale)" : "");
  std::printf("  %-10s %-14s %-14s %-9s %-10s %s\n", "t", "a", "b", "corr12",
              "gap mean", "gap sign bad");
  for (const DecorrPerT& p : r.per_t)
    std::printf("  %-10g %-14s %-14s %-9.4f %-10.4g %lld\n", p.t,
                point_str(p.a).c_str(), point_str(p.b).c_str(), p.corr12,
                p.gap_mean, p.gap_sign_violations);
  print_tails(r.tails);
}

void summarize_exponent(const ExponentReport& r, const ModelSpec& m) {
  print_info(r.info, m);
  std::printf("  %-10s %-14s %s\n", "t", "endpoint", "sd");
  for (std::size_t i = 0; i < r.t_values.size(); ++i)
    std::printf("  %-10g %-14s %.5g\n", r.t_values[i],
                point_str(r.points[i]).c_str(), r.sds[i]);
  std::printf("  fitted gamma %.4f +- %.4f (expected %g)\n", r.fit.slope,
              r.fit.slope_se, r.gamma_expected);
}

void summarize_dist(const DistReport& r, const ModelSpec& m) {
  print_info(r.info, m);
  std::printf("  endpoint     %s, n = %zu\n", point_str(r.a).c_str(),
              r.chi.size());
  std::printf("  reference    %s%s\n", r.reference.c_str(),
              r.standardized_empirically ? " (empirical standardization)" : "");
  std::printf("  ks           %.5f\n", r.ks);
  std::printf("  %-10s %-12s %s\n", "prob", "sample", "reference");
  for (std::size_t i = 0; i < r.quantile_probs.size(); i += 24)
    std::printf("  %-10g %-12.5f %.5f\n", r.quantile_probs[i],
                r.sample_quantiles[i], r.reference_quantiles[i]);
}

void summarize_projection(const ProjectionReport& r) {
  std::printf("  t = %g, nu = %g, reference %s, control %s\n", r.t, r.nu,
              point_str(r.reference).c_str(), point_str(r.control).c_str());
  std::printf("  %-8s %-14s %-14s %-9s %s\n", "theta", "displaced",
              "projected", "corr", "corr low");
  for (const ProjectionPair& p : r.pairs)
    std::printf("  %-8g %-14s %-14s %-9.4f %.4f\n", p.theta,
                point_str(p.displaced).c_str(),
                point_str(p.projected).c_str(), p.corr, p.corr_low);
  std::printf("  spacelike    corr %.4f (upper bound %.4f)\n",
              r.corr_spacelike, r.corr_spacelike_high);
}

void summarize_pasep(const PasepDecorrReport& r) {
  std::printf("  bias         %g, nu = %g\n", r.bias, r.nu);
  std::printf("  %-10s %-8s %-8s %-8s %-9s %-10s %s\n", "t", "dt", "x1", "x2",
              "corr12", "gap mean", "gap sign bad");
  for (const PasepDecorrPerT& p : r.per_t)
    std::printf("  %-10g %-8g %-8d %-8d %-9.4f %-10.4g %lld\n", p.t, p.dt,
                p.x1, p.x2, p.corr12, p.gap_mean, p.gap_sign_violations);
  print_tails(r.tails);
}

void summarize_polymer(const PolymerDecorrReport& r) {
  std::printf("  beta         %g, nu = %g (empirical centering)\n", r.beta,
              r.nu);
  std::printf("  %-10s %-14s %-14s %-9s %-10s %s\n", "t", "a", "b", "corr12",
              "gap mean", "gap sign bad");
  for (const PolymerDecorrPerT& p : r.per_t)
    std::printf("  %-10g %-14s %-14s %-9.4f %-10.4g %lld\n", p.t,
                point_str(p.a).c_str(), point_str(p.b).c_str(), p.corr12,
                p.gap_mean, p.gap_sign_violations);
  print_tails(r.tails);
}

void write_classify_json(const CharacteristicInfo& info, const ModelSpec& m,
                         double kappa, const RunContext& ctx) {
  nlohmann::json doc;
  doc["schema_version"] = 1;
  doc["config_hash"] = ctx.config_hash;
  doc["seed"] = ctx.seed;
  doc["model"] = model_label(m);
  doc["kappa"] = kappa;
  doc["case"] = case_number(info, m);
  doc["regime"] = regime_name(info.regime);
  doc["law"] = law_name(info.law);
  doc["p"] = {info.p.x, info.p.y};
  doc["ell"] = info.ell;
  doc["gamma"] = info.gamma;
  doc["u"] = {info.u.x, info.u.y};
  doc["ell_step"] = info.ell_step;
  doc["gamma_step"] = info.gamma_step;
  doc["slow_decorrelation"] = info.slow_decorrelation;
  doc["nu_max"] = info.nu_max;
  doc["kappa_column"] = info.kappa_column;
  doc["kappa_row"] = info.kappa_row;
  doc["kappa_shock"] = info.kappa_shock;
  write_text_file(ctx.run_dir() + "/classify.json", doc.dump(2) + "\n");
}

void run_classify(const RunPlan& plan) {
  const ModelSpec& m = plan.classify.model;
  const CharacteristicInfo info =
      classify_two_sided(m.pi, m.eta, plan.classify.kappa);
  const RunContext ctx = plan.context();
  std::printf("classify: %s at kappa = %g\n", model_label(m).c_str(),
              plan.classify.kappa);
  print_provenance(ctx);
  print_info(info, m);
  std::printf("  thresholds   column %g, row %g, shock %g\n",
              info.kappa_column, info.kappa_row, info.kappa_shock);
  write_classify_json(info, m, plan.classify.kappa, ctx);
  std::printf("  wrote        %s/classify.json\n", ctx.run_dir().c_str());
}

void run_shape(const RunPlan& plan) {
  const RunContext ctx = plan.context();
  std::printf("shape: corner limit shape at %zu velocities\n",
              plan.shape.v_values.size());
  print_provenance(ctx);
  CsvWriter csv(ctx, "shape");
  csv.header({"v", "height"});
  for (double v : plan.shape.v_values)
    csv.row({fmt_double(v), fmt_double(corner_limit_shape(v))});
  const std::size_t stride =
      plan.shape.v_values.size() > 8 ? plan.shape.v_values.size() / 8 : 1;
  std::printf("  %-10s %s\n", "v", "height");
  for (std::size_t i = 0; i < plan.shape.v_values.size(); i += stride)
    std::printf("  %-10g %.6f\n", plan.shape.v_values[i],
                corner_limit_shape(plan.shape.v_values[i]));
  std::printf("  wrote        %s\n", csv.path().c_str());
}

void execute(const RunPlan& plan) {
  const RunContext ctx = plan.context();
  switch (plan.id) {
    case ExperimentId::Decorr: {
      std::printf("decorr: two-time comparison, %s\n",
                  model_label(plan.decorr.model).c_str());
      print_provenance(ctx);
      const DecorrReport r = run_decorrelation(plan.decorr);
      summarize_decorr(r, plan.decorr.model);
      write_decorr_csv(r, ctx, experiment_name(plan.id));
      break;
    }
    case ExperimentId::OffChar: {
      std::printf("off-char: displaced-ray control, %s\n",
                  model_label(plan.decorr.model).c_str());
      print_provenance(ctx);
      const DecorrReport r = run_off_characteristic_control(plan.decorr);
      summarize_decorr(r, plan.decorr.model);
      write_decorr_csv(r, ctx, experiment_name(plan.id));
      break;
    }
    case ExperimentId::Exponent: {
      std::printf("exponent: fluctuation growth fit, %s\n",
                  model_label(plan.exponent.model).c_str());
      print_provenance(ctx);
      const ExponentReport r = run_exponent_fit(plan.exponent);
      summarize_exponent(r, plan.exponent.model);
      write_exponent_csv(r, ctx);
      break;
    }
    case ExperimentId::Dist: {
      std::printf("dist: one-point law, %s\n",
                  model_label(plan.dist.model).c_str());
      print_provenance(ctx);
      const DistReport r = run_distribution_test(plan.dist);
      summarize_dist(r, plan.dist.model);
      write_dist_csv(r, ctx);
      break;
    }
    case ExperimentId::Projection: {
      std::printf("projection: time-displacement transfer\n");
      print_provenance(ctx);
      const ProjectionReport r = run_projection_experiment(plan.projection);
      summarize_projection(r);
      write_projection_csv(r, ctx);
      break;
    }
    case ExperimentId::Pasep: {
      std::printf("pasep: coupled two-time comparison\n");
      print_provenance(ctx);
      const PasepDecorrReport r = run_pasep_decorrelation(plan.pasep);
      summarize_pasep(r);
      write_pasep_csv(r, ctx);
      break;
    }
    case ExperimentId::Polymer: {
      std::printf("polymer: free-energy two-time comparison\n");
      print_provenance(ctx);
      const PolymerDecorrReport r = run_polymer_decorrelation(plan.polymer);
      summarize_polymer(r);
      write_polymer_csv(r, ctx);
      break;
    }
    case ExperimentId::Classify:
      run_classify(plan);
      break;
    case ExperimentId::Shape:
      run_shape(plan);
      break;
  }
}

int run_verify(const std::string& suite, int workers) {
  if (suite != "fast" && suite != "full") {
    std::fprintf(stderr, "unknown suite '%s' (choose fast or full)\n",
                 suite.c_str());
    return 2;
  }
  const SuiteResult s =
      suite == "fast" ? run_fast_suite(workers) : run_full_suite(workers);
  for (const CriterionResult& r : s.results)
    std::printf("%-24s %s  %8.2fs  %s\n", r.id.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
  std::printf("%s suite: %s\n", suite.c_str(),
              s.all_pass() ? "PASS" : "FAIL");
  return s.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growth-model experiment workbench"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  int workers = 0;
  CLI::App* run = app.add_subcommand("run", "run one configured experiment");
  run->add_option("--config", config_path, "JSON experiment config")
      ->required();
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "override the config seed");
  CLI::Option* out_opt =
      run->add_option("--out", out_dir, "output directory (default: runs)");
  CLI::Option* workers_opt =
      run->add_option("--workers", workers, "override the worker count");

  std::string suite = "fast";
  int verify_workers = 1;
  CLI::App* verify =
      app.add_subcommand("verify", "run a self-check suite (fast or full)");
  verify->add_option("--suite", suite, "fast: oracles and invariants; "
                                       "full: statistical acceptance");
  verify->add_option("--workers", verify_workers, "worker count");

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) return run_verify(suite, verify_workers);

  try {
    RunPlan plan = load_run_plan(config_path);
    if (seed_opt->count() > 0) plan.set_seed(seed);
    if (workers_opt->count() > 0) plan.set_workers(workers);
    if (out_opt->count() > 0) {
      plan.out_dir = out_dir;
    } else if (const char* env = std::getenv("KPZLAB_OUT")) {
      plan.out_dir = env;
    }
    execute(plan);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return 3;
  } catch (const AccuracyError& e) {
    std::fprintf(stderr, "accuracy error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
