#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "kpz/errors.hpp"
#include "kpz/experiments.hpp"
#include "kpz/models.hpp"
#include "kpz/pasep.hpp"
#include "kpz/refdist.hpp"
#include "kpz/report.hpp"
#include "kpz/theory.hpp"

using namespace kpz;

namespace {

DecorrConfig small_decorr(std::vector<double> ts, std::size_t n,
                          std::uint64_t seed) {
  DecorrConfig cfg;
  cfg.model = ModelSpec::corner_growth();
  cfg.t_values = std::move(ts);
  cfg.samples = n;
  cfg.seed = seed;
  return cfg;
}

double vec_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("zero-weight debug run pins the centering bookkeeping") {
  DecorrConfig cfg = small_decorr({256.0}, 40, 7);
  cfg.debug_zero_weights = true;

  const DecorrReport rep = run_decorrelation(cfg);
  REQUIRE(rep.per_t.size() == 1);
  const DecorrPerT& pt = rep.per_t[0];

  CHECK(pt.a == Point{64, 64});
  CHECK(pt.b == Point{68, 68});
  CHECK(rep.used_ray_override == false);
  CHECK(rep.scale_empirical == false);
  CHECK(rep.info.regime == GrowthRegime::Bulk);

  // Every weight is zero, so both passage values vanish and delta reduces to
  // minus the displacement shape pp_shape(4, 4) = 16, with a zero junction gap.
  REQUIRE(pt.delta.size() == 40);
  for (double d : pt.delta) CHECK(d == -16.0);
  for (double g : pt.gaps) CHECK(g == 0.0);
  CHECK(pt.gap_sign_violations == 0);
  CHECK(pt.gap_mean == 0.0);
  CHECK(pt.scaled_gap_mean == 0.0);
  CHECK(pt.corr12 == 0.0);
  CHECK(pt.nu_achieved == doctest::Approx(0.5).epsilon(1e-12));

  const double chi1_expected =
      (0.0 - boundary_shape(1.0, 1.0, 65.0, 65.0)) / pp_scale(65.0, 65.0);
  const double chi3_expected = (0.0 - pp_shape(4.0, 4.0)) / pp_scale(4.0, 4.0);
  CHECK(pt.chi1[0] == chi1_expected);
  CHECK(pt.chi1[17] == chi1_expected);
  CHECK(pt.chi3[3] == chi3_expected);

  // |delta| = 16 clears the threshold m * t^{1/3} = 256^{1/3} for every sample.
  REQUIRE(rep.tails.size() == 1);
  CHECK(rep.tails[0].phat == 1.0);
  CHECK(rep.tails[0].se == 0.0);
}

TEST_CASE("decorrelation points follow the characteristic ray") {
  DecorrConfig cfg = small_decorr({64.0, 128.0}, 12, 3);
  cfg.thresholds = {0.5, 1.0};

  const DecorrReport rep = run_decorrelation(cfg);
  REQUIRE(rep.per_t.size() == 2);

  CHECK(rep.per_t[0].a == Point{16, 16});
  CHECK(rep.per_t[0].b == Point{18, 18});
  CHECK(rep.per_t[1].a == Point{32, 32});
  CHECK(rep.per_t[1].b == Point{35, 35});
  CHECK(rep.per_t[0].nu_achieved ==
        doctest::Approx(std::log(16.0) / std::log(64.0)));

  // Superadditivity of max-plus passage times holds up to roundoff; when the
  // best path to b happens to pass through a the defect is an exact zero and
  // floating-point reassociation can land a hair below it.
  for (const DecorrPerT& pt : rep.per_t) {
    CHECK(pt.gap_sign_violations == 0);
    CHECK(pt.gap_min >= -1e-6);
    CHECK(pt.chi1.size() == 12);
    CHECK(pt.corr12 >= -1.0);
    CHECK(pt.corr12 <= 1.0);
  }

  REQUIRE(rep.tails.size() == 4);
  CHECK(rep.tails[0].t == 64.0);
  CHECK(rep.tails[0].m == 0.5);
  CHECK(rep.tails[1].t == 64.0);
  CHECK(rep.tails[1].m == 1.0);
  CHECK(rep.tails[2].t == 128.0);
  CHECK(rep.tails[3].t == 128.0);
  for (const TailPoint& tp : rep.tails) {
    CHECK(tp.phat >= 0.0);
    CHECK(tp.phat <= 1.0);
    CHECK(tp.se >= 0.0);
  }
}

TEST_CASE("worker counts do not change the sample stream") {
  DecorrConfig cfg = small_decorr({64.0}, 30, 11);
  DecorrConfig cfg3 = cfg;
  cfg3.workers = 3;

  const DecorrReport r1 = run_decorrelation(cfg);
  const DecorrReport r3 = run_decorrelation(cfg3);
  REQUIRE(r1.per_t.size() == 1);
  REQUIRE(r3.per_t.size() == 1);
  CHECK(r1.per_t[0].delta == r3.per_t[0].delta);
  CHECK(r1.per_t[0].chi1 == r3.per_t[0].chi1);
  CHECK(r1.per_t[0].gaps == r3.per_t[0].gaps);
  CHECK(r1.per_t[0].corr12 == r3.per_t[0].corr12);
  REQUIRE(r1.tails.size() == r3.tails.size());
  CHECK(r1.tails[0].phat == r3.tails[0].phat);

  ExponentConfig e1;
  e1.t_values = {4.0, 8.0, 16.0, 40.0};
  e1.samples = 16;
  e1.seed = 5;
  ExponentConfig e3 = e1;
  e3.workers = 3;
  const ExponentReport x1 = run_exponent_fit(e1);
  const ExponentReport x3 = run_exponent_fit(e3);
  CHECK(x1.sds == x3.sds);
  CHECK(x1.fit.slope == x3.fit.slope);
}

TEST_CASE("decorrelation validation separates schema from domain errors") {
  CHECK_THROWS_AS(run_decorrelation(small_decorr({}, 10, 1)), ConfigError);
  CHECK_THROWS_AS(run_decorrelation(small_decorr({4.0}, 10, 1)), ConfigError);
  CHECK_THROWS_AS(run_decorrelation(small_decorr({64.0}, 1, 1)), ConfigError);

  DecorrConfig bad = small_decorr({64.0}, 4, 1);
  bad.nu = 0.0;
  CHECK_THROWS_AS(run_decorrelation(bad), ConfigError);
  bad.nu = 1.0;
  CHECK_THROWS_AS(run_decorrelation(bad), ConfigError);

  DecorrConfig badk = small_decorr({64.0}, 4, 1);
  badk.kappa = 0.0;
  CHECK_THROWS_AS(run_decorrelation(badk), ConfigError);

  DecorrConfig badm = small_decorr({64.0}, 4, 1);
  badm.thresholds = {};
  CHECK_THROWS_AS(run_decorrelation(badm), ConfigError);
  badm.thresholds = {-1.0};
  CHECK_THROWS_AS(run_decorrelation(badm), ConfigError);

  // The shock ray has no two-time limit: running it demands both an explicit
  // opt-in and a ray override, and refusing those is a domain error, not a
  // schema error.
  DecorrConfig shock = small_decorr({16.0}, 4, 21);
  shock.model = ModelSpec::two_sided(0.2, 0.2);
  CHECK_THROWS_AS(run_decorrelation(shock), DomainError);
  shock.allow_no_limit = true;
  CHECK_THROWS_AS(run_decorrelation(shock), DomainError);
  shock.has_ray_override = true;
  shock.ray_override = Point2d{1.0, 1.0};
  const DecorrReport srep = run_decorrelation(shock);
  CHECK(srep.info.regime == GrowthRegime::ShockPoint);
  CHECK(srep.used_ray_override == true);
  CHECK(srep.per_t[0].a == Point{3, 3});
  CHECK(srep.per_t[0].b == Point{4, 4});
  CHECK(srep.per_t[0].gap_sign_violations == 0);

  // A steep pinned ray rounds the base point onto an axis at small t.
  DecorrConfig steep = small_decorr({16.0}, 4, 1);
  steep.model = ModelSpec::two_sided(0.7, 0.5);
  steep.kappa = 0.1;
  CHECK_THROWS_AS(run_decorrelation(steep), DomainError);
}

TEST_CASE("off-characteristic control needs a fast enough clock") {
  DecorrConfig cfg = small_decorr({64.0}, 4, 2);
  cfg.nu = 0.25;
  CHECK_THROWS_AS(run_off_characteristic_control(cfg), DomainError);

  cfg.nu = 0.5;
  cfg.has_ray_override = true;
  cfg.ray_override = Point2d{1.0, 4.0};
  const DecorrReport rep = run_off_characteristic_control(cfg);
  CHECK(rep.used_ray_override == true);
  CHECK(rep.per_t[0].a == Point{16, 16});
  // shift = sqrt(64) / pp_shape(1, 4) = 8/9, so the displacement is (1, 4).
  CHECK(rep.per_t[0].b == Point{17, 20});
}

TEST_CASE("exponent fit validation and the degenerate debug field") {
  ExponentConfig cfg;
  cfg.samples = 4;
  cfg.seed = 9;

  cfg.t_values = {2.0, 4.0, 8.0};
  CHECK_THROWS_AS(run_exponent_fit(cfg), ConfigError);
  cfg.t_values = {2.0, 4.0, 8.0, 16.0};
  CHECK_THROWS_AS(run_exponent_fit(cfg), ConfigError);
  cfg.t_values = {1.0, 4.0, 8.0, 20.0};
  CHECK_THROWS_AS(run_exponent_fit(cfg), ConfigError);

  cfg.t_values = {2.0, 4.0, 8.0, 20.0};
  cfg.samples = 1;
  CHECK_THROWS_AS(run_exponent_fit(cfg), ConfigError);
  cfg.samples = 4;
  cfg.kappa = -1.0;
  CHECK_THROWS_AS(run_exponent_fit(cfg), ConfigError);
  cfg.kappa = 1.0;

  cfg.debug_zero_weights = true;
  CHECK_THROWS_AS(run_exponent_fit(cfg), DomainError);
}

TEST_CASE("exponent fit reads points off the ray and centers the residuals") {
  ExponentConfig cfg;
  cfg.t_values = {2.0, 4.0, 8.0, 20.0};
  cfg.samples = 25;
  cfg.seed = 9;

  const ExponentReport rep = run_exponent_fit(cfg);
  REQUIRE(rep.points.size() == 4);
  CHECK(rep.points[0] == Point{2, 2});
  CHECK(rep.points[3] == Point{20, 20});
  CHECK(rep.gamma_expected == doctest::Approx(1.0 / 3.0));
  for (double sd : rep.sds) CHECK(sd > 0.0);

  double rsum = 0.0;
  for (double r : rep.residuals) rsum += r;
  CHECK(std::fabs(rsum) < 1e-9);
  CHECK(std::isfinite(rep.fit.slope));
  CHECK(rep.fit.r2 <= 1.0);

  ExponentConfig pinned = cfg;
  pinned.model = ModelSpec::two_sided(0.7, 0.5);
  pinned.kappa = 1.5;
  pinned.samples = 10;
  const ExponentReport prep = run_exponent_fit(pinned);
  CHECK(prep.gamma_expected == doctest::Approx(0.5));
  CHECK(prep.info.regime == GrowthRegime::ColumnPinned);
}

TEST_CASE("distribution test resolves its reference from the regime") {
  DistConfig cfg;
  cfg.t = 16.0;
  cfg.samples = 12;
  cfg.seed = 5;

  DistConfig bad = cfg;
  bad.t = 7.0;
  CHECK_THROWS_AS(run_distribution_test(bad), ConfigError);
  bad = cfg;
  bad.samples = 9;
  CHECK_THROWS_AS(run_distribution_test(bad), ConfigError);
  bad = cfg;
  bad.kappa = -2.0;
  CHECK_THROWS_AS(run_distribution_test(bad), ConfigError);
  bad = cfg;
  bad.reference = "weird";
  CHECK_THROWS_AS(run_distribution_test(bad), ConfigError);

  const DistReport rep = run_distribution_test(cfg);
  CHECK(rep.reference == "tw-gue");
  CHECK(rep.standardized_empirically == false);
  CHECK(rep.a == Point{16, 16});
  CHECK(rep.chi.size() == 12);
  CHECK(rep.ks > 0.0);
  CHECK(rep.ks <= 1.0);
  REQUIRE(rep.quantile_probs.size() == 9);
  for (std::size_t i = 1; i < 9; ++i) {
    CHECK(rep.sample_quantiles[i] >= rep.sample_quantiles[i - 1]);
    CHECK(rep.reference_quantiles[i] >= rep.reference_quantiles[i - 1]);
  }

  // A pinned direction auto-selects the gaussian reference, which has no
  // closed centering constant and standardizes against the sample itself.
  DistConfig pinned = cfg;
  pinned.model = ModelSpec::two_sided(0.7, 0.5);
  pinned.kappa = 1.5;
  const DistReport grep = run_distribution_test(pinned);
  CHECK(grep.reference == "gaussian");
  CHECK(grep.standardized_empirically == true);
  CHECK(std::fabs(vec_mean(grep.chi)) < 1e-9);
  double ssq = 0.0;
  for (double c : grep.chi) ssq += c * c;
  const double sd = std::sqrt(ssq / static_cast<double>(grep.chi.size() - 1));
  CHECK(sd == doctest::Approx(1.0).epsilon(0.15));

  // The stationary tie has no built-in reference table.
  DistConfig stat = cfg;
  stat.model = ModelSpec::two_sided(0.5, 0.5);
  CHECK_THROWS_AS(run_distribution_test(stat), ConfigError);
}

TEST_CASE("squared-goe reference requires and uses a table") {
  DistConfig cfg;
  cfg.model = ModelSpec::two_sided(2.0 / 3.0, 2.0 / 3.0);
  cfg.kappa = 2.0;
  cfg.t = 16.0;
  cfg.samples = 12;
  cfg.seed = 6;

  // auto resolves to goe-squared here, which cannot run without a table path.
  CHECK_THROWS_AS(run_distribution_test(cfg), ConfigError);

  const std::string path =
      (std::filesystem::temp_directory_path() / "kpz-test-goe-table.txt")
          .string();
  {
    std::ofstream out(path);
    out.precision(17);
    for (int s = -4; s <= 3; ++s)
      out << static_cast<double>(s) << " " << tw_goe_cdf(static_cast<double>(s), 40)
          << "\n";
  }
  cfg.goe_table_path = path;
  const DistReport rep = run_distribution_test(cfg);
  CHECK(rep.reference == "goe-squared");
  CHECK(rep.a == Point{16, 64});
  CHECK(rep.ks >= 0.0);
  CHECK(rep.ks <= 1.0);
  std::filesystem::remove(path);
}

TEST_CASE("projection experiment lattice bookkeeping") {
  ProjectionConfig cfg;
  cfg.t = 64.0;
  cfg.nu = 0.6;
  cfg.tau = 0.3;
  cfg.theta_offsets = {0.5};
  cfg.spacelike_delta = 0.5;
  cfg.samples = 8;
  cfg.control_samples = 6;
  cfg.seed = 2;

  ProjectionConfig bad = cfg;
  bad.t = 32.0;
  CHECK_THROWS_AS(run_projection_experiment(bad), ConfigError);
  bad = cfg;
  bad.nu = 0.0;
  CHECK_THROWS_AS(run_projection_experiment(bad), ConfigError);
  bad = cfg;
  bad.theta_offsets = {};
  CHECK_THROWS_AS(run_projection_experiment(bad), ConfigError);
  bad = cfg;
  bad.spacelike_delta = 0.0;
  CHECK_THROWS_AS(run_projection_experiment(bad), ConfigError);
  bad = cfg;
  bad.samples = 3;
  CHECK_THROWS_AS(run_projection_experiment(bad), ConfigError);
  bad = cfg;
  bad.theta_offsets = {-50.0};
  CHECK_THROWS_AS(run_projection_experiment(bad), DomainError);

  const ProjectionReport rep = run_projection_experiment(cfg);

  const double th0 = theta_fixed_row(cfg.t, cfg.nu, cfg.tau);
  const FrameTriple rf = scaling_frame(cfg.t, cfg.nu, cfg.tau, th0, 0.0);
  CHECK(rep.reference.x == static_cast<int>(rf.x));
  CHECK(rep.reference.y == static_cast<int>(rf.y));
  CHECK(rep.control.x == rep.reference.x + 32);
  CHECK(rep.control.y == rep.reference.y);

  REQUIRE(rep.pairs.size() == 1);
  const ProjectionPair& pair = rep.pairs[0];
  CHECK(pair.theta == 0.5);
  const FrameTriple pf = scaling_frame(cfg.t, cfg.nu, cfg.tau, th0 + 0.5, 0.0);
  CHECK(pair.displaced.x == static_cast<int>(pf.x));
  CHECK(pair.displaced.y == static_cast<int>(pf.y));
  const Point2d pd{static_cast<double>(pair.displaced.x),
                   static_cast<double>(pair.displaced.y)};
  const Projected pr =
      project_to_reference_line(pd, static_cast<double>(rf.y), pd, cfg.t);
  CHECK(pair.projected.x == static_cast<int>(std::llround(pr.x)));
  CHECK(pair.projected.y == rep.reference.y);
  CHECK(pair.tau_projected == pr.tau);
  CHECK(std::isfinite(pair.tau_displaced));

  CHECK(pair.chi_displaced.size() == 8);
  CHECK(pair.chi_projected.size() == 8);
  CHECK(rep.chi_reference.size() == 6);
  CHECK(rep.chi_control.size() == 6);
  CHECK(pair.corr >= -1.0);
  CHECK(pair.corr <= 1.0);
  CHECK(pair.corr_low <= pair.corr + 1e-12);
  CHECK(rep.corr_spacelike_high >= rep.corr_spacelike - 1e-12);
}

TEST_CASE("exclusion decorrelation plumbing and the frozen debug profile") {
  PasepDecorrConfig cfg;
  cfg.t_values = {4.0};
  cfg.samples = 12;
  cfg.seed = 8;

  PasepDecorrConfig bad = cfg;
  bad.p = 0.5;
  CHECK_THROWS_AS(run_pasep_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.p = 1.1;
  CHECK_THROWS_AS(run_pasep_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.ic = PasepIc::flat();
  CHECK_THROWS_AS(run_pasep_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.nu = 1.0;
  CHECK_THROWS_AS(run_pasep_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.u = -1.0;
  CHECK_THROWS_AS(run_pasep_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.margin = 0.9;
  CHECK_THROWS_AS(run_pasep_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.t_values = {1.0};
  CHECK_THROWS_AS(run_pasep_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.samples = 1;
  CHECK_THROWS_AS(run_pasep_decorrelation(bad), ConfigError);

  const PasepDecorrReport rep = run_pasep_decorrelation(cfg);
  REQUIRE(rep.per_t.size() == 1);
  CHECK(rep.bias == doctest::Approx(0.5));
  CHECK(rep.per_t[0].x1 == 0);
  CHECK(rep.per_t[0].x2 == 2);
  CHECK(rep.per_t[0].delta.size() == 12);
  CHECK(rep.per_t[0].gap_sign_violations == 0);
  for (long long g : rep.per_t[0].gaps) CHECK(g <= 0);
  CHECK(rep.per_t[0].corr12 >= -1.0);
  CHECK(rep.per_t[0].corr12 <= 1.0);

  PasepDecorrConfig dbg;
  dbg.p = 0.8;
  dbg.ic = PasepIc::flat();
  dbg.t_values = {4.0, 9.0};
  dbg.thresholds = {0.5};
  dbg.samples = 10;
  dbg.seed = 3;
  dbg.debug_empty = true;
  const PasepDecorrReport drep = run_pasep_decorrelation(dbg);
  REQUIRE(drep.per_t.size() == 2);
  CHECK(drep.bias == doctest::Approx(0.6));
  CHECK(drep.per_t[0].dt == 2.0);
  CHECK(drep.per_t[1].dt == 3.0);
  CHECK(drep.per_t[1].x2 == 3);
  for (const PasepDecorrPerT& pt : drep.per_t) {
    for (double d : pt.delta) CHECK(d == 0.0);
    for (long long g : pt.gaps) CHECK(g == 0);
    CHECK(pt.gap_sign_violations == 0);
    CHECK(pt.scaled_neg_gap_mean == 0.0);
    CHECK(pt.corr12 == 0.0);
  }
  for (const TailPoint& tp : drep.tails) CHECK(tp.phat == 0.0);
}

TEST_CASE("polymer decorrelation centers its differences empirically") {
  PolymerDecorrConfig cfg;
  cfg.beta = 0.75;
  cfg.t_values = {16.0, 32.0};
  cfg.samples = 14;
  cfg.seed = 4;

  PolymerDecorrConfig bad = cfg;
  bad.beta = 0.0;
  CHECK_THROWS_AS(run_polymer_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.p = Point2d{0.0, 1.0};
  CHECK_THROWS_AS(run_polymer_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.u = Point2d{1.0, 0.0};
  CHECK_THROWS_AS(run_polymer_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.nu = 0.0;
  CHECK_THROWS_AS(run_polymer_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.t_values = {1.0};
  CHECK_THROWS_AS(run_polymer_decorrelation(bad), ConfigError);
  bad = cfg;
  bad.samples = 1;
  CHECK_THROWS_AS(run_polymer_decorrelation(bad), ConfigError);

  bad = cfg;
  bad.t_values = {8.0};
  bad.p = Point2d{1.0, 0.01};
  CHECK_THROWS_AS(run_polymer_decorrelation(bad), DomainError);
  bad = cfg;
  bad.t_values = {8.0};
  bad.u = Point2d{1.0, 0.01};
  CHECK_THROWS_AS(run_polymer_decorrelation(bad), DomainError);

  const PolymerDecorrReport rep = run_polymer_decorrelation(cfg);
  CHECK(rep.empirical_centering == true);
  REQUIRE(rep.per_t.size() == 2);
  CHECK(rep.per_t[0].a == Point{16, 16});
  CHECK(rep.per_t[0].b == Point{20, 20});
  CHECK(rep.per_t[1].a == Point{32, 32});
  CHECK(rep.per_t[1].b == Point{38, 38});
  for (const PolymerDecorrPerT& pt : rep.per_t) {
    double dsum = 0.0;
    for (double d : pt.delta) dsum += d;
    CHECK(std::fabs(dsum) < 1e-7);
    // The smoothed junction gap is nonnegative up to roundoff.
    CHECK(pt.gap_sign_violations == 0);
    CHECK(pt.gap_mean >= 0.0);
    CHECK(pt.corr12 >= -1.0);
    CHECK(pt.corr12 <= 1.0);
  }
}

TEST_CASE("csv writers emit the full file set with provenance") {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "kpz-test-csv";
  fs::remove_all(root);

  RunContext ctx;
  ctx.out_dir = root.string();
  ctx.run_id = "case-a";
  ctx.seed = 42;
  ctx.config_hash = "feedc0de12345678";
  ctx.workers = 2;

  {
    DecorrConfig dc = small_decorr({64.0}, 8, 13);
    dc.debug_zero_weights = true;
    write_decorr_csv(run_decorrelation(dc), ctx, "decorr");
  }
  {
    ExponentConfig ec;
    ec.t_values = {2.0, 4.0, 8.0, 20.0};
    ec.samples = 6;
    ec.seed = 13;
    write_exponent_csv(run_exponent_fit(ec), ctx);
  }
  {
    DistConfig sc;
    sc.t = 8.0;
    sc.samples = 10;
    sc.seed = 13;
    sc.reference = "gaussian";
    write_dist_csv(run_distribution_test(sc), ctx);
  }
  {
    ProjectionConfig pc;
    pc.t = 64.0;
    pc.nu = 0.6;
    pc.tau = 0.3;
    pc.theta_offsets = {0.5};
    pc.samples = 4;
    pc.control_samples = 4;
    pc.seed = 13;
    write_projection_csv(run_projection_experiment(pc), ctx);
  }
  {
    PasepDecorrConfig kc;
    kc.t_values = {4.0};
    kc.samples = 4;
    kc.seed = 13;
    kc.debug_empty = true;
    write_pasep_csv(run_pasep_decorrelation(kc), ctx);
  }
  {
    PolymerDecorrConfig yc;
    yc.t_values = {16.0};
    yc.samples = 4;
    yc.seed = 13;
    write_polymer_csv(run_polymer_decorrelation(yc), ctx);
  }

  const fs::path dir = root / "case-a";
  const char* expected[] = {
      "decorr_samples.csv",     "decorr_tails.csv",
      "decorr_summary.json",    "exponent_fit.csv",
      "exponent_summary.json",  "dist_samples.csv",
      "dist_quantiles.csv",     "dist_summary.json",
      "projection_pairs.csv",   "projection_samples.csv",
      "projection_control.csv", "projection_summary.json",
      "pasep_samples.csv",      "pasep_tails.csv",
      "pasep_summary.json",     "polymer_samples.csv",
      "polymer_tails.csv",      "polymer_summary.json",
  };
  for (const char* name : expected) {
    INFO("missing ", name);
    CHECK(fs::exists(dir / name));
  }

  std::string head;
  REQUIRE(read_text_file((dir / "decorr_samples.csv").string(), &head));
  CHECK(head.find("# config_hash=feedc0de12345678\n") == 0);
  CHECK(head.find("# seed=42\n") != std::string::npos);

  std::string body;
  REQUIRE(read_text_file((dir / "dist_summary.json").string(), &body));
  const nlohmann::json doc = nlohmann::json::parse(body);
  CHECK(doc.at("config_hash").get<std::string>() == "feedc0de12345678");
  CHECK(doc.at("seed").get<std::uint64_t>() == 42);
  CHECK(doc.at("experiment").get<std::string>() == "dist");
  CHECK(doc.at("reference").get<std::string>() == "gaussian");

  std::string pbody;
  REQUIRE(read_text_file((dir / "projection_summary.json").string(), &pbody));
  const nlohmann::json pj = nlohmann::json::parse(pbody);
  CHECK(pj.at("pairs").size() == 1);

  fs::remove_all(root);
}

}  // TEST_SUITE
