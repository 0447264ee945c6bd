#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "doctest.h"
#include "kpz/errors.hpp"
#include "kpz/refdist.hpp"

using namespace kpz;

namespace {

std::string temp_file(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_table(const std::string& path, const std::vector<double>& xs,
                 const std::vector<double>& ys) {
  std::ofstream out(path);
  out << "# s  goe_cdf(s)\n";
  out << std::setprecision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out << xs[i] << " " << ys[i] << "\n";
  }
}

}  // namespace

TEST_SUITE("refdist") {

TEST_CASE("airy function values") {
  CHECK(airy_ai(0.0) == doctest::Approx(0.3550280538878172).epsilon(1e-10));
  CHECK(airy_ai_deriv(0.0) ==
        doctest::Approx(-0.2588194037928068).epsilon(1e-10));
  CHECK(airy_ai(1.0) == doctest::Approx(0.1352924163128814).epsilon(1e-10));
  CHECK(airy_ai(-5.0) == doctest::Approx(0.3507610090241142).epsilon(1e-9));
  // Second derivative from a central stencil satisfies Ai'' = x Ai.
  const double h = 0.02;
  const double dd = (airy_ai(1.0 - h) - 2.0 * airy_ai(1.0) + airy_ai(1.0 + h)) / (h * h);
  CHECK(dd == doctest::Approx(1.0 * airy_ai(1.0)).epsilon(1e-4));
  CHECK_THROWS_AS((void)airy_ai(-16.0), DomainError);
  CHECK_THROWS_AS((void)airy_ai_deriv(31.0), DomainError);
}

TEST_CASE("gue cdf values and stability") {
  CHECK(tw_gue_cdf(0.0) == doctest::Approx(0.969372828355).epsilon(1e-8));
  CHECK(std::fabs(tw_gue_cdf(0.0, 40) - tw_gue_cdf(0.0, 80)) <= 1e-8);
  CHECK(tw_gue_cdf(-10.0) <= 1e-9);
  CHECK(tw_gue_cdf(4.0) >= 1.0 - 1e-9);
  double prev = 0.0;
  for (double s = -6.0; s <= 3.0; s += 0.75) {
    const double f = tw_gue_cdf(s);
    CHECK(f >= prev);
    prev = f;
  }
  CHECK_THROWS_AS((void)tw_gue_cdf(-11.0), DomainError);
  CHECK_THROWS_AS((void)tw_gue_cdf(0.0, 10), DomainError);
}

TEST_CASE("goe cdf value") {
  CHECK(tw_goe_cdf(0.0) == doctest::Approx(0.831908066203).epsilon(1e-8));
  CHECK_THROWS_AS((void)tw_goe_cdf(7.0), DomainError);
}

TEST_CASE("gue moments") {
  const TwMoments m = tw_gue_moments();
  CHECK(m.mean == doctest::Approx(-1.7710868).epsilon(2e-3));
  CHECK(m.sd == doctest::Approx(0.9017731).epsilon(2e-3));
  CHECK_THROWS_AS((void)tw_gue_moments(8), DomainError);
}

TEST_CASE("gaussian cdf") {
  CHECK(gaussian_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(gaussian_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-10));
  CHECK(gaussian_cdf(3.0, 3.0, 5.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(gaussian_cdf(-1.0) + gaussian_cdf(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)gaussian_cdf(0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("closed reference family") {
  const RefDist gue = RefDist::gue();
  CHECK(gue.name() == "tw-gue");
  CHECK(gue.cdf(-11.0) == 0.0);
  CHECK(gue.cdf(6.5) == 1.0);
  CHECK(gue.cdf(0.0) == doctest::Approx(0.969372828355).epsilon(1e-8));

  const RefDist g = RefDist::gaussian(1.0, 2.0);
  CHECK(g.name() == "gaussian");
  CHECK(g.cdf(1.0) == doctest::Approx(0.5));
  CHECK(g.quantile(0.975) == doctest::Approx(1.0 + 2.0 * 1.959963984540054).epsilon(1e-7));
  CHECK_THROWS_AS((void)g.quantile(0.0), DomainError);
  CHECK_THROWS_AS((void)g.quantile(1.0), DomainError);
  CHECK_THROWS_AS((void)RefDist::gaussian(0.0, -1.0), DomainError);

  const RefDist m2 = RefDist::max_two_gaussians(0.0, 1.0, 0.0, 1.0);
  CHECK(m2.name() == "max-two-gaussians");
  CHECK(m2.cdf(0.0) == doctest::Approx(0.25));
  CHECK(m2.quantile(0.25) == doctest::Approx(0.0).epsilon(1e-7));
  // Mixed means: the law is the product of the two marginal cdfs.
  const RefDist mshift = RefDist::max_two_gaussians(-1.0, 1.0, 2.0, 0.5);
  CHECK(mshift.cdf(0.5) ==
        doctest::Approx(gaussian_cdf(0.5, -1.0, 1.0) * gaussian_cdf(0.5, 2.0, 0.5)));

  const double q = gue.quantile(0.3);
  CHECK(gue.cdf(q) == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("squared goe table round trip") {
  const std::vector<double> xs = {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0};
  std::vector<double> ys;
  for (double s : xs) ys.push_back(tw_goe_cdf(s));
  const std::string path = temp_file("kpz-refdist-goe.txt");
  write_table(path, xs, ys);

  const RefDist ref = RefDist::goe_squared(path);
  CHECK(ref.name() == "goe-squared");
  CHECK(ref.cdf(0.0) == doctest::Approx(ys[3] * ys[3]).epsilon(1e-12));
  const double mid = 0.5 * (ys[2] + ys[3]);
  CHECK(ref.cdf(-0.5) == doctest::Approx(mid * mid).epsilon(1e-12));
  CHECK(ref.cdf(-9.0) == doctest::Approx(ys[0] * ys[0]).epsilon(1e-12));
  CHECK(ref.cdf(5.0) == doctest::Approx(ys[5] * ys[5]).epsilon(1e-12));
  const double q = ref.quantile(0.5);
  CHECK(ref.cdf(q) == doctest::Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_AS((void)RefDist::goe_squared(temp_file("kpz-no-such-table.txt")),
                  ConfigError);
  const std::string bad = temp_file("kpz-refdist-bad.txt");
  {
    std::ofstream out(bad);
    out << "0.0 0.5\nnot a number\n";
  }
  CHECK_THROWS_AS((void)RefDist::goe_squared(bad), ConfigError);
  {
    std::ofstream out(bad);
    out << "0.0 0.5\n-1.0 0.25\n";
  }
  CHECK_THROWS_AS((void)RefDist::goe_squared(bad), ConfigError);
  {
    std::ofstream out(bad);
    out << "0.0 0.5\n";
  }
  CHECK_THROWS_AS((void)RefDist::goe_squared(bad), ConfigError);
  std::remove(path.c_str());
  std::remove(bad.c_str());
}

TEST_CASE("empirical references") {
  const RefDist e = RefDist::empirical({3.0, 1.0, 2.0});
  CHECK(e.is_empirical());
  CHECK(e.name() == "empirical");
  REQUIRE(e.sample().size() == 3);
  CHECK(e.sample()[0] == 1.0);
  CHECK(e.sample()[2] == 3.0);
  CHECK(e.cdf(0.5) == doctest::Approx(0.0));
  CHECK(e.cdf(1.0) == doctest::Approx(1.0 / 3.0));
  CHECK(e.cdf(2.5) == doctest::Approx(2.0 / 3.0));
  CHECK(e.cdf(5.0) == doctest::Approx(1.0));
  CHECK(e.quantile(0.5) == doctest::Approx(2.0));
  CHECK(e.quantile(0.2) == doctest::Approx(1.0));
  CHECK(e.quantile(0.99) == doctest::Approx(3.0));
  CHECK_THROWS_AS((void)RefDist::empirical({}), DomainError);
}

TEST_CASE("kolmogorov-smirnov distances") {
  CHECK(ks_statistic({0.0}, RefDist::gaussian(0.0, 1.0)) == doctest::Approx(0.5));
  const RefDist self = RefDist::empirical({1.0, 2.0, 3.0, 4.0});
  CHECK(ks_statistic({1.0, 2.0, 3.0, 4.0}, self) == doctest::Approx(0.0));
  CHECK(ks_statistic({1.0, 3.0}, RefDist::empirical({2.0, 4.0})) ==
        doctest::Approx(0.5));
  CHECK(ks_statistic({2.0, 4.0}, RefDist::empirical({1.0, 3.0})) ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS((void)ks_statistic({}, RefDist::gaussian(0.0, 1.0)),
                  DomainError);
}

}  // TEST_SUITE
