#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kpz/environment.hpp"

using namespace kpz;

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::vector<double> grid_weights(const WeightField& f, int nx, int ny) {
  std::vector<double> out;
  out.reserve(static_cast<size_t>(nx) * static_cast<size_t>(ny));
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) out.push_back(f.weight(i, j));
  return out;
}

bool same_points(std::vector<Point2d> a, std::vector<Point2d> b) {
  auto lt = [](const Point2d& p, const Point2d& q) {
    return p.x != q.x ? p.x < q.x : p.y < q.y;
  };
  std::sort(a.begin(), a.end(), lt);
  std::sort(b.begin(), b.end(), lt);
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].x != b[i].x || a[i].y != b[i].y) return false;
  return true;
}

}  // namespace

TEST_SUITE("environment") {

TEST_CASE("weights are a pure function of seed and site") {
  const WeightField a(42, Support::Quadrant, BulkSpec::exponential());
  const WeightField b(42, Support::Quadrant, BulkSpec::exponential());
  const WeightField c(43, Support::Quadrant, BulkSpec::exponential());
  int differs = 0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      CHECK(a.weight(i, j) == b.weight(i, j));
      differs += a.weight(i, j) != c.weight(i, j);
    }
  CHECK(differs > 390);
}

TEST_CASE("exponential bulk has positive weights with the right mean") {
  const WeightField f(7, Support::Quadrant, BulkSpec::exponential());
  const std::vector<double> w = grid_weights(f, 50, 50);
  for (double x : w) CHECK(x > 0.0);
  CHECK(mean_of(w) == doctest::Approx(1.0).epsilon(0.1));

  const WeightField g(7, Support::Quadrant, BulkSpec::exponential(4.0));
  CHECK(mean_of(grid_weights(g, 50, 50)) == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("geometric bulk takes nonnegative integer values") {
  const WeightField f(11, Support::Quadrant, BulkSpec::geometric(0.5));
  const std::vector<double> w = grid_weights(f, 40, 40);
  for (double x : w) {
    CHECK(x >= 0.0);
    CHECK(x == std::floor(x));
  }
  // Mean of the value distribution is (1-alpha)/alpha = 1.
  CHECK(mean_of(w) == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("two-sided boundary pins the corner and reweights the axes") {
  const WeightField f(3, Support::Quadrant, BulkSpec::exponential(),
                      BoundarySpec::two_sided(0.7, 0.4));
  CHECK(f.weight(0, 0) == 0.0);
  std::vector<double> row, col, bulk;
  for (int i = 1; i <= 3000; ++i) row.push_back(f.weight(i, 0));
  for (int j = 1; j <= 3000; ++j) col.push_back(f.weight(0, j));
  for (int i = 1; i <= 60; ++i)
    for (int j = 1; j <= 50; ++j) bulk.push_back(f.weight(i, j));
  CHECK(mean_of(row) == doctest::Approx(1.0 / 0.7).epsilon(0.08));
  CHECK(mean_of(col) == doctest::Approx(1.0 / 0.4).epsilon(0.08));
  CHECK(mean_of(bulk) == doctest::Approx(1.0).epsilon(0.08));
}

TEST_CASE("row_weights matches per-site queries bit for bit") {
  const WeightField f(9, Support::Quadrant, BulkSpec::exponential(),
                      BoundarySpec::two_sided(0.6, 0.9));
  std::vector<double> buf(64);
  for (int i = 0; i < 6; ++i) {
    f.row_weights(i, 0, 64, buf.data());
    for (int j = 0; j < 64; ++j) CHECK(buf[size_t(j)] == f.weight(i, j));
  }
}

TEST_CASE("support predicates and off-support access") {
  const WeightField q(1, Support::Quadrant, BulkSpec::exponential());
  CHECK(q.in_support(0, 0));
  CHECK_FALSE(q.in_support(-1, 3));
  CHECK_THROWS_AS((void)q.weight(-1, 0), DomainError);

  const WeightField h(1, Support::FlatHalfPlane, BulkSpec::exponential());
  CHECK(h.in_support(-5, 7));
  CHECK_FALSE(h.in_support(-5, 4));
  CHECK(h.weight(-5, 7) > 0.0);

  const WeightField hf(1, Support::HalfFlat, BulkSpec::exponential());
  CHECK(hf.in_support(-5, 7));
  CHECK_FALSE(hf.in_support(3, -1));
}

TEST_CASE("point field windows are deterministic and consistent") {
  const PointField pf(21, 1.0);
  const Rect whole{0.0, 0.0, 40.0, 40.0};
  const std::vector<Point2d> all1 = pf.points_in(whole);
  const std::vector<Point2d> all2 = pf.points_in(whole);
  REQUIRE(all1.size() == all2.size());
  for (size_t i = 0; i < all1.size(); ++i) {
    CHECK(all1[i].x == all2[i].x);
    CHECK(all1[i].y == all2[i].y);
  }
  for (const Point2d& p : all1) {
    CHECK(p.x >= 0.0);
    CHECK(p.x < 40.0);
    CHECK(p.y >= 0.0);
    CHECK(p.y < 40.0);
  }
  // Mean count 1600, sd 40; stay within five sigma.
  CHECK(std::fabs(double(all1.size()) - 1600.0) < 200.0);

  std::vector<Point2d> left = pf.points_in({0.0, 0.0, 23.0, 40.0});
  const std::vector<Point2d> right = pf.points_in({23.0, 0.0, 40.0, 40.0});
  left.insert(left.end(), right.begin(), right.end());
  CHECK(same_points(left, all1));
}

TEST_CASE("point field respects its region") {
  const PointField quad(5, 1.0, PointRegion::Quadrant);
  for (const Point2d& p : quad.points_in({-10.0, -10.0, 10.0, 10.0})) {
    CHECK(p.x >= 0.0);
    CHECK(p.y >= 0.0);
  }
  const PointField half(5, 1.0, PointRegion::HalfPlane);
  bool saw_negative_x = false;
  for (const Point2d& p : half.points_in({-10.0, -10.0, 10.0, 10.0})) {
    CHECK(p.x + p.y >= 0.0);
    saw_negative_x = saw_negative_x || p.x < 0.0;
  }
  CHECK(saw_negative_x);
}

TEST_CASE("axis sources") {
  PointField pf(33, 1.0);
  CHECK(pf.x_axis_points(0.0, 50.0).empty());
  pf.set_axis_sources(2.0, 0.5);
  const std::vector<double> xs = pf.x_axis_points(0.0, 50.0);
  const std::vector<double> ys = pf.y_axis_points(0.0, 50.0);
  for (double x : xs) {
    CHECK(x >= 0.0);
    CHECK(x < 50.0);
  }
  // Means 100 and 25; allow five sigma.
  CHECK(std::fabs(double(xs.size()) - 100.0) < 50.0);
  CHECK(std::fabs(double(ys.size()) - 25.0) < 25.0);
  CHECK(pf.x_axis_points(0.0, 50.0).size() == xs.size());
}

TEST_CASE("poisson counts have the requested mean") {
  rng::SubStream s(rng::stream_seed(77, rng::kStreamPoints));
  double total = 0.0;
  const int reps = 4000;
  for (int k = 0; k < reps; ++k) total += poisson_count(s, 3.7);
  CHECK(total / reps == doctest::Approx(3.7).epsilon(0.05));
  rng::SubStream s2(rng::stream_seed(77, rng::kStreamPoints));
  CHECK(poisson_count(s2, 3.7) >= 0);
}

}  // TEST_SUITE
