#pragma once

// Brute-force references the unit tests compare the production kernels
// against.  Everything here is written for clarity, not speed; keep grids
// small.

#include <algorithm>
#include <cmath>
#include <vector>

#include "kpz/environment.hpp"
#include "kpz/passage.hpp"

namespace kpz::oracle {

inline void walk(const WeightField& f, Point target, int i, int j, double acc,
                 std::vector<double>* sums) {
  if (i == target.x && j == target.y) {
    sums->push_back(acc);
    return;
  }
  if (i < target.x) walk(f, target, i + 1, j, acc + f.weight(i + 1, j), sums);
  if (j < target.y) walk(f, target, i, j + 1, acc + f.weight(i, j + 1), sums);
}

// Path sums for the boundary-source convention: one entry per monotone path
// born at any cell of either axis and ending at the target.
inline std::vector<double> boundary_sums(const WeightField& f, Point target) {
  std::vector<double> sums;
  for (int x0 = 0; x0 <= target.x; ++x0)
    walk(f, target, x0, 0, f.weight(x0, 0), &sums);
  for (int y0 = 1; y0 <= target.y; ++y0)
    walk(f, target, 0, y0, f.weight(0, y0), &sums);
  return sums;
}

// Path sums from a fixed origin, the point-to-point convention.
inline std::vector<double> point_sums(const WeightField& f, Point origin,
                                      Point target) {
  std::vector<double> sums;
  walk(f, target, origin.x, origin.y, f.weight(origin.x, origin.y), &sums);
  return sums;
}

inline double reduce(const std::vector<double>& sums, SemiringMode mode) {
  if (mode.kind == Semiring::MaxPlus)
    return *std::max_element(sums.begin(), sums.end());
  if (mode.kind == Semiring::MinPlus)
    return *std::min_element(sums.begin(), sums.end());
  const double top = *std::max_element(sums.begin(), sums.end());
  double acc = 0.0;
  for (double s : sums) acc += std::exp(mode.beta * (s - top));
  return top + std::log(acc) / mode.beta;
}

// Longest strictly-increasing chain by checking every subset order; fine for
// a dozen points.
inline int lis_by_search(const std::vector<Point2d>& pts) {
  std::vector<Point2d> sorted = pts;
  std::sort(sorted.begin(), sorted.end(),
            [](const Point2d& a, const Point2d& b) { return a.x < b.x; });
  const int n = static_cast<int>(sorted.size());
  std::vector<int> best(static_cast<size_t>(n), 1);
  int out = n > 0 ? 1 : 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) {
      if (sorted[static_cast<size_t>(j)].x < sorted[static_cast<size_t>(i)].x &&
          sorted[static_cast<size_t>(j)].y < sorted[static_cast<size_t>(i)].y)
        best[static_cast<size_t>(i)] =
            std::max(best[static_cast<size_t>(i)],
                     best[static_cast<size_t>(j)] + 1);
      out = std::max(out, best[static_cast<size_t>(i)]);
    }
  return out;
}

}  // namespace kpz::oracle
