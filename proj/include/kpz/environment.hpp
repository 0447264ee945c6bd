#pragma once

#include <cstdint>
#include <vector>

#include "kpz/errors.hpp"
#include "kpz/hashrng.hpp"

// Random environments: lattice weight fields on various supports, and planar
// Poisson point fields. Both are deterministic functions of (seed, site), see
// hashrng.hpp.

namespace kpz {

struct Point {
    int x = 0;
    int y = 0;
    friend bool operator==(const Point&, const Point&) = default;
};

// Index convention: site (i,j) with i the horizontal and j the vertical
// coordinate, both 0-based. Directed paths move by +1 in one coordinate per
// step.
enum class Support {
    Quadrant,      // i >= 0 and j >= 0
    FlatHalfPlane, // i + j >= 0
    HalfFlat,      // i + j >= 0 and j >= 0
};

enum class BulkKind { Exponential, Geometric };

struct BulkSpec {
    BulkKind kind = BulkKind::Exponential;
    double rate = 1.0;  // exponential rate (mean 1/rate)
    double alpha = 0.5; // geometric success probability, values in {0,1,2,...}

    static BulkSpec exponential(double rate = 1.0) {
        BulkSpec b;
        b.kind = BulkKind::Exponential;
        b.rate = rate;
        return b;
    }
    static BulkSpec geometric(double alpha) {
        BulkSpec b;
        b.kind = BulkKind::Geometric;
        b.alpha = alpha;
        return b;
    }
};

enum class BoundaryKind { None, TwoSided, ThickOneSided };

// Reweighted boundaries on the quadrant. TwoSided: the bottom row (j=0, i>0)
// has rate `pi`, the left column (i=0, j>0) has rate `eta`, and the corner
// (0,0) is pinned to zero. Rates >= 1 are legal; such a side is no heavier
// than the bulk and acts as if absent in the macroscopic shape.
// ThickOneSided: row i < k has rate row_rates[i], everything else is bulk.
struct BoundarySpec {
    BoundaryKind kind = BoundaryKind::None;
    double pi = 1.0;
    double eta = 1.0;
    std::vector<double> row_rates;

    static BoundarySpec none() { return BoundarySpec{}; }
    static BoundarySpec two_sided(double pi, double eta) {
        BoundarySpec b;
        b.kind = BoundaryKind::TwoSided;
        b.pi = pi;
        b.eta = eta;
        return b;
    }
    static BoundarySpec thick_rows(std::vector<double> rates) {
        BoundarySpec b;
        b.kind = BoundaryKind::ThickOneSided;
        b.row_rates = std::move(rates);
        return b;
    }
};

class WeightField {
  public:
    WeightField(uint64_t seed, Support support, BulkSpec bulk,
                BoundarySpec boundary = BoundarySpec::none());

    bool in_support(int i, int j) const {
        switch (support_) {
        case Support::Quadrant: return i >= 0 && j >= 0;
        case Support::FlatHalfPlane: return i + j >= 0;
        case Support::HalfFlat: return i + j >= 0 && j >= 0;
        }
        return false;
    }

    // Weight of a single site. Throws DomainError off the support.
    double weight(int i, int j) const;

    // Fills out[0..n) with the weights of sites (i, j0), ..., (i, j0+n-1).
    // The whole span must lie in the support. Bit-identical to n calls of
    // weight(), but the bulk part of the row compiles to a vector loop.
    void row_weights(int i, int j0, int n, double* out) const;

    uint64_t seed() const { return seed_; }
    Support support() const { return support_; }
    const BulkSpec& bulk() const { return bulk_; }
    const BoundarySpec& boundary() const { return boundary_; }

  private:
    double cell_value(int i, int j) const;

    uint64_t seed_;
    uint64_t sseed_;
    Support support_;
    BulkSpec bulk_;
    BoundarySpec boundary_;
    double bulk_inv_rate_ = 1.0;  // exponential: 1/rate
    double geo_inv_lambda_ = 1.0; // geometric: -1/log(1-alpha)
    double inv_pi_ = 1.0;
    double inv_eta_ = 1.0;
};

struct Point2d {
    double x = 0;
    double y = 0;
};

struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0; // half-open [x0,x1) x [y0,y1)
};

enum class PointRegion {
    Quadrant,  // x >= 0 and y >= 0
    HalfPlane, // x + y >= 0
};

// Homogeneous planar Poisson field, realized cell by cell on the unit grid:
// each unit cell carries a Poisson count and i.i.d. uniform positions, all
// keyed by the cell coordinates. Restricting to a window is exact thinning,
// so disjoint windows are independent and nested windows are consistent.
// Optional one-dimensional source processes live on the two positive axes.
class PointField {
  public:
    PointField(uint64_t seed, double intensity, PointRegion region = PointRegion::Quadrant);

    void set_axis_sources(double x_intensity, double y_intensity);

    // All field points inside `window`, intersected with the region. Order is
    // deterministic (cell-major, then draw order within a cell).
    std::vector<Point2d> points_in(const Rect& window) const;

    // Axis source points with coordinate in [lo, hi), lo >= 0.
    std::vector<double> x_axis_points(double lo, double hi) const;
    std::vector<double> y_axis_points(double lo, double hi) const;

    double intensity() const { return intensity_; }
    double x_axis_intensity() const { return ax_; }
    double y_axis_intensity() const { return ay_; }
    PointRegion region() const { return region_; }

  private:
    std::vector<double> axis_points(uint64_t sseed, double rate, double lo, double hi) const;

    uint64_t seed_;
    uint64_t sseed_pts_;
    uint64_t sseed_ax_;
    uint64_t sseed_ay_;
    double intensity_;
    double ax_ = 0;
    double ay_ = 0;
    PointRegion region_;
};

// Poisson count with the given mean, consuming draws from `s`. Inverse-CDF
// per slice of mean at most 16, so the running product never underflows; the
// slicing keeps the draw count deterministic in distribution yet bounded.
int poisson_count(rng::SubStream& s, double mean);

} // namespace kpz
