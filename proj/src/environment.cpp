#include "kpz/environment.hpp"

#include <cmath>
#include <string>

namespace kpz {

static void validate_bulk(const BulkSpec& b) {
    if (b.kind == BulkKind::Exponential) {
        if (!(b.rate > 0.0) || !std::isfinite(b.rate))
            throw ConfigError("bulk exponential rate must be positive and finite");
    } else {
        if (!(b.alpha > 0.0) || !(b.alpha < 1.0))
            throw ConfigError("bulk geometric alpha must lie in (0,1)");
    }
}

WeightField::WeightField(uint64_t seed, Support support, BulkSpec bulk, BoundarySpec boundary)
    : seed_(seed), sseed_(rng::stream_seed(seed, rng::kStreamWeights)), support_(support),
      bulk_(bulk), boundary_(std::move(boundary)) {
    validate_bulk(bulk_);
    if (boundary_.kind != BoundaryKind::None) {
        if (support_ != Support::Quadrant)
            throw ConfigError("boundary reweighting requires the quadrant support");
        if (bulk_.kind != BulkKind::Exponential)
            throw ConfigError("boundary reweighting requires exponential bulk");
    }
    if (boundary_.kind == BoundaryKind::TwoSided) {
        if (!(boundary_.pi > 0.0) || !(boundary_.eta > 0.0))
            throw ConfigError("two-sided boundary rates must be positive");
        inv_pi_ = 1.0 / boundary_.pi;
        inv_eta_ = 1.0 / boundary_.eta;
    }
    if (boundary_.kind == BoundaryKind::ThickOneSided) {
        if (boundary_.row_rates.empty())
            throw ConfigError("thick boundary needs at least one row rate");
        for (double r : boundary_.row_rates)
            if (!(r > 0.0)) throw ConfigError("thick boundary rates must be positive");
    }
    if (bulk_.kind == BulkKind::Exponential) {
        bulk_inv_rate_ = 1.0 / bulk_.rate;
    } else {
        geo_inv_lambda_ = -1.0 / std::log1p(-bulk_.alpha);
    }
}

double WeightField::cell_value(int i, int j) const {
    const uint64_t h = rng::site_hash(sseed_, i, j);
    if (bulk_.kind == BulkKind::Geometric) return rng::geom_from_hash(h, geo_inv_lambda_);

    double inv_rate = bulk_inv_rate_;
    switch (boundary_.kind) {
    case BoundaryKind::None: break;
    case BoundaryKind::TwoSided:
        if (j == 0) {
            if (i == 0) return 0.0;
            inv_rate = inv_pi_;
        } else if (i == 0) {
            inv_rate = inv_eta_;
        }
        break;
    case BoundaryKind::ThickOneSided:
        if (i >= 0 && size_t(i) < boundary_.row_rates.size())
            inv_rate = 1.0 / boundary_.row_rates[size_t(i)];
        break;
    }
    return rng::exp_from_hash(h, inv_rate);
}

double WeightField::weight(int i, int j) const {
    if (!in_support(i, j))
        throw DomainError("weight query off the support: (" + std::to_string(i) + "," +
                          std::to_string(j) + ")");
    return cell_value(i, j);
}

void WeightField::row_weights(int i, int j0, int n, double* out) const {
    if (n <= 0) return;
    if (!in_support(i, j0) || !in_support(i, j0 + n - 1))
        throw DomainError("row_weights span leaves the support at row " + std::to_string(i));

    int k = 0;
    // Peel boundary cells; at most the j=0 cell (or, on row 0, the whole row)
    // deviates from the row's bulk rate.
    if (boundary_.kind == BoundaryKind::TwoSided && j0 == 0 && k < n) {
        out[k] = cell_value(i, 0);
        ++k;
    }

    double inv_rate = bulk_inv_rate_;
    if (boundary_.kind == BoundaryKind::TwoSided && i == 0) inv_rate = inv_eta_;
    if (boundary_.kind == BoundaryKind::ThickOneSided && i >= 0 &&
        size_t(i) < boundary_.row_rates.size())
        inv_rate = 1.0 / boundary_.row_rates[size_t(i)];

    const uint64_t base = sseed_ + (uint64_t(uint32_t(i)) << 32) * rng::kGolden;
    if (bulk_.kind == BulkKind::Exponential) {
        for (; k < n; ++k) {
            const uint64_t h = rng::mix64(base + uint64_t(uint32_t(j0 + k)) * rng::kGolden);
            out[k] = -rng::unit_log(rng::u01(h)) * inv_rate;
        }
    } else {
        const double inv_lambda = geo_inv_lambda_;
        for (; k < n; ++k) {
            const uint64_t h = rng::mix64(base + uint64_t(uint32_t(j0 + k)) * rng::kGolden);
            out[k] = std::floor(-rng::unit_log(rng::u01(h)) * inv_lambda);
        }
    }
}

int poisson_count(rng::SubStream& s, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw ConfigError("poisson mean must be finite and nonnegative");
    int total = 0;
    while (mean > 0.0) {
        const double slice = mean > 16.0 ? 16.0 : mean;
        mean -= slice;
        const double u = s.next_u01();
        double p = std::exp(-slice);
        double cum = p;
        int k = 0;
        // Inverse CDF walk; u is in (0,1] so the loop terminates once cum
        // passes u, after O(slice) iterations in expectation.
        while (u > cum && k < 400) {
            ++k;
            p *= slice / k;
            cum += p;
        }
        total += k;
    }
    return total;
}

PointField::PointField(uint64_t seed, double intensity, PointRegion region)
    : seed_(seed), sseed_pts_(rng::stream_seed(seed, rng::kStreamPoints)),
      sseed_ax_(rng::stream_seed(seed, rng::kStreamAxisX)),
      sseed_ay_(rng::stream_seed(seed, rng::kStreamAxisY)), intensity_(intensity),
      region_(region) {
    if (!(intensity > 0.0) || !std::isfinite(intensity))
        throw ConfigError("point field intensity must be positive and finite");
}

void PointField::set_axis_sources(double x_intensity, double y_intensity) {
    if (x_intensity < 0 || y_intensity < 0)
        throw ConfigError("axis source intensities must be nonnegative");
    ax_ = x_intensity;
    ay_ = y_intensity;
}

std::vector<Point2d> PointField::points_in(const Rect& window) const {
    if (!(window.x0 < window.x1) || !(window.y0 < window.y1)) return {};
    std::vector<Point2d> pts;
    const long cx0 = (long)std::floor(window.x0);
    const long cx1 = (long)std::ceil(window.x1);
    const long cy0 = (long)std::floor(window.y0);
    const long cy1 = (long)std::ceil(window.y1);
    pts.reserve(size_t(std::max(0.0, intensity_ * (window.x1 - window.x0) * (window.y1 - window.y0) * 1.2 + 16)));
    for (long cx = cx0; cx < cx1; ++cx) {
        for (long cy = cy0; cy < cy1; ++cy) {
            // Cells fully outside the region can be skipped; partial cells get
            // filtered pointwise below.
            if (region_ == PointRegion::Quadrant && (cx < 0 || cy < 0)) continue;
            if (region_ == PointRegion::HalfPlane && (cx + cy) < -1) continue;
            rng::SubStream s(rng::site_hash(sseed_pts_, int32_t(cx), int32_t(cy)));
            const int count = poisson_count(s, intensity_);
            for (int k = 0; k < count; ++k) {
                // 1-u maps the (0,1] uniform onto [0,1), so each cell owns the
                // half-open square [cx,cx+1) x [cy,cy+1) exactly.
                const double px = double(cx) + (1.0 - s.next_u01());
                const double py = double(cy) + (1.0 - s.next_u01());
                if (px < window.x0 || px >= window.x1 || py < window.y0 || py >= window.y1)
                    continue;
                if (region_ == PointRegion::Quadrant && (px < 0 || py < 0)) continue;
                if (region_ == PointRegion::HalfPlane && (px + py < 0)) continue;
                pts.push_back({px, py});
            }
        }
    }
    return pts;
}

std::vector<double> PointField::axis_points(uint64_t sseed, double rate, double lo, double hi) const {
    std::vector<double> pts;
    if (!(rate > 0.0) || !(lo < hi)) return pts;
    const long c0 = (long)std::floor(std::max(0.0, lo));
    const long c1 = (long)std::ceil(hi);
    for (long c = c0; c < c1; ++c) {
        rng::SubStream s(rng::site_hash(sseed, int32_t(c), 0));
        const int count = poisson_count(s, rate);
        for (int k = 0; k < count; ++k) {
            const double p = double(c) + (1.0 - s.next_u01());
            if (p >= lo && p < hi && p >= 0) pts.push_back(p);
        }
    }
    return pts;
}

std::vector<double> PointField::x_axis_points(double lo, double hi) const {
    return axis_points(sseed_ax_, ax_, lo, hi);
}

std::vector<double> PointField::y_axis_points(double lo, double hi) const {
    return axis_points(sseed_ay_, ay_, lo, hi);
}

} // namespace kpz
