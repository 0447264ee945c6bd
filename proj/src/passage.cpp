#include "kpz/passage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace kpz {

SemiringMode SemiringMode::log_sum_exp(double beta) {
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw ConfigError("log-sum-exp beta must be positive and finite");
    return {Semiring::LogSumExp, beta};
}

int expected_gap_sign(SemiringMode mode) { return mode.kind == Semiring::MinPlus ? -1 : +1; }

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Fold policies. null_v is the identity of `combine`; path concatenation is
// always +. A path "born" at a cell contributes the neutral element 0 before
// that cell's weight is added.
struct MaxPlusOp {
    static constexpr double null_v = -kInf;
    static double combine(double a, double b) { return a > b ? a : b; }
};

struct MinPlusOp {
    static constexpr double null_v = kInf;
    static double combine(double a, double b) { return a < b ? a : b; }
};

struct LseOp {
    double beta;
    double inv_beta;
    static constexpr double null_v = -kInf;
    double combine(double a, double b) const {
        const double hi = a > b ? a : b;
        const double lo = a > b ? b : a;
        if (lo == -kInf) return hi; // also covers both-empty
        return hi + std::log1p(std::exp(beta * (lo - hi))) * inv_beta;
    }
};

// First column of the sweep at row i: the support's lower edge for boundary
// sources, the origin column for a point source.
inline int row_start(const WeightField& f, const PassageQuery& q, int i) {
    if (q.source == SourceMode::PointSource) return q.origin.y;
    switch (f.support()) {
    case Support::Quadrant: return 0;
    case Support::FlatHalfPlane: return -i;
    case Support::HalfFlat: return i < 0 ? -i : 0;
    }
    return 0;
}

// Row sweep over the union of the targets' dependency cones. The value
// buffer is indexed by column and carries row i-1's values while row i is
// folded; slots no earlier row touched still hold null_v, which combine()
// ignores, so support edges need no special casing beyond the fresh-entry
// rule. Row starts widen monotonically as i grows on every support, so a
// stale slot can never alias a two-rows-old value.
template <class Op>
void run_sweep(const WeightField& f, const PassageQuery& q, const Op& op, double* out,
               SweepWorkspace& ws) {
    const auto& targets = q.targets;

    int imax = targets[0].x, jmax = targets[0].y;
    for (const Point& t : targets) {
        imax = std::max(imax, t.x);
        jmax = std::max(jmax, t.y);
    }

    int i_lo, j_floor;
    if (q.source == SourceMode::PointSource) {
        if (!f.in_support(q.origin.x, q.origin.y))
            throw DomainError("path origin lies off the support");
        for (const Point& t : targets)
            if (t.x < q.origin.x || t.y < q.origin.y)
                throw DomainError("target (" + std::to_string(t.x) + "," + std::to_string(t.y) +
                                  ") is not reachable from the origin");
        i_lo = q.origin.x;
        j_floor = q.origin.y;
    } else {
        switch (f.support()) {
        case Support::Quadrant:
            i_lo = 0;
            j_floor = 0;
            break;
        case Support::FlatHalfPlane:
            i_lo = -jmax;
            j_floor = -imax;
            break;
        default: // HalfFlat
            i_lo = -jmax;
            j_floor = std::max(0, -imax);
            break;
        }
    }

    const int width = jmax - j_floor + 1;
    ws.vals.assign(size_t(width), Op::null_v);
    ws.wts.resize(size_t(width));

    // Harvest targets in row order; ties broken by original index so the
    // walk below can advance a single cursor.
    ws.order.resize(targets.size());
    std::iota(ws.order.begin(), ws.order.end(), 0);
    std::sort(ws.order.begin(), ws.order.end(), [&](int a, int b) {
        return targets[size_t(a)].x != targets[size_t(b)].x
                   ? targets[size_t(a)].x < targets[size_t(b)].x
                   : a < b;
    });
    size_t cursor = 0;

    for (int i = i_lo; i <= imax; ++i) {
        const int j0 = row_start(f, q, i);
        const int n = jmax - j0 + 1;
        double* w = ws.wts.data() + (j0 - j_floor);
        double* v = ws.vals.data() + (j0 - j_floor);
        f.row_weights(i, j0, n, w);

        // Row starts have no in-support left predecessor, so in boundary mode
        // they are always fresh entries; a point source is fresh only at the
        // origin itself. When even the upward predecessor of the row's END
        // lies off the support the whole row is fresh (the support is
        // coordinate-monotone, so one test covers every column).
        const bool fresh_start =
            q.source == SourceMode::Boundary ? true : (i == q.origin.x);
        const bool fresh_all =
            q.source == SourceMode::Boundary && !f.in_support(i - 1, jmax);

        double acc = v[0]; // upward predecessor or null
        if (fresh_start) acc = op.combine(acc, 0.0);
        double left = w[0] + acc;
        v[0] = left;

        if (fresh_all) {
            for (int k = 1; k < n; ++k) {
                double a = op.combine(v[k], left);
                a = op.combine(a, 0.0);
                left = w[k] + a;
                v[k] = left;
            }
        } else {
            for (int k = 1; k < n; ++k) {
                left = w[k] + op.combine(v[k], left);
                v[k] = left;
            }
        }

        while (cursor < ws.order.size() && targets[size_t(ws.order[cursor])].x == i) {
            const Point& t = targets[size_t(ws.order[cursor])];
            out[ws.order[cursor]] = ws.vals[size_t(t.y - j_floor)];
            ++cursor;
        }
    }
}

} // namespace

std::vector<double> passage_values(const WeightField& f, const PassageQuery& q,
                                   SweepWorkspace* ws) {
    if (q.targets.empty()) throw ConfigError("passage query needs at least one target");
    for (const Point& t : q.targets)
        if (!f.in_support(t.x, t.y))
            throw DomainError("passage target (" + std::to_string(t.x) + "," +
                              std::to_string(t.y) + ") lies off the support");

    std::vector<double> out(q.targets.size());
    SweepWorkspace local;
    SweepWorkspace& w = ws ? *ws : local;
    switch (q.mode.kind) {
    case Semiring::MaxPlus: run_sweep(f, q, MaxPlusOp{}, out.data(), w); break;
    case Semiring::MinPlus: run_sweep(f, q, MinPlusOp{}, out.data(), w); break;
    case Semiring::LogSumExp: {
        if (!(q.mode.beta > 0.0) || !std::isfinite(q.mode.beta))
            throw ConfigError("log-sum-exp beta must be positive and finite");
        run_sweep(f, q, LseOp{q.mode.beta, 1.0 / q.mode.beta}, out.data(), w);
        break;
    }
    }
    return out;
}

double passage_value(const WeightField& f, SemiringMode mode, Point target) {
    PassageQuery q;
    q.mode = mode;
    q.targets = {target};
    return passage_values(f, q)[0];
}

double point_to_point(const WeightField& f, SemiringMode mode, Point a, Point b,
                      SweepWorkspace* ws) {
    PassageQuery q;
    q.mode = mode;
    q.source = SourceMode::PointSource;
    q.origin = a;
    q.targets = {b};
    return passage_values(f, q, ws)[0];
}

double junction_value(const WeightField& f, SemiringMode mode, Point a, Point b,
                      SweepWorkspace* ws) {
    return point_to_point(f, mode, a, b, ws) - f.weight(a.x, a.y);
}

JunctionSplit superadditivity_check(const WeightField& f, SemiringMode mode, Point a, Point b,
                                    SweepWorkspace* ws) {
    if (b.x < a.x || b.y < a.y)
        throw DomainError("superadditivity waypoint must precede the target");
    SweepWorkspace local;
    SweepWorkspace& w = ws ? *ws : local;

    PassageQuery q;
    q.mode = mode;
    q.targets = {a, b};
    const std::vector<double> se = passage_values(f, q, &w);

    JunctionSplit out;
    out.start = se[0];
    out.direct = se[1];
    out.junction = junction_value(f, mode, a, b, &w);
    out.gap = out.direct - out.start - out.junction;
    out.sign = expected_gap_sign(mode);
    return out;
}

int lis_length(std::vector<Point2d> pts) {
    // Equal x cannot chain; scanning them in decreasing y makes the strict
    // lower_bound below reject such pairs automatically.
    std::sort(pts.begin(), pts.end(), [](const Point2d& a, const Point2d& b) {
        return a.x != b.x ? a.x < b.x : a.y > b.y;
    });
    std::vector<double> tails; // smallest feasible chain-end y per length
    tails.reserve(pts.size() / 4 + 8);
    for (const Point2d& p : pts) {
        auto it = std::lower_bound(tails.begin(), tails.end(), p.y);
        if (it == tails.end())
            tails.push_back(p.y);
        else
            *it = p.y;
    }
    return int(tails.size());
}

int png_passage(const PointField& field, double T, PngGeometry geom) {
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("growth horizon must be positive");
    switch (geom) {
    case PngGeometry::Droplet:
        return lis_length(field.points_in({0.0, 0.0, T, T}));
    case PngGeometry::Flat: {
        if (field.region() != PointRegion::HalfPlane)
            throw DomainError("flat growth needs a half-plane point field");
        return lis_length(field.points_in({-T, -T, T, T}));
    }
    case PngGeometry::TwoSource: {
        if (field.region() != PointRegion::Quadrant)
            throw DomainError("two-source growth needs a quadrant point field");
        std::vector<Point2d> pts = field.points_in({0.0, 0.0, T, T});
        std::vector<double> ax = field.x_axis_points(0.0, T);
        std::vector<double> ay = field.y_axis_points(0.0, T);
        std::sort(ax.begin(), ax.end());
        std::sort(ay.begin(), ay.end());
        // Rank k of K axis points becomes a virtual point at ordinate k-K-1
        // (negative), so same-axis points chain in coordinate order while
        // bulk points, all nonnegative, sit above/right of every virtual one.
        // Virtual x-axis ordinates and virtual y-axis abscissas are both
        // negative, which makes a chain touching both axes impossible.
        const int kx = int(ax.size()), ky = int(ay.size());
        pts.reserve(pts.size() + ax.size() + ay.size());
        for (int k = 0; k < kx; ++k) pts.push_back({ax[size_t(k)], double(k - kx)});
        for (int k = 0; k < ky; ++k) pts.push_back({double(k - ky), ay[size_t(k)]});
        return lis_length(pts);
    }
    }
    throw ConfigError("unknown growth geometry");
}

} // namespace kpz
