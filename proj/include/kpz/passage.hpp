#pragma once

#include <span>
#include <vector>

#include "kpz/environment.hpp"

// Directed lattice paths over a weight field, folded in one of three
// semirings: max-plus (growth / zero-temperature polymer), min-plus (first
// passage), log-sum-exp (positive-temperature polymer free energy, where the
// value is log of the partition function divided by beta).

namespace kpz {

enum class Semiring { MaxPlus, MinPlus, LogSumExp };

struct SemiringMode {
    Semiring kind = Semiring::MaxPlus;
    double beta = 1.0; // inverse temperature, LogSumExp only

    static SemiringMode max_plus() { return {Semiring::MaxPlus, 1.0}; }
    static SemiringMode min_plus() { return {Semiring::MinPlus, 1.0}; }
    static SemiringMode log_sum_exp(double beta);
};

// Sign of (direct - through) in superadditivity_check: +1 when forcing a path
// through a waypoint can only lower the value (max-plus, log-sum-exp), -1
// when it can only raise it (min-plus).
int expected_gap_sign(SemiringMode mode);

// Where paths may begin. Boundary: at any support cell whose predecessors
// (one step down or left) fall outside the support, i.e. fresh entry along
// the support's lower edge. PointSource: only at `origin`.
enum class SourceMode { Boundary, PointSource };

struct PassageQuery {
    SemiringMode mode{};
    SourceMode source = SourceMode::Boundary;
    Point origin{};
    std::vector<Point> targets;
};

// Scratch buffers reused across sweeps; callers in sampling loops keep one
// alive to avoid reallocation.
struct SweepWorkspace {
    std::vector<double> vals;
    std::vector<double> wts;
    std::vector<int> order;
};

// Passage value at every target, one row sweep over the union of the
// targets' dependency cones. Values are identical, bit for bit, to issuing
// each target as its own query. Throws DomainError for targets off the
// support or, for PointSource, not reachable from the origin.
std::vector<double> passage_values(const WeightField& f, const PassageQuery& q,
                                   SweepWorkspace* ws = nullptr);

// Single-target conveniences.
double passage_value(const WeightField& f, SemiringMode mode, Point target);

// Best path from a to b with BOTH endpoint weights folded in. a must be
// componentwise <= b.
double point_to_point(const WeightField& f, SemiringMode mode, Point a, Point b,
                      SweepWorkspace* ws = nullptr);

// point_to_point with the shared start weight removed, so that values
// compose: passage(a) combined with junction(a,b) is the value of the best
// boundary path to b constrained to pass through a. Every a-to-b path
// carries the weight at a exactly once, so this is exact in all semirings.
double junction_value(const WeightField& f, SemiringMode mode, Point a, Point b,
                      SweepWorkspace* ws = nullptr);

struct JunctionSplit {
    double direct;   // passage value straight to b
    double start;    // passage value at a
    double junction; // junction_value(a, b)
    double gap;      // direct - start - junction
    int sign;        // expected_gap_sign of the mode used
};

// One coupled evaluation of the constrained-vs-free path split on a single
// environment realization. gap * sign >= 0 up to float roundoff.
JunctionSplit superadditivity_check(const WeightField& f, SemiringMode mode, Point a, Point b,
                                    SweepWorkspace* ws = nullptr);

// Longest chain of points strictly increasing in both coordinates.
// O(N log N) patience sorting.
int lis_length(std::vector<Point2d> pts);

enum class PngGeometry {
    Droplet,  // chains inside [0,T]^2 from the origin
    Flat,     // chains inside {x+y>=0} cut to x,y <= T: growth over a line
    TwoSource // droplet plus chainable nucleations on both axes
};

// Height of a polynuclear growth droplet at its apex, time T, as a maximal
// point chain. TwoSource reads the field's axis sources; axis points are
// mapped to strictly ordered virtual points below / left of the quadrant so
// that same-axis points chain in coordinate order but the two axes never mix.
int png_passage(const PointField& field, double T, PngGeometry geom);

} // namespace kpz
