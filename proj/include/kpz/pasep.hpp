#pragma once

// Continuous-time asymmetric exclusion simulator.  One arrow environment
// (per-bond Poisson streams of right and left arrows) drives any number of
// coupled replicas, which is what makes attractiveness and the step-reset
// current decomposition exact per sample rather than statistical.

#include <cstdint>
#include <queue>
#include <vector>

namespace kpz {

struct PasepIc {
  enum class Kind { Step, StepBernoulli, TwoSidedBernoulli, Flat };
  Kind kind = Kind::Step;
  double rho_minus = 1.0;  // density on sites <= 0
  double rho_plus = 0.0;   // density on sites >= 1

  static PasepIc step();
  static PasepIc step_bernoulli(double rho_plus);
  static PasepIc two_sided(double rho_minus, double rho_plus);
  static PasepIc flat();  // even sites occupied
};

// Occupation vector over sites [-radius, radius], deterministic in the seed.
std::vector<std::uint8_t> sample_occupation(const PasepIc& ic, std::uint64_t seed,
                                            int radius);

class PasepSimulator {
 public:
  // Sites [-radius, radius], bonds [-radius, radius-1].  Right arrows carry
  // rate p, left arrows rate 1-p; p in (0, 1].
  PasepSimulator(std::uint64_t seed, int radius, double p);

  // Replicas may be added at any simulation time; heights and currents of a
  // replica are measured from its own admission state.
  int add_replica(const std::vector<std::uint8_t>& occupation);
  int add_step_replica(int center);  // sites <= center occupied

  void run_to(double time);

  double time() const { return now_; }
  int radius() const { return radius_; }
  double rate_right() const { return p_; }
  double rate_left() const { return 1.0 - p_; }
  int replica_count() const { return static_cast<int>(occ_.size()); }

  int occupation(int rep, int site) const;
  // Net rightward crossings of the bond between site and site+1 since the
  // replica was added.
  long long crossings(int rep, int site) const;
  // Height profile at the replica's admission time, anchored to 0 at site 0.
  long long height0(int rep, int site) const;
  // Current height: height0 + 2 * crossings.  Sites up to radius-1.
  long long height(int rep, int site) const;

  // Largest |site| unreachable by boundary effects before the given time
  // under the light-cone allowance (attempt rate 1 per bond, safety margin).
  int trusted_radius(double time, double margin = 1.5) const;

 private:
  struct Clock {
    double next;
    std::uint64_t base;
    std::uint64_t n;
    double inv_rate;
    int bond;
    bool right;
  };

  std::size_t site_index(int rep, int site) const;
  void advance_clock(int idx);
  void apply(const Clock& c);

  int radius_;
  double p_;
  double now_ = 0.0;
  std::vector<Clock> clocks_;
  std::priority_queue<std::pair<double, int>,
                      std::vector<std::pair<double, int>>,
                      std::greater<>>
      heap_;
  std::vector<std::vector<std::uint8_t>> occ_;
  std::vector<std::vector<long long>> cnt_;
  std::vector<std::vector<long long>> h0_;
};

struct PasepRunConfig {
  double p = 1.0;
  PasepIc ic = PasepIc::step();
  int radius = 0;        // 0: sized automatically from horizon and margin
  double margin = 1.5;   // light-cone safety factor
  std::uint64_t seed = 1;
};

struct PasepObservation {
  double time;
  std::vector<std::uint8_t> occupation;  // sites -R..R
  std::vector<long long> height;         // sites -R..R-1
  std::vector<long long> current;        // bonds -R..R-1
};

// Single-replica run with snapshots at the (sorted) sample times.
std::vector<PasepObservation> simulate(const PasepRunConfig& cfg,
                                       const std::vector<double>& sample_times);

// Exact decomposition of the current increment along a tilted space-time
// line.  The main system runs to time t; a step system centered at
// x1 = round(v t) is dropped onto the same arrows and both run on to
// t + t^nu.  With x2 = x1 + round(u t^nu), u >= 0:
//
//   I_main(x2, t+dt) - I_main(x1, t) = I_reset + n0 + gap,   gap <= 0,
//
// where n0 counts main particles initially in (x1, x2].  For step initial
// data with v >= 0, n0 = 0 and gap is the full compensator.
struct StepResetSplit {
  long long i_main_start;  // I_main(x1, t)
  long long i_main_end;    // I_main(x2, t + dt)
  long long i_reset;       // step system's current at bond x2 over [t, t+dt]
  long long n0;
  long long gap;
  long long h_start;  // main-replica height at (x1, t)
  long long h_end;    // main-replica height at (x2, t + dt)
  int x1;
  int x2;
  double t;
  double dt;
};

StepResetSplit coupled_step_reset(const PasepRunConfig& cfg, double v, double u,
                                  double nu, double t);

}  // namespace kpz
