#include "kpz/pasep.hpp"

#include <algorithm>
#include <cmath>

#include "kpz/errors.hpp"
#include "kpz/hashrng.hpp"

namespace kpz {

PasepIc PasepIc::step() { return {Kind::Step, 1.0, 0.0}; }

PasepIc PasepIc::step_bernoulli(double rho_plus) {
  return {Kind::StepBernoulli, 0.0, rho_plus};
}

PasepIc PasepIc::two_sided(double rho_minus, double rho_plus) {
  return {Kind::TwoSidedBernoulli, rho_minus, rho_plus};
}

PasepIc PasepIc::flat() { return {Kind::Flat, 0.5, 0.5}; }

std::vector<std::uint8_t> sample_occupation(const PasepIc& ic, std::uint64_t seed,
                                            int radius) {
  if (radius <= 0) throw ConfigError("occupation radius must be positive");
  if (!(ic.rho_minus >= 0.0 && ic.rho_minus <= 1.0 && ic.rho_plus >= 0.0 &&
        ic.rho_plus <= 1.0)) {
    throw ConfigError("Bernoulli densities must lie in [0, 1]");
  }
  std::uint64_t sseed = rng::stream_seed(seed, rng::kStreamOccupation);
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(2 * radius + 1), 0);
  for (int x = -radius; x <= radius; ++x) {
    bool filled = false;
    switch (ic.kind) {
      case PasepIc::Kind::Step:
        filled = x <= 0;
        break;
      case PasepIc::Kind::StepBernoulli:
        filled = x >= 1 && rng::u01(rng::site_hash(sseed, x, 0)) <= ic.rho_plus;
        break;
      case PasepIc::Kind::TwoSidedBernoulli: {
        double rho = x <= 0 ? ic.rho_minus : ic.rho_plus;
        filled = rng::u01(rng::site_hash(sseed, x, 0)) <= rho;
        break;
      }
      case PasepIc::Kind::Flat:
        filled = (x % 2) == 0;
        break;
    }
    occ[static_cast<std::size_t>(x + radius)] = filled ? 1 : 0;
  }
  return occ;
}

PasepSimulator::PasepSimulator(std::uint64_t seed, int radius, double p)
    : radius_(radius), p_(p) {
  if (radius <= 0) throw ConfigError("window radius must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("right rate must lie in (0, 1]");
  double q = 1.0 - p;
  std::uint64_t sr = rng::stream_seed(seed, rng::kStreamArrowRight);
  std::uint64_t sl = rng::stream_seed(seed, rng::kStreamArrowLeft);
  for (int b = -radius; b < radius; ++b) {
    Clock c;
    c.bond = b;
    c.right = true;
    c.base = rng::site_hash(sr, b, 0);
    c.n = 0;
    c.inv_rate = 1.0 / p;
    c.next = 0.0;
    clocks_.push_back(c);
    if (q > 0.0) {
      c.right = false;
      c.base = rng::site_hash(sl, b, 0);
      c.inv_rate = 1.0 / q;
      clocks_.push_back(c);
    }
  }
  for (std::size_t i = 0; i < clocks_.size(); ++i) {
    advance_clock(static_cast<int>(i));
  }
}

void PasepSimulator::advance_clock(int idx) {
  Clock& c = clocks_[static_cast<std::size_t>(idx)];
  std::uint64_t h = rng::mix64(c.base + (++c.n) * rng::kGolden);
  c.next += -rng::unit_log(rng::u01(h)) * c.inv_rate;
  heap_.emplace(c.next, idx);
}

int PasepSimulator::add_replica(const std::vector<std::uint8_t>& occupation) {
  std::size_t want = static_cast<std::size_t>(2 * radius_ + 1);
  if (occupation.size() != want) {
    throw ConfigError("occupation vector does not match the window");
  }
  for (std::uint8_t v : occupation) {
    if (v > 1) throw ConfigError("occupation values must be 0 or 1");
  }
  occ_.push_back(occupation);
  cnt_.push_back(std::vector<long long>(static_cast<std::size_t>(2 * radius_), 0));

  std::vector<long long> h0(want, 0);
  std::size_t origin = static_cast<std::size_t>(radius_);
  for (int x = 1; x <= radius_; ++x) {
    std::size_t i = origin + static_cast<std::size_t>(x);
    h0[i] = h0[i - 1] + 1 - 2 * static_cast<long long>(occupation[i]);
  }
  for (int x = -1; x >= -radius_; --x) {
    std::size_t i = static_cast<std::size_t>(x + radius_);
    h0[i] = h0[i + 1] - (1 - 2 * static_cast<long long>(occupation[i + 1]));
  }
  h0_.push_back(std::move(h0));
  return static_cast<int>(occ_.size()) - 1;
}

int PasepSimulator::add_step_replica(int center) {
  if (center < -radius_ || center > radius_) {
    throw ConfigError("step center outside the window");
  }
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(2 * radius_ + 1), 0);
  for (int x = -radius_; x <= center; ++x) {
    occ[static_cast<std::size_t>(x + radius_)] = 1;
  }
  return add_replica(occ);
}

void PasepSimulator::apply(const Clock& c) {
  std::size_t left = static_cast<std::size_t>(c.bond + radius_);
  for (std::size_t r = 0; r < occ_.size(); ++r) {
    std::vector<std::uint8_t>& occ = occ_[r];
    if (c.right) {
      if (occ[left] == 1 && occ[left + 1] == 0) {
        occ[left] = 0;
        occ[left + 1] = 1;
        ++cnt_[r][left];
      }
    } else {
      if (occ[left + 1] == 1 && occ[left] == 0) {
        occ[left + 1] = 0;
        occ[left] = 1;
        --cnt_[r][left];
      }
    }
  }
}

void PasepSimulator::run_to(double time) {
  if (time < now_) throw DomainError("simulation time cannot move backwards");
  while (!heap_.empty() && heap_.top().first <= time) {
    auto [when, idx] = heap_.top();
    heap_.pop();
    (void)when;
    apply(clocks_[static_cast<std::size_t>(idx)]);
    advance_clock(idx);
  }
  now_ = time;
}

std::size_t PasepSimulator::site_index(int rep, int site) const {
  if (rep < 0 || rep >= replica_count()) throw DomainError("no such replica");
  if (site < -radius_ || site > radius_) throw DomainError("site outside window");
  return static_cast<std::size_t>(site + radius_);
}

int PasepSimulator::occupation(int rep, int site) const {
  return occ_[static_cast<std::size_t>(rep)][site_index(rep, site)];
}

long long PasepSimulator::crossings(int rep, int site) const {
  if (site < -radius_ || site >= radius_) {
    throw DomainError("bond outside window");
  }
  site_index(rep, site);
  return cnt_[static_cast<std::size_t>(rep)][static_cast<std::size_t>(site + radius_)];
}

long long PasepSimulator::height0(int rep, int site) const {
  return h0_[static_cast<std::size_t>(rep)][site_index(rep, site)];
}

long long PasepSimulator::height(int rep, int site) const {
  return height0(rep, site) + 2 * crossings(rep, site);
}

int PasepSimulator::trusted_radius(double time, double margin) const {
  double reach = std::ceil(margin * time);
  return radius_ - static_cast<int>(reach) - 1;
}

std::vector<PasepObservation> simulate(const PasepRunConfig& cfg,
                                       const std::vector<double>& sample_times) {
  if (!(cfg.p > 0.5 && cfg.p <= 1.0)) {
    throw ConfigError("drift requires right rate in (1/2, 1]");
  }
  if (sample_times.empty()) throw ConfigError("no sample times given");
  std::vector<double> times = sample_times;
  std::sort(times.begin(), times.end());
  if (times.front() < 0.0) throw ConfigError("sample times must be nonnegative");
  double horizon = times.back();

  int radius = cfg.radius;
  if (radius == 0) {
    radius = static_cast<int>(std::ceil(cfg.margin * horizon)) + 1;
  }
  PasepSimulator sim(cfg.seed, radius, cfg.p);
  if (sim.trusted_radius(horizon, cfg.margin) < 0) {
    throw ConfigError("window too small for the horizon (light-cone check)");
  }
  int rep = sim.add_replica(sample_occupation(cfg.ic, cfg.seed, radius));

  std::vector<PasepObservation> out;
  for (double t : times) {
    sim.run_to(t);
    PasepObservation obs;
    obs.time = t;
    for (int x = -radius; x <= radius; ++x) {
      obs.occupation.push_back(static_cast<std::uint8_t>(sim.occupation(rep, x)));
    }
    for (int x = -radius; x < radius; ++x) {
      obs.height.push_back(sim.height(rep, x));
      obs.current.push_back(sim.crossings(rep, x));
    }
    out.push_back(std::move(obs));
  }
  return out;
}

StepResetSplit coupled_step_reset(const PasepRunConfig& cfg, double v, double u,
                                  double nu, double t) {
  if (!(cfg.p > 0.5 && cfg.p <= 1.0)) {
    throw ConfigError("drift requires right rate in (1/2, 1]");
  }
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive");
  if (!(nu >= 0.0 && nu < 1.0)) throw DomainError("nu must lie in [0, 1)");
  if (!(u >= 0.0)) {
    throw DomainError("the coupling's sign guarantee needs u >= 0");
  }

  double dt = std::pow(t, nu);
  double horizon = t + dt;
  int x1 = static_cast<int>(std::llround(v * t));
  int d = static_cast<int>(std::llround(u * dt));
  int x2 = x1 + d;
  int maxsite = std::max(std::abs(x1), std::abs(x2));

  int needed = static_cast<int>(std::ceil(horizon)) + maxsite + 1;
  int radius = cfg.radius;
  if (radius == 0) {
    radius = static_cast<int>(std::ceil(cfg.margin * horizon)) + maxsite + 1;
  }
  if (radius < needed) {
    throw ConfigError("window too small for the horizon (light-cone check)");
  }

  PasepSimulator sim(cfg.seed, radius, cfg.p);
  int main = sim.add_replica(sample_occupation(cfg.ic, cfg.seed, radius));
  sim.run_to(t);
  long long start = sim.crossings(main, x1);
  int reset = sim.add_step_replica(x1);
  sim.run_to(t + dt);

  StepResetSplit s;
  s.i_main_start = start;
  s.i_main_end = sim.crossings(main, x2);
  s.i_reset = sim.crossings(reset, x2);
  s.n0 = (d - (sim.height0(main, x2) - sim.height0(main, x1))) / 2;
  s.gap = s.i_main_end - s.i_main_start - s.i_reset - s.n0;
  s.h_start = sim.height0(main, x1) + 2 * start;
  s.h_end = sim.height0(main, x2) + 2 * s.i_main_end;
  s.x1 = x1;
  s.x2 = x2;
  s.t = t;
  s.dt = dt;
  return s;
}

}  // namespace kpz
