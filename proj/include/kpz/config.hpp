#pragma once

// JSON run configuration.  One object per run: a schema version pin, an
// experiment id, harness keys (seed, workers, output directory), and the
// experiment's own parameters.  Decoding is strict: unknown keys are
// rejected with their dotted path, as are wrong types and missing required
// keys, before any computation starts.

#include <cstdint>
#include <string>
#include <vector>

#include "kpz/experiments.hpp"

namespace kpz {

enum class ExperimentId {
  Decorr,
  OffChar,
  Exponent,
  Dist,
  Projection,
  Pasep,
  Polymer,
  Classify,
  Shape,
};

const char* experiment_name(ExperimentId id);

// Classification lookup: a boundary model plus an observation ray.
struct ClassifyConfig {
  ModelSpec model = ModelSpec::corner_growth();
  double kappa = 1.0;
};

// Limit-shape table over interface velocities in (-1, 1).
struct ShapeConfig {
  std::vector<double> v_values;
};

struct RunPlan {
  ExperimentId id = ExperimentId::Classify;
  std::string out_dir = "runs";
  std::string run_id;  // defaults to the experiment name
  std::uint64_t seed = 1;
  int workers = 1;
  std::string config_hash;  // hex digest of the canonical serialization

  // The member matching `id` is the active one.
  DecorrConfig decorr;
  ExponentConfig exponent;
  DistConfig dist;
  ProjectionConfig projection;
  PasepDecorrConfig pasep;
  PolymerDecorrConfig polymer;
  ClassifyConfig classify;
  ShapeConfig shape;

  // CLI overrides; each keeps the active experiment config in sync.
  void set_seed(std::uint64_t seed_value);
  void set_workers(int worker_count);

  RunContext context() const;
};

RunPlan parse_run_plan(const std::string& text);
RunPlan load_run_plan(const std::string& path);

}  // namespace kpz
