#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcea/constraints.hpp"
#include "lcea/fitness.hpp"

namespace lcea {

/// Invalid experiment description; the message names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class BoundSampling { per_individual, per_iteration };
enum class TieBreak { offspring_survives, uniform_random };

/// First of: optimum reached, target LO reached, iteration budget spent.
/// The budget is always present.
struct StopCondition {
  bool on_optimum = true;
  std::optional<int> target_lo;
  std::uint64_t max_iterations = 1;
  friend bool operator==(const StopCondition&, const StopCondition&) = default;
};

struct ExperimentConfig {
  std::size_t n = 1;
  ConstraintModel constraint = Cardinality{1};
  FitnessKind fitness = FitnessKind::penalized;
  std::size_t mu = 1;
  StopCondition stop;
  std::size_t repetitions = 1;
  std::uint64_t base_seed = 0;
  std::uint64_t log_cadence = 1;
  std::vector<int> lo_targets;
  BoundSampling bound_sampling = BoundSampling::per_individual;
  TieBreak tie_break = TieBreak::offspring_survives;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Integer bound used by optimum checks and the lexicographic fitness.
inline int integer_bound(const ExperimentConfig& config) {
  return static_cast<int>(std::floor(nominal_bound(config.constraint)));
}

inline void validate(const ExperimentConfig& config) {
  if (config.n < 1) throw ConfigError("n: must be >= 1");
  try {
    validate(config.constraint, config.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("constraint: ") + e.what());
  }
  if (config.mu < 1) throw ConfigError("mu: must be >= 1");
  if (config.repetitions < 1) throw ConfigError("repetitions: must be >= 1");
  if (config.log_cadence < 1) throw ConfigError("log_cadence: must be >= 1");
  if (config.stop.max_iterations < 1) throw ConfigError("budget: must be >= 1");
  if (config.fitness == FitnessKind::lexicographic && is_stochastic(config.constraint))
    throw ConfigError("fitness: lexicographic requires constraint.kind=cardinality");
  if (config.stop.on_optimum && is_stochastic(config.constraint))
    throw ConfigError("stop: optimum requires constraint.kind=cardinality");
  const int b = integer_bound(config);
  for (int k : config.lo_targets) {
    if (k < 0 || k > b) throw ConfigError("lo_targets: every target must lie in [0, B]");
  }
  if (config.stop.target_lo && (*config.stop.target_lo < 0 || *config.stop.target_lo > static_cast<int>(config.n)))
    throw ConfigError("stop.target_lo: must lie in [0, n]");
}

}  // namespace lcea
