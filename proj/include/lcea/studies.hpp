#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lcea/estimators.hpp"
#include "lcea/experiment.hpp"
#include "lcea/potentials.hpp"

namespace lcea {

/// Per-iteration states and checkpoint snapshots of repeated (1+1) EA runs
/// under a cardinality constraint.
struct TrajectoryStudy {
  ExperimentConfig config;
  std::vector<StatePath> paths;                           // [run][iteration]
  std::vector<std::uint64_t> checkpoints;
  std::vector<std::vector<BitVector>> snapshots;          // [checkpoint][run]
};

inline ExperimentConfig trajectory_config(std::size_t n, std::size_t bound, FitnessKind fitness,
                                          std::size_t runs, std::uint64_t iterations,
                                          std::uint64_t seed, bool stop_on_optimum) {
  ExperimentConfig c;
  c.n = n;
  c.constraint = Cardinality{static_cast<int>(bound)};
  c.fitness = fitness;
  c.mu = 1;
  c.stop = {stop_on_optimum, std::nullopt, iterations};
  c.repetitions = runs;
  c.base_seed = seed;
  c.log_cadence = iterations;
  return c;
}

/// Runs `config` (mu must be 1) recording every state and a genome snapshot
/// every `checkpoint_every` iterations.
inline TrajectoryStudy collect_trajectories(const ExperimentConfig& config,
                                            std::uint64_t checkpoint_every, unsigned workers = 0) {
  if (config.mu != 1) throw std::invalid_argument("collect_trajectories: requires mu = 1");
  validate(config);
  TrajectoryStudy study;
  study.config = config;
  study.paths.resize(config.repetitions);
  study.checkpoints = regular_checkpoints(config.stop.max_iterations, checkpoint_every);
  const std::size_t n_checkpoints = study.checkpoints.size();
  std::vector<std::vector<std::optional<BitVector>>> per_run(config.repetitions);

  parallel_for(config.repetitions, workers, [&](std::size_t i) {
    auto& path = study.paths[i];
    auto& snaps = per_run[i];
    snaps.assign(n_checkpoints, std::nullopt);
    path.reserve(config.stop.max_iterations + 1);
    RandomSource rng = RandomSource::stream(config.base_seed, i);
    run(config, rng, i, [&](std::uint64_t t, const Population& pop) {
      const auto& x = pop.members.front();
      path.push_back({static_cast<std::uint32_t>(x.lo), static_cast<std::uint32_t>(x.ones)});
      if (t % checkpoint_every == 0 && t / checkpoint_every < n_checkpoints)
        snaps[t / checkpoint_every] = x.genome;
    });
  });

  study.snapshots.resize(n_checkpoints);
  for (std::size_t k = 0; k < n_checkpoints; ++k) {
    for (auto& snaps : per_run) {
      if (snaps[k]) study.snapshots[k].push_back(std::move(*snaps[k]));
    }
  }
  return study;
}

// ---------------------------------------------------------------------------
// Verification reports

struct TailCheckpoint {
  std::uint64_t iteration = 0;
  FrequencyEstimate estimate;
  bool pass = false;  // frequency <= 1/2 + half-width
};

struct TailReport {
  std::vector<TailCheckpoint> checkpoints;
  bool pass = true;
};

/// Tail bits right of the leading-ones prefix are 1 with probability <= 1/2.
inline TailReport verify_tail_distribution(const TrajectoryStudy& study) {
  TailReport report;
  for (std::size_t k = 0; k < study.checkpoints.size(); ++k) {
    if (study.snapshots[k].empty()) continue;
    TailCheckpoint c;
    c.iteration = study.checkpoints[k];
    c.estimate = estimate_tail_one_frequency(study.snapshots[k]);
    c.pass = c.estimate.frequency <= 0.5 + c.estimate.half_width;
    report.pass = report.pass && c.pass;
    report.checkpoints.push_back(c);
  }
  return report;
}

inline JumpToBoundEstimate verify_jump_to_bound(const TrajectoryStudy& study) {
  return estimate_jump_to_bound_frequency(study.paths, study.config.n,
                                          static_cast<std::size_t>(integer_bound(study.config)));
}

enum class DriftKind { upper, lower, lex };

struct DriftCell {
  std::string label;
  DriftEstimate estimate;
  double threshold = 0.0;
  bool pass = false;
};

struct DriftReport {
  std::vector<DriftCell> cells;
  bool pass = true;
};

/// Upper: gain >= 1 in both the |x|_1 = B and |x|_1 < B cells.
/// Lower: loss <= 10 in each cell.
/// Lex: gain >= 1/(e n) over all pre-optimum iterations.
/// Every comparison allows the 99% half-width.
inline DriftReport verify_drift(const TrajectoryStudy& study, DriftKind kind) {
  const std::size_t n = study.config.n;
  const auto bound = static_cast<std::size_t>(integer_bound(study.config));
  DriftReport report;
  auto add = [&](std::string label, const PotentialSpec& p, DriftConditioning cond, double threshold,
                 bool at_least) {
    DriftCell cell;
    cell.label = std::move(label);
    cell.estimate = estimate_drift(study.paths, p, cond, bound);
    cell.threshold = threshold;
    cell.pass = at_least ? cell.estimate.mean >= threshold - cell.estimate.half_width
                         : cell.estimate.mean <= threshold + cell.estimate.half_width;
    report.pass = report.pass && cell.pass;
    report.cells.push_back(std::move(cell));
  };
  switch (kind) {
    case DriftKind::upper: {
      const PotentialSpec p = UpperBoundPotential(n, bound);
      add("gain | ones=B", p, DriftConditioning::at_bound, 1.0, true);
      add("gain | ones<B", p, DriftConditioning::below_bound, 1.0, true);
      break;
    }
    case DriftKind::lower: {
      const PotentialSpec p = LowerBoundPotential(n, bound);
      add("loss | ones=B", p, DriftConditioning::at_bound, 10.0, false);
      add("loss | ones<B", p, DriftConditioning::below_bound, 10.0, false);
      break;
    }
    case DriftKind::lex: {
      const PotentialSpec p = LexPotential(n);
      add("gain | all", p, DriftConditioning::all, 1.0 / (std::numbers::e * static_cast<double>(n)), true);
      break;
    }
  }
  return report;
}

struct ViolationPoint {
  int k = 0;  // |x|_1 = B - k
  std::size_t samples = 0;
  double frequency = 0.0;
  double sigma_binomial = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct ViolationReport {
  double frequency_at_bound = 0.0;  // |x|_1 = B
  bool at_bound_pass = false;       // within 1/2 +- 0.01
  std::vector<ViolationPoint> points;
  bool pass = false;
};

/// Monte Carlo violation frequency of Pr(W_x > B) under N(1, sigma^2)
/// weights against the exponential bound.
inline ViolationReport verify_violation_bound(std::size_t n, int bound, double sigma,
                                              std::span<const int> ks, std::size_t samples,
                                              std::uint64_t seed) {
  const ConstraintModel model = NormalWeights{1.0, sigma, static_cast<double>(bound)};
  auto violation_frequency = [&](int ones, std::uint64_t stream) {
    RandomSource rng = RandomSource::stream(seed, stream);
    const BitVector x = BitVector::prefix_ones(n, static_cast<std::size_t>(ones));
    std::size_t violations = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      if (!evaluate_constraint(model, x, rng).feasible) ++violations;
    }
    return static_cast<double>(violations) / static_cast<double>(samples);
  };

  ViolationReport report;
  report.frequency_at_bound = violation_frequency(bound, 0);
  report.at_bound_pass = std::abs(report.frequency_at_bound - 0.5) <= 0.01;
  report.pass = report.at_bound_pass;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    ViolationPoint p;
    p.k = ks[i];
    p.samples = samples;
    p.frequency = violation_frequency(bound - ks[i], i + 1);
    p.bound = erfc_violation_bound(ks[i], static_cast<double>(n), sigma);
    p.sigma_binomial = std::sqrt(p.frequency * (1.0 - p.frequency) / static_cast<double>(samples));
    p.pass = p.frequency <= p.bound + 3.0 * p.sigma_binomial;
    report.pass = report.pass && p.pass;
    report.points.push_back(p);
  }
  return report;
}

}  // namespace lcea
