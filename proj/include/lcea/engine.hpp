#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "lcea/bit_vector.hpp"
#include "lcea/constraints.hpp"
#include "lcea/experiment_config.hpp"
#include "lcea/fitness.hpp"
#include "lcea/random.hpp"

namespace lcea {

struct Individual {
  BitVector genome;
  std::size_t lo = 0;
  std::size_t ones = 0;
  FitnessValue fitness;
  bool feasible = false;
  std::uint64_t birth = 0;  // iteration that created it; 0 for the initial population

  explicit Individual(BitVector g, std::uint64_t born = 0)
      : genome(std::move(g)), lo(leading_ones(genome)), ones(count_ones(genome)), birth(born) {}
};

struct Population {
  std::vector<Individual> members;
  std::size_t size() const noexcept { return members.size(); }
};

namespace detail {
inline void assign_fitness(Individual& ind, const ExperimentConfig& config,
                           const ConstraintEvaluation& eval) {
  ind.feasible = eval.feasible;
  if (config.fitness == FitnessKind::lexicographic) {
    ind.fitness = lexicographic_fitness(config.n, ind.lo, ind.ones, integer_bound(config));
  } else {
    ind.fitness = penalized_fitness(ind.lo, eval);
  }
}

}  // namespace detail

/// Evaluates `ind` with fresh constraint samples and stores fitness and
/// feasibility.
inline void evaluate(Individual& ind, const ExperimentConfig& config, RandomSource& rng) {
  detail::assign_fitness(ind, config, evaluate_constraint(config.constraint, ind.genome, rng));
}

namespace detail {

// Evaluates `targets` in order with fresh samples according to the
// bound-sampling mode.
template <typename Range>
void evaluate_all(Range&& targets, const ExperimentConfig& config, RandomSource& rng) {
  if (is_stochastic(config.constraint) && config.bound_sampling == BoundSampling::per_iteration) {
    const auto sample = draw_constraint_sample(config.constraint, config.n, rng);
    for (Individual* ind : targets)
      assign_fitness(*ind, config, evaluate_constraint(config.constraint, ind->genome, sample));
  } else {
    for (Individual* ind : targets) evaluate(*ind, config, rng);
  }
}

}  // namespace detail

/// mu individuals drawn uniformly at random, evaluated once.
inline Population initial_population(const ExperimentConfig& config, RandomSource& rng) {
  Population pop;
  pop.members.reserve(config.mu + 1);
  for (std::size_t i = 0; i < config.mu; ++i) pop.members.emplace_back(uniform_random(config.n, rng));
  std::vector<Individual*> targets;
  for (auto& m : pop.members) targets.push_back(&m);
  detail::evaluate_all(targets, config, rng);
  return pop;
}

/// One iteration of the (mu+1) EA.
///
/// Selects a parent uniformly, mutates it, evaluates (re-evaluating every
/// member first under stochastic constraints) and removes one individual of
/// minimal fitness. With TieBreak::offspring_survives the oldest minimal
/// member goes and the offspring survives every tie; with uniform_random the
/// removed individual is drawn among all minimal ones.
inline void step(Population& pop, const ExperimentConfig& config, RandomSource& rng,
                 std::uint64_t iteration) {
  const std::size_t parent = static_cast<std::size_t>(rng.below(pop.size()));
  Individual offspring(standard_bit_mutation(pop.members[parent].genome, rng), iteration);

  if (is_stochastic(config.constraint)) {
    std::vector<Individual*> targets;
    targets.reserve(pop.size() + 1);
    for (auto& m : pop.members) targets.push_back(&m);
    targets.push_back(&offspring);
    detail::evaluate_all(targets, config, rng);
  } else {
    // Deterministic fitness is cached on members.
    evaluate(offspring, config, rng);
  }

  auto& members = pop.members;
  const FitnessValue member_min =
      std::min_element(members.begin(), members.end(),
                       [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; })
          ->fitness;

  if (config.tie_break == TieBreak::offspring_survives) {
    if (offspring.fitness < member_min) return;
    std::size_t victim = members.size();
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i].fitness == member_min &&
          (victim == members.size() || members[i].birth < members[victim].birth))
        victim = i;
    }
    members[victim] = std::move(offspring);
    return;
  }

  const FitnessValue overall_min = std::min(member_min, offspring.fitness);
  std::vector<std::size_t> tied;  // index members.size() stands for the offspring
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].fitness == overall_min) tied.push_back(i);
  }
  if (offspring.fitness == overall_min) tied.push_back(members.size());
  const std::size_t pick = tied.size() == 1 ? tied.front() : tied[rng.below(tied.size())];
  if (pick == members.size()) return;
  members[pick] = std::move(offspring);
}

struct TraceRow {
  std::uint64_t iteration = 0;
  int best_lo = 0;
  std::optional<int> second_worst_lo;  // only for mu >= 2
  int best_ones = 0;
  int feasible_count = 0;
  friend bool operator==(const TraceRow&, const TraceRow&) = default;
};

struct Trace {
  std::vector<TraceRow> rows;
};

/// Population statistics: best = fitness-maximal member, second worst =
/// member with the second-smallest fitness.
inline TraceRow summarize(const Population& pop, std::uint64_t iteration) {
  const auto& members = pop.members;
  std::vector<std::size_t> order(members.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return members[a].fitness < members[b].fitness;
  });
  // Among equally fit best members the first in member order wins.
  std::size_t best = order.back();
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].fitness == members[best].fitness) {
      best = i;
      break;
    }
  }
  TraceRow row;
  row.iteration = iteration;
  row.best_lo = static_cast<int>(members[best].lo);
  row.best_ones = static_cast<int>(members[best].ones);
  if (members.size() >= 2) row.second_worst_lo = static_cast<int>(members[order[1]].lo);
  row.feasible_count = static_cast<int>(
      std::count_if(members.begin(), members.end(), [](const Individual& m) { return m.feasible; }));
  return row;
}

struct FirstHit {
  int target = 0;
  std::optional<std::uint64_t> iteration;
  friend bool operator==(const FirstHit&, const FirstHit&) = default;
};

struct RunResult {
  std::size_t run_id = 0;
  std::uint64_t config_id = 0;                            // set by run_experiment
  std::uint64_t iterations = 0;                          // steps executed
  std::optional<std::uint64_t> hitting_time_optimum;     // cardinality model only
  std::vector<FirstHit> first_hit;                        // one per configured LO target
  bool budget_exhausted = false;                          // stopped by the budget cap
  Trace trace;
};

struct NoObserver {
  void operator()(std::uint64_t, const Population&) const noexcept {}
};

/// Runs the EA until the stop condition, recording a trace row every
/// `log_cadence` iterations (and at the final iteration). The observer sees
/// the population after initialization (iteration 0) and after every step.
template <typename Observer = NoObserver>
RunResult run(const ExperimentConfig& config, RandomSource& rng, std::size_t run_id = 0,
              Observer&& observer = {}) {
  RunResult result;
  result.run_id = run_id;
  for (int k : config.lo_targets) result.first_hit.push_back({k, std::nullopt});

  const bool deterministic = !is_stochastic(config.constraint);
  const int bound = integer_bound(config);

  Population pop = initial_population(config, rng);

  auto record_hits = [&](std::uint64_t t) {
    std::size_t best_feasible_lo = 0;
    bool any_feasible = false;
    for (const auto& m : pop.members) {
      if (!m.feasible) continue;
      any_feasible = true;
      best_feasible_lo = std::max(best_feasible_lo, m.lo);
      if (deterministic && !result.hitting_time_optimum && is_optimum(m.lo, m.ones, bound))
        result.hitting_time_optimum = t;
    }
    if (!any_feasible) return;
    for (auto& hit : result.first_hit) {
      if (!hit.iteration && static_cast<int>(best_feasible_lo) >= hit.target) hit.iteration = t;
    }
  };

  auto should_stop = [&]() {
    if (config.stop.on_optimum && result.hitting_time_optimum) return true;
    if (config.stop.target_lo) {
      for (const auto& m : pop.members) {
        if (m.feasible && static_cast<int>(m.lo) >= *config.stop.target_lo) return true;
      }
    }
    return false;
  };

  std::uint64_t t = 0;
  record_hits(t);
  observer(t, static_cast<const Population&>(pop));
  result.trace.rows.push_back(summarize(pop, t));
  bool stopped = should_stop();
  while (!stopped && t < config.stop.max_iterations) {
    ++t;
    step(pop, config, rng, t);
    record_hits(t);
    observer(t, static_cast<const Population&>(pop));
    stopped = should_stop();
    if (t % config.log_cadence == 0 || stopped || t == config.stop.max_iterations)
      result.trace.rows.push_back(summarize(pop, t));
  }
  result.iterations = t;
  result.budget_exhausted = !stopped;
  return result;
}

}  // namespace lcea
