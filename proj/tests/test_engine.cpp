#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "lcea/engine.hpp"
#include "support/oracles.hpp"

using namespace lcea;

namespace {

ExperimentConfig cardinality_config(std::size_t n, int bound, std::size_t mu = 1) {
  ExperimentConfig c;
  c.n = n;
  c.constraint = Cardinality{bound};
  c.mu = mu;
  c.stop = {true, std::nullopt, 100000};
  return c;
}

Population make_population(const ExperimentConfig& config, std::initializer_list<const char*> genomes) {
  Population pop;
  RandomSource unused(0);
  for (const char* g : genomes) {
    pop.members.emplace_back(BitVector::from_string(g));
    evaluate(pop.members.back(), config, unused);
  }
  return pop;
}

// Offspring that step() will create from `pop` with a generator seeded `seed`.
BitVector predicted_offspring(const Population& pop, std::uint64_t seed) {
  RandomSource r(seed);
  const auto parent = r.below(pop.size());
  return standard_bit_mutation(pop.members[parent].genome, r);
}

std::uint32_t encode(const BitVector& x) {
  std::uint32_t code = 0;
  for (std::size_t p = 1; p <= x.size(); ++p) code |= static_cast<std::uint32_t>(x.test(p)) << (p - 1);
  return code;
}

}  // namespace

TEST(Step, StrictImprovementReplacesParent) {
  // n = 1 always flips: 0 -> 1 raises LO from 0 to 1.
  const auto config = cardinality_config(1, 1);
  auto pop = make_population(config, {"0"});
  RandomSource rng(1);
  step(pop, config, rng, 1);
  ASSERT_EQ(pop.size(), 1u);
  EXPECT_EQ(pop.members[0].genome.to_string(), "1");
  EXPECT_EQ(pop.members[0].birth, 1u);
}

TEST(Step, EqualFitnessOffspringSurvives) {
  const auto config = cardinality_config(6, 6);
  const auto start = make_population(config, {"110100"});
  int ties_seen = 0;
  for (std::uint64_t seed = 0; seed < 400 && ties_seen < 10; ++seed) {
    const auto y = predicted_offspring(start, seed);
    if (leading_ones(y) != 2 || y == start.members[0].genome) continue;
    auto pop = start;
    RandomSource rng(seed);
    step(pop, config, rng, 1);
    EXPECT_EQ(pop.members[0].genome, y);
    ++ties_seen;
  }
  EXPECT_EQ(ties_seen, 10);
}

TEST(Step, RemovesUniqueMinimum) {
  // mu = 2, fitness {5, 3}; an offspring with LO 4 displaces the LO-3 member.
  const auto config = cardinality_config(10, 10, 2);
  const auto start = make_population(config, {"1111100000", "1110000000"});
  bool found = false;
  for (std::uint64_t seed = 0; seed < 5000 && !found; ++seed) {
    const auto y = predicted_offspring(start, seed);
    if (leading_ones(y) != 4) continue;
    found = true;
    auto pop = start;
    RandomSource rng(seed);
    step(pop, config, rng, 1);
    ASSERT_EQ(pop.size(), 2u);
    EXPECT_EQ(pop.members[0].genome.to_string(), "1111100000");
    EXPECT_EQ(pop.members[1].genome, y);
  }
  EXPECT_TRUE(found);
}

TEST(Step, OldestMinimalMemberIsRemovedOnTies) {
  auto config = cardinality_config(8, 8, 3);
  auto start = make_population(config, {"11000000", "11000001", "11100000"});
  start.members[0].birth = 5;
  start.members[1].birth = 2;  // oldest of the two minimal members
  start.members[2].birth = 0;
  for (std::uint64_t seed = 0; seed < 5000; ++seed) {
    const auto y = predicted_offspring(start, seed);
    if (leading_ones(y) < 2) continue;  // offspring not worse than the minimum
    auto pop = start;
    RandomSource rng(seed);
    step(pop, config, rng, 9);
    EXPECT_EQ(pop.members[1].genome, y);
    EXPECT_EQ(pop.members[1].birth, 9u);
    return;
  }
  FAIL() << "no suitable seed";
}

TEST(Step, MatchesTextbookAcceptanceExhaustively) {
  // n = 3, B = 2: every start state, empirical successor distribution vs the
  // (1+1) EA transition matrix built with acceptance g(y) >= g(x).
  const int n = 3, bound = 2;
  const auto config = cardinality_config(n, bound);
  const auto p = oracle::one_plus_one_transitions(n, [&](std::uint32_t x) { return oracle::penalized(x, n, bound); });
  RandomSource rng(77);
  const int samples = 40000;
  for (std::uint32_t x = 0; x < (1U << n); ++x) {
    BitVector bx(n);
    for (int q = 0; q < n; ++q) bx.set(q + 1, (x >> q) & 1U);
    Population start;
    start.members.emplace_back(bx);
    evaluate(start.members.back(), config, rng);
    std::map<std::uint32_t, int> counts;
    for (int s = 0; s < samples; ++s) {
      auto pop = start;
      step(pop, config, rng, 1);
      ++counts[encode(pop.members[0].genome)];
    }
    for (std::uint32_t y = 0; y < (1U << n); ++y) {
      const double expected = p[x][y];
      const double sd = std::sqrt(std::max(0.0, expected * (1 - expected)) / samples);
      EXPECT_NEAR(static_cast<double>(counts[y]) / samples, expected, 5 * sd + 1e-12) << x << "->" << y;
    }
  }
}

TEST(Step, UniformTieBreakKeepsPopulationSize) {
  auto config = cardinality_config(20, 10, 4);
  config.tie_break = TieBreak::uniform_random;
  RandomSource rng(3);
  auto pop = initial_population(config, rng);
  for (std::uint64_t t = 1; t <= 2000; ++t) {
    step(pop, config, rng, t);
    ASSERT_EQ(pop.size(), 4u);
  }
}

TEST(Step, StochasticModelsKeepValidPopulation) {
  for (auto sampling : {BoundSampling::per_individual, BoundSampling::per_iteration}) {
    for (const ConstraintModel model : {ConstraintModel{NormalWeights{1.0, 0.1, 30.0}},
                                        ConstraintModel{UniformBound{30.0, std::sqrt(3.0)}}}) {
      ExperimentConfig config;
      config.n = 40;
      config.constraint = model;
      config.mu = 5;
      config.bound_sampling = sampling;
      config.stop = {false, std::nullopt, 1000};
      RandomSource rng(4);
      auto pop = initial_population(config, rng);
      for (std::uint64_t t = 1; t <= 1000; ++t) {
        step(pop, config, rng, t);
        ASSERT_EQ(pop.size(), 5u);
        for (const auto& m : pop.members) {
          ASSERT_EQ(m.genome.size(), 40u);
          ASSERT_EQ(m.lo, leading_ones(m.genome));
          ASSERT_EQ(m.ones, count_ones(m.genome));
        }
      }
    }
  }
}

TEST(Step, DeterministicElitismAndFeasibilityRetention) {
  for (std::size_t mu : {1u, 3u}) {
    auto config = cardinality_config(30, 8, mu);
    RandomSource rng(10 + mu);
    auto pop = initial_population(config, rng);
    auto best = [&] {
      FitnessValue b = pop.members.front().fitness;
      for (const auto& m : pop.members) b = std::max(b, m.fitness);
      return b;
    };
    FitnessValue previous = best();
    bool all_feasible = false;
    for (std::uint64_t t = 1; t <= 5000; ++t) {
      step(pop, config, rng, t);
      const auto now = best();
      ASSERT_GE(now, previous);
      previous = now;
      const bool feasible_now =
          std::all_of(pop.members.begin(), pop.members.end(), [](const Individual& m) { return m.feasible; });
      if (all_feasible) {
        ASSERT_TRUE(feasible_now);
      }
      all_feasible = all_feasible || feasible_now;
    }
    EXPECT_TRUE(all_feasible);
  }
}

TEST(Run, HittingTimeZeroWhenStartingAtOptimum) {
  // n = 1, B = 1: the initial bit is the optimum or one flip away from it.
  const auto config = cardinality_config(1, 1);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RandomSource replay(seed);
    const bool starts_optimal = uniform_random(1, replay).test(1);
    RandomSource rng(seed);
    const auto result = run(config, rng);
    ASSERT_TRUE(result.hitting_time_optimum.has_value());
    EXPECT_EQ(*result.hitting_time_optimum, starts_optimal ? 0u : 1u);
    EXPECT_FALSE(result.budget_exhausted);
  }
}

TEST(Run, TwoBitChainMatchesExactExpectation) {
  const auto config = cardinality_config(2, 1);
  const double exact = oracle::expected_optimization_time(2, 1);
  double total = 0;
  const int runs = 20000;
  for (int i = 0; i < runs; ++i) {
    auto rng = RandomSource::stream(5, i);
    total += static_cast<double>(*run(config, rng).hitting_time_optimum);
  }
  EXPECT_NEAR(total / runs / exact, 1.0, 0.04);
}

TEST(Run, DeterministicTrace) {
  auto config = cardinality_config(10, 5);
  config.log_cadence = 1;
  RandomSource a(123), b(123);
  const auto ra = run(config, a);
  const auto rb = run(config, b);
  EXPECT_EQ(ra.trace.rows, rb.trace.rows);
  EXPECT_EQ(ra.hitting_time_optimum, rb.hitting_time_optimum);
}

TEST(Run, TraceCadenceAndFinalRow) {
  ExperimentConfig config;
  config.n = 30;
  config.constraint = UniformBound{20.0, 1.0};
  config.mu = 2;
  config.stop = {false, std::nullopt, 1005};
  config.log_cadence = 10;
  RandomSource rng(1);
  const auto r = run(config, rng);
  ASSERT_EQ(r.trace.rows.size(), 102u);  // 0, 10, ..., 1000, 1005
  EXPECT_EQ(r.trace.rows.back().iteration, 1005u);
  EXPECT_TRUE(r.budget_exhausted);
  for (std::size_t i = 1; i < r.trace.rows.size(); ++i) {
    EXPECT_LT(r.trace.rows[i - 1].iteration, r.trace.rows[i].iteration);
    EXPECT_TRUE(r.trace.rows[i].second_worst_lo.has_value());
    EXPECT_LE(r.trace.rows[i].best_lo, 30);
  }
}

TEST(Run, FirstHitTargetsPrecedeOptimum) {
  auto config = cardinality_config(40, 30);
  config.lo_targets = {0, 10, 20, 30};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RandomSource rng(seed);
    const auto r = run(config, rng);
    ASSERT_TRUE(r.hitting_time_optimum);
    std::uint64_t previous = 0;
    for (const auto& hit : r.first_hit) {
      ASSERT_TRUE(hit.iteration);
      EXPECT_GE(*hit.iteration, previous);
      previous = *hit.iteration;
    }
    EXPECT_LE(*r.first_hit.back().iteration, *r.hitting_time_optimum);
  }
}

TEST(Run, TargetLoStopCondition) {
  auto config = cardinality_config(40, 30);
  config.stop = {false, 15, 1000000};
  RandomSource rng(2);
  const auto r = run(config, rng);
  EXPECT_FALSE(r.budget_exhausted);
  EXPECT_GE(r.trace.rows.back().best_lo, 15);
}

TEST(Run, BudgetExhaustionIsReported) {
  auto config = cardinality_config(100, 50);
  config.stop.max_iterations = 10;
  RandomSource rng(1);
  const auto r = run(config, rng);
  EXPECT_TRUE(r.budget_exhausted);
  EXPECT_EQ(r.iterations, 10u);
  EXPECT_FALSE(r.hitting_time_optimum);
}

TEST(Summarize, BestAndSecondWorst) {
  const auto config = cardinality_config(10, 10, 4);
  const auto pop = make_population(config, {"1100000000", "1111000000", "1000000000", "1110000000"});
  const auto row = summarize(pop, 7);
  EXPECT_EQ(row.iteration, 7u);
  EXPECT_EQ(row.best_lo, 4);
  EXPECT_EQ(row.best_ones, 4);
  EXPECT_EQ(row.second_worst_lo, 2);
  EXPECT_EQ(row.feasible_count, 4);
}
