#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "lcea/config_io.hpp"
#include "lcea/engine.hpp"
#include "lcea/experiment_config.hpp"
#include "lcea/quantiles.hpp"

namespace lcea {

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs task(i) for i in [0, count) on up to `workers` threads. The first
/// exception thrown by a task is rethrown after all threads join.
template <typename Task>
void parallel_for(std::size_t count, unsigned workers, Task&& task) {
  if (workers == 0) workers = default_workers();
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

struct ExperimentResults {
  ExperimentConfig config;
  std::vector<RunResult> runs;  // index = run_id
};

/// `repetitions` independent runs, run i seeded with stream(base_seed, i).
inline ExperimentResults run_experiment(const ExperimentConfig& config, unsigned workers = 0) {
  validate(config);
  ExperimentResults out{config, std::vector<RunResult>(config.repetitions)};
  const std::uint64_t id = config_hash(config);
  parallel_for(config.repetitions, workers, [&](std::size_t i) {
    RandomSource rng = RandomSource::stream(config.base_seed, i);
    out.runs[i] = run(config, rng, i);
    out.runs[i].config_id = id;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Runtime scaling

enum class BRule { n_minus_1, half, three_quarters };

inline std::size_t apply_b_rule(BRule rule, std::size_t n) {
  switch (rule) {
    case BRule::n_minus_1: return n - 1;
    case BRule::half: return n / 2;
    case BRule::three_quarters: return 3 * n / 4;
  }
  return n - 1;
}

inline std::string to_string(BRule rule) {
  switch (rule) {
    case BRule::n_minus_1: return "n-1";
    case BRule::half: return "n/2";
    case BRule::three_quarters: return "3n/4";
  }
  return {};
}

/// n^2 + n (n - B) ln B
inline double predicted_runtime(std::size_t n, std::size_t bound) {
  const double nn = static_cast<double>(n);
  return nn * nn + nn * static_cast<double>(n - bound) * std::log(static_cast<double>(bound));
}

struct ScalingRow {
  std::size_t n = 0;
  std::size_t bound = 0;
  double median_time = 0.0;
  double mean_time = 0.0;
  double predicted = 0.0;
  double ratio = 0.0;  // median / predicted
  std::size_t exhausted = 0;
};

/// Median of the defined values; runs that hit the budget are excluded only
/// while they stay below 10% of all runs.
inline std::vector<double> finished_times(std::span<const std::optional<std::uint64_t>> times,
                                          std::size_t* exhausted_out = nullptr) {
  std::vector<double> values;
  for (auto t : times) {
    if (t) values.push_back(static_cast<double>(*t));
  }
  const std::size_t exhausted = times.size() - values.size();
  if (exhausted_out) *exhausted_out = exhausted;
  if (exhausted * 10 >= times.size() && exhausted > 0)
    throw std::runtime_error("too many runs exhausted the iteration budget (" +
                             std::to_string(exhausted) + " of " + std::to_string(times.size()) + ")");
  return values;
}

inline ExperimentConfig scaling_config(std::size_t n, std::size_t bound, FitnessKind fitness,
                                       std::size_t repetitions, std::uint64_t seed,
                                       std::uint64_t budget = 1'000'000'000ULL) {
  ExperimentConfig c;
  c.n = n;
  c.constraint = Cardinality{static_cast<int>(bound)};
  c.fitness = fitness;
  c.mu = 1;
  c.stop = {true, std::nullopt, budget};
  c.repetitions = repetitions;
  c.base_seed = seed;
  c.log_cadence = budget;  // only first/last rows are needed
  return c;
}

inline std::vector<ScalingRow> scaling_study(std::span<const std::size_t> ns, BRule rule,
                                             FitnessKind fitness, std::size_t repetitions,
                                             std::uint64_t base_seed, unsigned workers = 0) {
  std::vector<ScalingRow> rows;
  for (std::size_t n : ns) {
    const std::size_t bound = apply_b_rule(rule, n);
    const auto results = run_experiment(scaling_config(n, bound, fitness, repetitions, base_seed + n), workers);
    std::vector<std::optional<std::uint64_t>> times;
    for (const auto& r : results.runs) times.push_back(r.hitting_time_optimum);
    ScalingRow row;
    row.n = n;
    row.bound = bound;
    const auto values = finished_times(times, &row.exhausted);
    row.median_time = nearest_rank(values, 50);
    row.mean_time = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    row.predicted = predicted_runtime(n, bound);
    row.ratio = row.median_time / row.predicted;
    rows.push_back(row);
  }
  return rows;
}

/// max/min of the ratios in a study
inline double ratio_spread(std::span<const double> ratios) {
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  return *hi / *lo;
}

struct TargetRow {
  std::size_t n = 0;
  std::size_t bound = 0;
  int target = 0;  // B - c (n - B)
  double median_first_hit = 0.0;
  double median_time = 0.0;
};

/// Time to first reach B - c(n - B) leading ones versus full optimization
/// time, (1+1) EA with penalized fitness.
inline std::vector<TargetRow> intermediate_target_study(std::span<const std::size_t> ns, BRule rule,
                                                        double c, std::size_t repetitions,
                                                        std::uint64_t base_seed, unsigned workers = 0) {
  std::vector<TargetRow> rows;
  for (std::size_t n : ns) {
    const std::size_t bound = apply_b_rule(rule, n);
    const int target = std::max(
        0, static_cast<int>(std::floor(static_cast<double>(bound) - c * static_cast<double>(n - bound))));
    auto config = scaling_config(n, bound, FitnessKind::penalized, repetitions, base_seed + n);
    config.lo_targets = {target};
    const auto results = run_experiment(config, workers);
    std::vector<std::optional<std::uint64_t>> hits, times;
    for (const auto& r : results.runs) {
      hits.push_back(r.first_hit.front().iteration);
      times.push_back(r.hitting_time_optimum);
    }
    rows.push_back({n, bound, target, nearest_rank(finished_times(hits), 50),
                    nearest_rank(finished_times(times), 50)});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Stochastic-constraint figures

struct FigureSpec {
  int id = 0;
  std::string title;
  std::vector<ExperimentConfig> configs;  // (1+1) first, then (10+1)
};

inline constexpr std::uint64_t figure_budget = 40000;
inline constexpr std::uint64_t figure_window = 10000;

/// Figure 1: single (1+1) run, n=100, B=85, N(1, 0.1), 10000 iterations.
/// Figures 2, 3, 6: N(1, 0.1) weights at B = 75, 95, 85.
/// Figures 4, 5, 7: U(B - sqrt 3, B + sqrt 3) bound at B = 75, 95, 85.
/// Figures 2-7 run mu = 1 and mu = 10, 30 repetitions, 40000 iterations.
inline FigureSpec figure_spec(int id) {
  if (id < 1 || id > 7) throw std::invalid_argument("unknown figure id " + std::to_string(id) + " (expected 1..7)");
  const std::size_t n = 100;
  ExperimentConfig base;
  base.n = n;
  base.fitness = FitnessKind::penalized;
  base.stop = {false, std::nullopt, figure_budget};
  base.repetitions = 30;
  base.base_seed = 20230000 + static_cast<std::uint64_t>(id);
  base.log_cadence = 10;

  FigureSpec spec;
  spec.id = id;
  if (id == 1) {
    base.constraint = NormalWeights{1.0, 0.1, 85.0};
    base.mu = 1;
    base.stop.max_iterations = 10000;
    base.repetitions = 1;
    base.log_cadence = 1;
    spec.title = "(1+1) EA sample run, n=100, B=85, N(1, 0.1)";
    spec.configs = {base};
    return spec;
  }
  const double bounds[] = {0, 0, 75, 95, 75, 95, 85, 85};
  const bool normal = id == 2 || id == 3 || id == 6;
  const double b = bounds[id];
  if (normal) {
    base.constraint = NormalWeights{1.0, 0.1, b};
    spec.title = "n=100, B=" + std::to_string(static_cast<int>(b)) + ", N(1, 0.1)";
  } else {
    base.constraint = UniformBound{b, std::sqrt(3.0)};
    spec.title = "n=100, B=" + std::to_string(static_cast<int>(b)) + ", U(B-sqrt3, B+sqrt3)";
  }
  ExperimentConfig single = base;
  single.mu = 1;
  ExperimentConfig population = base;
  population.mu = 10;
  spec.configs = {single, population};
  return spec;
}

struct FigureSeries {
  ExperimentResults results;
  std::vector<QuantileSeries> quantiles;
  double window_median_best_lo = 0.0;  // over the final `figure_window` iterations
};

struct FigureResult {
  FigureSpec spec;
  std::vector<FigureSeries> series;  // parallel to spec.configs
};

/// Median of the per-checkpoint median best_lo over checkpoints in
/// [last - window, last].
inline double window_median(const QuantileSeries& best_lo, std::uint64_t last, std::uint64_t window) {
  std::vector<int> medians;
  for (const auto& p : best_lo.points) {
    if (p.iteration + window >= last && p.iteration <= last) medians.push_back(p.median);
  }
  return nearest_rank(medians, 50);
}

/// Number of iterations at which best_lo is lower than in the previous row.
inline std::size_t count_lo_drops(const Trace& trace) {
  std::size_t drops = 0;
  for (std::size_t i = 1; i < trace.rows.size(); ++i) {
    if (trace.rows[i].best_lo < trace.rows[i - 1].best_lo) ++drops;
  }
  return drops;
}

inline FigureResult replicate_figure(int id, unsigned workers = 0) {
  FigureResult out{figure_spec(id), {}};
  for (const auto& config : out.spec.configs) {
    FigureSeries s;
    s.results = run_experiment(config, workers);
    const auto checkpoints = regular_checkpoints(config.stop.max_iterations, 100);
    s.quantiles = aggregate_quantiles(s.results.runs, checkpoints);
    s.window_median_best_lo =
        window_median(s.quantiles.front(), config.stop.max_iterations,
                      std::min(figure_window, config.stop.max_iterations));
    out.series.push_back(std::move(s));
  }
  return out;
}

}  // namespace lcea
