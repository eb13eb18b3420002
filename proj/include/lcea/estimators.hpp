#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

#include "lcea/bit_vector.hpp"
#include "lcea/potentials.hpp"

namespace lcea {

/// Two-sided 99% standard-normal quantile.
inline constexpr double z99 = 2.5758293035489004;

/// State of the single (1+1) EA search point at one iteration.
struct StateRecord {
  std::uint32_t lo = 0;
  std::uint32_t ones = 0;
};

/// Consecutive states of one run, index = iteration.
using StatePath = std::vector<StateRecord>;

struct FrequencyEstimate {
  double frequency = 0.0;
  double half_width = 0.0;  // 99%
  std::size_t samples = 0;  // runs (tail estimator) or iterations (jump estimator)
};

/// Frequency of 1-bits at positions i > LO(x) across independent runs at one
/// checkpoint. Each run contributes its own frequency; the average over runs
/// is reported with a binomial 99% half-width based on the run count.
inline FrequencyEstimate estimate_tail_one_frequency(std::span<const BitVector> genomes) {
  double total = 0.0;
  std::size_t used = 0;
  for (const auto& x : genomes) {
    const std::size_t lo = leading_ones(x);
    if (lo == x.size()) continue;  // no tail
    // Ones right of the prefix; the critical bit itself is always 0.
    const std::size_t tail_ones = count_ones(x) - lo;
    total += static_cast<double>(tail_ones) / static_cast<double>(x.size() - lo);
    ++used;
  }
  if (used == 0) throw std::invalid_argument("estimate_tail_one_frequency: empty sample set");
  const double p = total / static_cast<double>(used);
  return {p, z99 * std::sqrt(p * (1.0 - p) / static_cast<double>(used)), used};
}

struct JumpToBoundEstimate {
  FrequencyEstimate estimate;
  double bound = 0.0;  // (n - B) / n
  bool within_bound() const { return estimate.frequency <= bound + estimate.half_width; }
};

/// Conditional frequency of reaching exactly B ones without changing LO,
/// among iterations whose current point has fewer than B ones.
inline JumpToBoundEstimate estimate_jump_to_bound_frequency(std::span<const StatePath> runs,
                                                            std::size_t n, std::size_t bound) {
  std::size_t qualifying = 0;
  std::size_t events = 0;
  for (const auto& path : runs) {
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      if (path[t].ones >= bound) continue;
      ++qualifying;
      if (path[t + 1].ones == bound && path[t + 1].lo == path[t].lo) ++events;
    }
  }
  if (qualifying == 0)
    throw std::invalid_argument("estimate_jump_to_bound_frequency: no qualifying iterations");
  const double p = static_cast<double>(events) / static_cast<double>(qualifying);
  JumpToBoundEstimate out;
  out.estimate = {p, z99 * std::sqrt(p * (1.0 - p) / static_cast<double>(qualifying)), qualifying};
  out.bound = static_cast<double>(n - bound) / static_cast<double>(n);
  return out;
}

enum class DriftConditioning { at_bound, below_bound, all };

struct DriftEstimate {
  double mean = 0.0;
  double half_width = 0.0;  // 99%, clustered by run
  std::size_t transitions = 0;
  std::size_t runs = 0;
};

/// Mean one-step potential change over pre-optimum feasible iterations.
///
/// Upper-bound and lex potentials report the gain f(x_{t+1}) - f(x_t); the
/// lower-bound potential reports the loss g(x_t) - g(x_{t+1}). Iterations are
/// correlated within a run, so the half-width treats runs as clusters
/// (ratio estimator).
inline DriftEstimate estimate_drift(std::span<const StatePath> runs, const PotentialSpec& potential,
                                    DriftConditioning conditioning, std::size_t bound) {
  const bool loss = std::holds_alternative<LowerBoundPotential>(potential);
  auto value = [&](const StateRecord& s) {
    return std::visit([&](const auto& p) { return p(s.lo, s.ones); }, potential);
  };

  std::vector<double> sums;
  std::vector<double> counts;
  for (const auto& path : runs) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      const auto& cur = path[t];
      const auto& nxt = path[t + 1];
      if (cur.ones > bound || nxt.ones > bound) continue;
      if (cur.lo == bound && cur.ones == bound) continue;  // optimum reached
      if (conditioning == DriftConditioning::at_bound && cur.ones != bound) continue;
      if (conditioning == DriftConditioning::below_bound && cur.ones >= bound) continue;
      const double delta = loss ? value(cur) - value(nxt) : value(nxt) - value(cur);
      sum += delta;
      ++count;
    }
    if (count > 0) {
      sums.push_back(sum);
      counts.push_back(static_cast<double>(count));
    }
  }
  if (sums.empty()) throw std::invalid_argument("estimate_drift: empty conditioning cell");

  double total = 0.0;
  double total_count = 0.0;
  for (std::size_t r = 0; r < sums.size(); ++r) {
    total += sums[r];
    total_count += counts[r];
  }
  DriftEstimate out;
  out.mean = total / total_count;
  out.transitions = static_cast<std::size_t>(total_count);
  out.runs = sums.size();
  if (sums.size() < 2) {
    out.half_width = std::numeric_limits<double>::infinity();
    return out;
  }
  double ss = 0.0;
  for (std::size_t r = 0; r < sums.size(); ++r) {
    const double resid = sums[r] - out.mean * counts[r];
    ss += resid * resid;
  }
  const double rr = static_cast<double>(sums.size());
  const double variance = rr / (rr - 1.0) * ss / (total_count * total_count);
  out.half_width = z99 * std::sqrt(variance);
  return out;
}

}  // namespace lcea
