#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcea/engine.hpp"

namespace lcea {

/// Nearest-rank quantile: the ceil(percent/100 * N)-th order statistic
/// (1-based). `values` need not be sorted.
template <typename T>
T nearest_rank(std::vector<T> values, unsigned percent) {
  if (values.empty()) throw std::invalid_argument("nearest_rank: empty sample");
  if (percent == 0 || percent > 100) throw std::invalid_argument("nearest_rank: percent in 1..100");
  const std::size_t n = values.size();
  const std::size_t rank = (percent * n + 99) / 100;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(rank - 1), values.end());
  return values[rank - 1];
}

struct QuantilePoint {
  std::uint64_t iteration = 0;
  int q25 = 0;
  int median = 0;
  int q75 = 0;
  friend bool operator==(const QuantilePoint&, const QuantilePoint&) = default;
};

struct QuantileSeries {
  std::string stat;  // "best_lo" or "second_worst_lo"
  std::vector<QuantilePoint> points;
};

/// 0, every, 2*every, ..., up to `last` (inclusive when it is a multiple).
inline std::vector<std::uint64_t> regular_checkpoints(std::uint64_t last, std::uint64_t every = 100) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = 0; t <= last; t += every) out.push_back(t);
  return out;
}

/// Last trace row at or before `iteration` (runs that stopped early hold
/// their final state).
inline const TraceRow& row_at(const Trace& trace, std::uint64_t iteration) {
  if (trace.rows.empty()) throw std::invalid_argument("row_at: empty trace");
  auto it = std::upper_bound(trace.rows.begin(), trace.rows.end(), iteration,
                             [](std::uint64_t t, const TraceRow& r) { return t < r.iteration; });
  if (it == trace.rows.begin()) throw std::invalid_argument("row_at: checkpoint precedes trace");
  return *std::prev(it);
}

/// Quantiles of best_lo (and second_worst_lo when recorded) across runs at
/// each checkpoint.
inline std::vector<QuantileSeries> aggregate_quantiles(std::span<const RunResult> runs,
                                                       std::span<const std::uint64_t> checkpoints) {
  if (runs.empty()) throw std::invalid_argument("aggregate_quantiles: no runs");
  const bool has_second = runs.front().trace.rows.front().second_worst_lo.has_value();
  for (const auto& r : runs) {
    if (r.trace.rows.empty() || r.config_id != runs.front().config_id ||
        r.trace.rows.front().second_worst_lo.has_value() != has_second)
      throw std::invalid_argument("aggregate_quantiles: runs come from mismatched configurations");
  }

  auto series_for = [&](const std::string& stat, auto extract) {
    QuantileSeries s{stat, {}};
    std::vector<int> values(runs.size());
    for (auto t : checkpoints) {
      for (std::size_t i = 0; i < runs.size(); ++i) values[i] = extract(row_at(runs[i].trace, t));
      s.points.push_back({t, nearest_rank(values, 25), nearest_rank(values, 50), nearest_rank(values, 75)});
    }
    return s;
  };

  std::vector<QuantileSeries> out;
  out.push_back(series_for("best_lo", [](const TraceRow& r) { return r.best_lo; }));
  if (has_second)
    out.push_back(series_for("second_worst_lo", [](const TraceRow& r) { return *r.second_worst_lo; }));
  return out;
}

}  // namespace lcea
