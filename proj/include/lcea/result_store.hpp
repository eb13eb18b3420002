#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "lcea/config_io.hpp"
#include "lcea/csv.hpp"
#include "lcea/experiment.hpp"
#include "lcea/quantiles.hpp"

namespace lcea {

inline constexpr std::uint64_t quantile_checkpoint_every = 100;

/// Checkpoints 0, 100, 200, ... up to the longest run.
inline std::vector<std::uint64_t> default_checkpoints(std::span<const RunResult> runs) {
  std::uint64_t last = 0;
  for (const auto& r : runs) last = std::max(last, r.trace.rows.empty() ? 0 : r.trace.rows.back().iteration);
  return regular_checkpoints(last, quantile_checkpoint_every);
}

inline std::string summary_csv(const ExperimentResults& results) {
  std::ostringstream out;
  out << "run_id,iterations,hitting_time_optimum,budget_exhausted";
  for (int k : results.config.lo_targets) out << ",first_hit_" << k;
  out << '\n';
  for (const auto& r : results.runs) {
    out << r.run_id << ',' << r.iterations << ',';
    if (r.hitting_time_optimum) out << *r.hitting_time_optimum;
    out << ',' << (r.budget_exhausted ? 1 : 0);
    for (const auto& h : r.first_hit) {
      out << ',';
      if (h.iteration) out << *h.iteration;
    }
    out << '\n';
  }
  return out.str();
}

/// On-disk layout, one directory per experiment named by the config hash:
///
///   <root>/<hash>/config.cfg          canonical config snapshot
///   <root>/<hash>/summary.csv         hitting times per run
///   <root>/<hash>/quantiles.csv       q25/median/q75 every 100 iterations
///   <root>/<hash>/traces/run-NNNN.csv per-run trace
class ResultStore {
 public:
  explicit ResultStore(std::filesystem::path root) : root_(std::move(root)) {}

  const std::filesystem::path& root() const noexcept { return root_; }

  std::filesystem::path experiment_dir(const ExperimentConfig& config) const {
    return root_ / config_hash_hex(config);
  }

  /// Writes everything into a staging directory first, then renames it into
  /// place, replacing an earlier copy.
  std::filesystem::path save(const ExperimentResults& results) const {
    namespace fs = std::filesystem;
    const fs::path final_dir = experiment_dir(results.config);
    const fs::path staging = final_dir.string() + ".partial";
    fs::remove_all(staging);
    fs::create_directories(staging / "traces");
    write_file(staging / "config.cfg", serialize_config(results.config));
    write_file(staging / "summary.csv", summary_csv(results));
    const auto series = aggregate_quantiles(results.runs, default_checkpoints(results.runs));
    write_file(staging / "quantiles.csv", quantile_csv(series));
    for (const auto& r : results.runs)
      write_file(staging / "traces" / trace_file_name(r.run_id), trace_csv(r.run_id, r.trace));
    fs::remove_all(final_dir);
    fs::rename(staging, final_dir);
    return final_dir;
  }

  static std::string trace_file_name(std::size_t run_id) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "run-%04zu.csv", run_id);
    return buf;
  }

  static ExperimentConfig load_config(const std::filesystem::path& dir) {
    return parse_config(read_file(dir / "config.cfg"));
  }

  /// Rebuilds runs (traces only) from the stored per-run files.
  static std::vector<RunResult> load_traces(const std::filesystem::path& dir) {
    const auto config = load_config(dir);
    const auto id = config_hash(config);
    std::vector<RunResult> runs;
    for (std::size_t i = 0; i < config.repetitions; ++i) {
      RunResult r;
      r.run_id = i;
      r.config_id = id;
      for (const auto& row : parse_trace_csv(read_file(dir / "traces" / trace_file_name(i)))) {
        if (row.run_id != i) throw std::runtime_error("trace file for run " + std::to_string(i) + " holds another run");
        r.trace.rows.push_back(row.row);
      }
      if (r.trace.rows.empty()) throw std::runtime_error("empty trace for run " + std::to_string(i));
      r.iterations = r.trace.rows.back().iteration;
      runs.push_back(std::move(r));
    }
    return runs;
  }

  /// Recomputes quantiles from the stored traces into `quantiles.csv`.
  static std::filesystem::path emit_plot(const std::filesystem::path& dir) {
    const auto runs = load_traces(dir);
    const auto series = aggregate_quantiles(runs, default_checkpoints(runs));
    const auto path = dir / "quantiles.csv";
    write_file(path, quantile_csv(series));
    return path;
  }

  /// Reruns the stored config and compares every output byte for byte.
  static bool revalidate(const std::filesystem::path& dir, unsigned workers = 0) {
    const auto config = load_config(dir);
    const auto results = run_experiment(config, workers);
    if (read_file(dir / "summary.csv") != summary_csv(results)) return false;
    const auto series = aggregate_quantiles(results.runs, default_checkpoints(results.runs));
    if (read_file(dir / "quantiles.csv") != quantile_csv(series)) return false;
    for (const auto& r : results.runs) {
      if (read_file(dir / "traces" / trace_file_name(r.run_id)) != trace_csv(r.run_id, r.trace)) return false;
    }
    return true;
  }

 private:
  std::filesystem::path root_;
};

}  // namespace lcea
