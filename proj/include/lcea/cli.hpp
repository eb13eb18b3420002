#pragma once

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lcea/config_io.hpp"
#include "lcea/csv.hpp"
#include "lcea/experiment.hpp"
#include "lcea/result_store.hpp"
#include "lcea/studies.hpp"

namespace lcea {

enum ExitCode : int { exit_ok = 0, exit_config_error = 1, exit_check_failed = 2 };

namespace detail {

struct StudyOptions {
  std::size_t runs = 200;
  std::uint64_t iterations = 40000;
  std::uint64_t seed = 31;
  std::size_t n = 100;
  std::size_t bound = 85;
};

inline int cmd_run(const std::string& path, const ResultStore& store, unsigned workers, std::ostream& out) {
  const auto config = parse_config(read_file(path));
  const auto results = run_experiment(config, workers);
  const auto dir = store.save(results);
  std::vector<std::optional<std::uint64_t>> times;
  for (const auto& r : results.runs) times.push_back(r.hitting_time_optimum);
  std::size_t exhausted = 0;
  for (const auto& t : times) exhausted += t ? 0 : 1;
  out << "experiment " << dir.string() << '\n';
  out << "runs " << results.runs.size() << ", optimum not reached in " << exhausted << '\n';
  return exit_ok;
}

inline int cmd_replicate(int id, const ResultStore& store, unsigned workers, std::ostream& out) {
  const auto figure = replicate_figure(id, workers);
  const auto fig_dir = store.root() / ("figure-" + std::to_string(id));
  std::filesystem::create_directories(fig_dir);
  std::ostringstream summary;
  summary << "figure " << id << ": " << figure.spec.title << '\n';
  for (const auto& s : figure.series) {
    const auto dir = store.save(s.results);
    const std::string tag = "mu" + std::to_string(s.results.config.mu);
    write_file(fig_dir / ("quantiles_" + tag + ".csv"), quantile_csv(s.quantiles));
    if (id == 1) {
      write_file(fig_dir / "trace.csv", trace_csv(0, s.results.runs.front().trace));
      summary << "lo_drops " << count_lo_drops(s.results.runs.front().trace) << '\n';
    }
    summary << tag << " experiment " << dir.filename().string() << " final-window median best_lo "
            << s.window_median_best_lo << '\n';
  }
  write_file(fig_dir / "summary.txt", summary.str());
  out << summary.str() << "written to " << fig_dir.string() << '\n';
  return exit_ok;
}

inline int cmd_scaling(const std::vector<std::size_t>& ns, BRule rule, FitnessKind fitness, std::size_t reps,
                       std::uint64_t seed, const ResultStore& store, unsigned workers, std::ostream& out) {
  for (auto n : ns) {
    if (n < 3) throw ConfigError("--n: every n must be >= 3");
  }
  const auto rows = scaling_study(ns, rule, fitness, reps, seed, workers);
  std::ostringstream csv;
  csv << "n,B,median_T,mean_T,predicted,ratio,exhausted\n";
  csv << std::setprecision(10);
  for (const auto& r : rows)
    csv << r.n << ',' << r.bound << ',' << r.median_time << ',' << r.mean_time << ',' << r.predicted << ','
        << r.ratio << ',' << r.exhausted << '\n';
  std::filesystem::create_directories(store.root());
  std::string rule_tag = to_string(rule);
  for (auto& ch : rule_tag) {
    if (ch == '/') ch = 'd';
  }
  const auto path = store.root() / ("scaling-" + rule_tag + "-" +
                                    (fitness == FitnessKind::penalized ? "penalized" : "lexicographic") + ".csv");
  write_file(path, csv.str());
  out << csv.str() << "written to " << path.string() << '\n';
  return exit_ok;
}

inline int cmd_verify_lemma(const std::string& which, const StudyOptions& o, unsigned workers, std::ostream& out) {
  out << std::setprecision(6);
  if (which == "5.1") {
    const int ks[] = {1, 2, 5, 10, 20};
    const auto report = verify_violation_bound(o.n, static_cast<int>(o.bound), 0.1, ks, 100000, o.seed);
    out << "Pr(W_x > B | ones = B) = " << report.frequency_at_bound << " (expected 0.5 +- 0.01) "
        << (report.at_bound_pass ? "PASS" : "FAIL") << '\n';
    for (const auto& p : report.points)
      out << "k=" << p.k << " frequency " << p.frequency << " bound " << p.bound << " +3sigma "
          << p.bound + 3 * p.sigma_binomial << ' ' << (p.pass ? "PASS" : "FAIL") << '\n';
    return report.pass ? exit_ok : exit_check_failed;
  }
  const auto config = trajectory_config(o.n, o.bound, FitnessKind::penalized, o.runs, o.iterations, o.seed, false);
  const auto study = collect_trajectories(config, 1000, workers);
  if (which == "3.2") {
    const auto report = verify_tail_distribution(study);
    for (const auto& c : report.checkpoints)
      out << "t=" << c.iteration << " tail-one frequency " << c.estimate.frequency << " +- "
          << c.estimate.half_width << ' ' << (c.pass ? "PASS" : "FAIL") << '\n';
    out << (report.pass ? "PASS" : "FAIL") << '\n';
    return report.pass ? exit_ok : exit_check_failed;
  }
  const auto jump = verify_jump_to_bound(study);
  out << "jump-to-bound frequency " << jump.estimate.frequency << " +- " << jump.estimate.half_width << " over "
      << jump.estimate.samples << " iterations, bound " << jump.bound << ' '
      << (jump.within_bound() ? "PASS" : "FAIL") << '\n';
  return jump.within_bound() ? exit_ok : exit_check_failed;
}

inline int cmd_verify_drift(const std::string& which, const StudyOptions& o, unsigned workers, std::ostream& out) {
  const DriftKind kind = which == "upper" ? DriftKind::upper : which == "lower" ? DriftKind::lower : DriftKind::lex;
  ExperimentConfig config;
  if (kind == DriftKind::lex) {
    // Runs to the optimum; the budget only caps runaway runs.
    config = trajectory_config(o.n, o.bound, FitnessKind::lexicographic, o.runs, 1'000'000, o.seed, true);
  } else {
    config = trajectory_config(o.n, o.bound, FitnessKind::penalized, o.runs, o.iterations, o.seed, false);
  }
  const auto study = collect_trajectories(config, config.stop.max_iterations, workers);
  const auto report = verify_drift(study, kind);
  out << std::setprecision(6) << "(natural logarithms throughout)\n";
  for (const auto& c : report.cells)
    out << c.label << ": mean " << c.estimate.mean << " +- " << c.estimate.half_width << " over "
        << c.estimate.transitions << " transitions, threshold " << c.threshold << ' '
        << (c.pass ? "PASS" : "FAIL") << '\n';
  return report.pass ? exit_ok : exit_check_failed;
}

}  // namespace detail

/// Command-line entry point. Exit codes: 0 success, 1 usage or config
/// error, 2 a verification check failed.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Evolutionary algorithms on LeadingOnes under cardinality and stochastic constraints"};
  app.require_subcommand(1);
  std::string results_root = "results";
  unsigned workers = 0;
  app.add_option("--results", results_root, "Result store root directory");
  app.add_option("--workers", workers, "Worker threads (0 = hardware concurrency)");

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run the experiment described by a config file");
  run_cmd->add_option("config", config_path, "Config file")->required();

  int figure_id = 0;
  auto* fig_cmd = app.add_subcommand("replicate-figure", "Replicate one of the stochastic-constraint figures");
  fig_cmd->add_option("figure", figure_id, "Figure id 1..7")->required();

  std::vector<std::size_t> ns{50, 100, 200};
  std::string b_rule = "n/2";
  std::string fitness = "penalized";
  std::size_t reps = 30;
  std::uint64_t scaling_seed = 1;
  auto* scaling_cmd = app.add_subcommand("scaling-study", "Hitting-time scaling versus n^2 + n(n-B) ln B");
  scaling_cmd->add_option("--n", ns, "Problem sizes")->delimiter(',');
  scaling_cmd->add_option("--b-rule", b_rule, "Bound rule")->check(CLI::IsMember({"n-1", "n/2", "3n/4"}));
  scaling_cmd->add_option("--fitness", fitness, "Fitness variant")
      ->check(CLI::IsMember({"penalized", "lexicographic"}));
  scaling_cmd->add_option("--reps", reps, "Repetitions per n");
  scaling_cmd->add_option("--seed", scaling_seed, "Base seed");

  detail::StudyOptions study;
  std::string lemma;
  auto* lemma_cmd = app.add_subcommand("verify-lemma", "Check a probability statement against simulation");
  lemma_cmd->add_option("lemma", lemma, "3.1 | 3.2 | 5.1")->required()->check(CLI::IsMember({"3.1", "3.2", "5.1"}));
  std::string drift;
  auto* drift_cmd = app.add_subcommand("verify-drift", "Check a potential's one-step drift against simulation");
  drift_cmd->add_option("potential", drift, "upper | lower | lex")
      ->required()
      ->check(CLI::IsMember({"upper", "lower", "lex"}));
  for (auto* cmd : {lemma_cmd, drift_cmd}) {
    cmd->add_option("--runs", study.runs, "Independent runs");
    cmd->add_option("--iterations", study.iterations, "Iterations per run");
    cmd->add_option("--seed", study.seed, "Base seed");
  }

  std::string plot_dir;
  auto* plot_cmd = app.add_subcommand("emit-plot", "Recompute plot data (quantile CSV) from stored traces");
  plot_cmd->add_option("experiment-dir", plot_dir, "Experiment directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return exit_config_error;
  }

  const ResultStore store(results_root);
  try {
    if (*run_cmd) return detail::cmd_run(config_path, store, workers, out);
    if (*fig_cmd) return detail::cmd_replicate(figure_id, store, workers, out);
    if (*scaling_cmd) {
      const BRule rule = b_rule == "n-1" ? BRule::n_minus_1 : b_rule == "n/2" ? BRule::half : BRule::three_quarters;
      const FitnessKind kind = fitness == "penalized" ? FitnessKind::penalized : FitnessKind::lexicographic;
      return detail::cmd_scaling(ns, rule, kind, reps, scaling_seed, store, workers, out);
    }
    if (*lemma_cmd) return detail::cmd_verify_lemma(lemma, study, workers, out);
    if (*drift_cmd) return detail::cmd_verify_drift(drift, study, workers, out);
    if (*plot_cmd) {
      out << "written " << ResultStore::emit_plot(plot_dir).string() << '\n';
      return exit_ok;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_config_error;
  }
  return exit_config_error;
}

}  // namespace lcea
