#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "lcea/experiment_config.hpp"

namespace lcea {

// Flat `key = value` schema, one entry per line, '#' starts a comment.
//
//   n                  positive integer                       required
//   constraint.kind    cardinality | normal | uniform         required
//   constraint.B       integer (cardinality) or real >= 1     required
//   constraint.sigma   real >= 0                              required for normal
//   constraint.mu_w    real                                   normal only, default 1
//   constraint.epsilon real >= 0                              required for uniform
//   fitness            penalized | lexicographic              default penalized
//   mu                 positive integer                       default 1
//   budget             positive integer (iteration cap)       required
//   stop               optimum | budget                       default optimum for
//                                                             cardinality, else budget
//   stop.target_lo     integer in [0, n]                      optional
//   repetitions        positive integer                       required
//   seed               unsigned 64-bit integer                required
//   log_cadence        positive integer                       default 1
//   lo_targets         comma-separated integers in [0, B]     default empty
//   bound_sampling     per_individual | per_iteration         default per_individual
//   tie_break          offspring_survives | uniform_random    default offspring_survives

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_integer(std::string_view key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(std::string(key) + ": expected an integer, got '" + std::string(text) + "'");
  return value;
}

inline double parse_real(std::string_view key, std::string_view text) {
  double value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
    throw ConfigError(std::string(key) + ": expected a real number, got '" + std::string(text) + "'");
  return value;
}

inline std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline ExperimentConfig parse_config(std::string_view text) {
  static const std::set<std::string, std::less<>> known = {
      "n", "constraint.kind", "constraint.B", "constraint.sigma", "constraint.mu_w",
      "constraint.epsilon", "fitness", "mu", "budget", "stop", "stop.target_lo", "repetitions",
      "seed", "log_cadence", "lo_targets", "bound_sampling", "tie_break"};

  std::map<std::string, std::string, std::less<>> kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (!known.contains(key)) throw ConfigError(std::string(key) + ": unknown key");
    if (!kv.emplace(std::string(key), std::string(value)).second)
      throw ConfigError(std::string(key) + ": duplicate key");
  }

  auto required = [&](std::string_view key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(std::string(key) + ": missing required key");
    return it->second;
  };
  auto optional = [&](std::string_view key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };
  auto forbid = [&](std::string_view key, std::string_view kind) {
    if (kv.contains(key))
      throw ConfigError(std::string(key) + ": not applicable to constraint.kind=" + std::string(kind));
  };
  auto positive = [&](std::string_view key, std::uint64_t v) {
    if (v < 1) throw ConfigError(std::string(key) + ": must be >= 1");
    return v;
  };

  ExperimentConfig c;
  c.n = positive("n", detail::parse_integer<std::uint64_t>("n", required("n")));

  const std::string& kind = required("constraint.kind");
  const std::string& b_text = required("constraint.B");
  if (kind == "cardinality") {
    forbid("constraint.sigma", kind);
    forbid("constraint.mu_w", kind);
    forbid("constraint.epsilon", kind);
    const int b = detail::parse_integer<int>("constraint.B", b_text);
    if (b < 1) throw ConfigError("constraint.B: must be >= 1");
    if (static_cast<std::size_t>(b) > c.n) throw ConfigError("constraint.B: must be <= n");
    c.constraint = Cardinality{b};
  } else if (kind == "normal") {
    forbid("constraint.epsilon", kind);
    NormalWeights m;
    m.bound = detail::parse_real("constraint.B", b_text);
    if (!(m.bound >= 1.0)) throw ConfigError("constraint.B: must be >= 1");
    m.sigma = detail::parse_real("constraint.sigma", required("constraint.sigma"));
    if (!(m.sigma >= 0.0)) throw ConfigError("constraint.sigma: must be >= 0");
    if (auto mw = optional("constraint.mu_w")) m.weight_mean = detail::parse_real("constraint.mu_w", *mw);
    c.constraint = m;
  } else if (kind == "uniform") {
    forbid("constraint.sigma", kind);
    forbid("constraint.mu_w", kind);
    UniformBound m;
    m.center = detail::parse_real("constraint.B", b_text);
    if (!(m.center >= 1.0)) throw ConfigError("constraint.B: must be >= 1");
    m.epsilon = detail::parse_real("constraint.epsilon", required("constraint.epsilon"));
    if (!(m.epsilon >= 0.0)) throw ConfigError("constraint.epsilon: must be >= 0");
    c.constraint = m;
  } else {
    throw ConfigError("constraint.kind: expected cardinality, normal or uniform, got '" + kind + "'");
  }

  if (auto f = optional("fitness")) {
    if (*f == "penalized") c.fitness = FitnessKind::penalized;
    else if (*f == "lexicographic") c.fitness = FitnessKind::lexicographic;
    else throw ConfigError("fitness: expected penalized or lexicographic, got '" + *f + "'");
  }
  if (auto v = optional("mu")) c.mu = positive("mu", detail::parse_integer<std::uint64_t>("mu", *v));
  c.stop.max_iterations = positive("budget", detail::parse_integer<std::uint64_t>("budget", required("budget")));
  c.stop.on_optimum = !is_stochastic(c.constraint);
  if (auto v = optional("stop")) {
    if (*v == "optimum") c.stop.on_optimum = true;
    else if (*v == "budget") c.stop.on_optimum = false;
    else throw ConfigError("stop: expected optimum or budget, got '" + *v + "'");
  }
  if (auto v = optional("stop.target_lo")) c.stop.target_lo = detail::parse_integer<int>("stop.target_lo", *v);
  c.repetitions = positive("repetitions", detail::parse_integer<std::uint64_t>("repetitions", required("repetitions")));
  c.base_seed = detail::parse_integer<std::uint64_t>("seed", required("seed"));
  if (auto v = optional("log_cadence"))
    c.log_cadence = positive("log_cadence", detail::parse_integer<std::uint64_t>("log_cadence", *v));
  if (auto v = optional("lo_targets")) {
    std::string_view rest = *v;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      c.lo_targets.push_back(detail::parse_integer<int>("lo_targets", detail::trim(rest.substr(0, comma))));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
      if (detail::trim(rest).empty()) throw ConfigError("lo_targets: trailing comma");
    }
  }
  if (auto v = optional("bound_sampling")) {
    if (*v == "per_individual") c.bound_sampling = BoundSampling::per_individual;
    else if (*v == "per_iteration") c.bound_sampling = BoundSampling::per_iteration;
    else throw ConfigError("bound_sampling: expected per_individual or per_iteration, got '" + *v + "'");
  }
  if (auto v = optional("tie_break")) {
    if (*v == "offspring_survives") c.tie_break = TieBreak::offspring_survives;
    else if (*v == "uniform_random") c.tie_break = TieBreak::uniform_random;
    else throw ConfigError("tie_break: expected offspring_survives or uniform_random, got '" + *v + "'");
  }

  validate(c);
  return c;
}

/// Canonical text; every key written explicitly so snapshots are
/// self-describing. parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "n = " << c.n << '\n';
  if (const auto* m = std::get_if<Cardinality>(&c.constraint)) {
    out << "constraint.kind = cardinality\n";
    out << "constraint.B = " << m->bound << '\n';
  } else if (const auto* m = std::get_if<NormalWeights>(&c.constraint)) {
    out << "constraint.kind = normal\n";
    out << "constraint.B = " << detail::format_real(m->bound) << '\n';
    out << "constraint.sigma = " << detail::format_real(m->sigma) << '\n';
    out << "constraint.mu_w = " << detail::format_real(m->weight_mean) << '\n';
  } else {
    const auto& u = std::get<UniformBound>(c.constraint);
    out << "constraint.kind = uniform\n";
    out << "constraint.B = " << detail::format_real(u.center) << '\n';
    out << "constraint.epsilon = " << detail::format_real(u.epsilon) << '\n';
  }
  out << "fitness = " << (c.fitness == FitnessKind::penalized ? "penalized" : "lexicographic") << '\n';
  out << "mu = " << c.mu << '\n';
  out << "budget = " << c.stop.max_iterations << '\n';
  out << "stop = " << (c.stop.on_optimum ? "optimum" : "budget") << '\n';
  if (c.stop.target_lo) out << "stop.target_lo = " << *c.stop.target_lo << '\n';
  out << "repetitions = " << c.repetitions << '\n';
  out << "seed = " << c.base_seed << '\n';
  out << "log_cadence = " << c.log_cadence << '\n';
  out << "lo_targets = ";
  for (std::size_t i = 0; i < c.lo_targets.size(); ++i) out << (i ? "," : "") << c.lo_targets[i];
  out << '\n';
  out << "bound_sampling = "
      << (c.bound_sampling == BoundSampling::per_individual ? "per_individual" : "per_iteration") << '\n';
  out << "tie_break = "
      << (c.tie_break == TieBreak::offspring_survives ? "offspring_survives" : "uniform_random") << '\n';
  return out.str();
}

/// FNV-1a over the canonical serialization.
inline std::uint64_t config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string config_hash_hex(const ExperimentConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash(c)));
  return buf;
}

}  // namespace lcea
