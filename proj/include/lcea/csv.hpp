#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lcea/engine.hpp"
#include "lcea/quantiles.hpp"

namespace lcea {

inline constexpr std::string_view trace_csv_header =
    "run_id,iteration,best_lo,second_worst_lo,best_ones,feasible_count";
inline constexpr std::string_view quantile_csv_header = "iteration,stat,q25,median,q75";

inline void write_trace_csv(std::ostream& out, std::size_t run_id, const Trace& trace, bool header = true) {
  if (header) out << trace_csv_header << '\n';
  for (const auto& r : trace.rows) {
    out << run_id << ',' << r.iteration << ',' << r.best_lo << ',';
    if (r.second_worst_lo) out << *r.second_worst_lo;
    out << ',' << r.best_ones << ',' << r.feasible_count << '\n';
  }
}

/// Rows ordered by iteration, then by series order.
inline void write_quantile_csv(std::ostream& out, std::span<const QuantileSeries> series) {
  out << quantile_csv_header << '\n';
  if (series.empty()) return;
  for (std::size_t i = 0; i < series.front().points.size(); ++i) {
    for (const auto& s : series) {
      const auto& p = s.points.at(i);
      out << p.iteration << ',' << s.stat << ',' << p.q25 << ',' << p.median << ',' << p.q75 << '\n';
    }
  }
}

inline std::string trace_csv(std::size_t run_id, const Trace& trace) {
  std::ostringstream out;
  write_trace_csv(out, run_id, trace);
  return out.str();
}

inline std::string quantile_csv(std::span<const QuantileSeries> series) {
  std::ostringstream out;
  write_quantile_csv(out, series);
  return out.str();
}

/// Writes `content` to `path` in binary mode (LF line endings preserved).
inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TraceFileRow {
  std::size_t run_id = 0;
  TraceRow row;
};

/// Parses a trace CSV produced by write_trace_csv.
inline std::vector<TraceFileRow> parse_trace_csv(std::string_view text) {
  std::vector<TraceFileRow> rows;
  bool first = true;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    const std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (first) {
      if (line != trace_csv_header) throw std::runtime_error("trace CSV: unexpected header");
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::string_view fields[6];
    std::string_view rest = line;
    for (int f = 0; f < 6; ++f) {
      const auto comma = rest.find(',');
      if ((comma == std::string_view::npos) != (f == 5))
        throw std::runtime_error("trace CSV line " + std::to_string(line_no) + ": expected 6 fields");
      fields[f] = rest.substr(0, comma);
      if (comma != std::string_view::npos) rest = rest.substr(comma + 1);
    }
    auto num = [&](std::string_view s) {
      long long v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw std::runtime_error("trace CSV line " + std::to_string(line_no) + ": bad number");
      return v;
    };
    TraceFileRow r;
    r.run_id = static_cast<std::size_t>(num(fields[0]));
    r.row.iteration = static_cast<std::uint64_t>(num(fields[1]));
    r.row.best_lo = static_cast<int>(num(fields[2]));
    if (!fields[3].empty()) r.row.second_worst_lo = static_cast<int>(num(fields[3]));
    r.row.best_ones = static_cast<int>(num(fields[4]));
    r.row.feasible_count = static_cast<int>(num(fields[5]));
    rows.push_back(r);
  }
  if (first) throw std::runtime_error("trace CSV: missing header");
  return rows;
}

}  // namespace lcea
