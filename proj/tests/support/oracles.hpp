#pragma once

// Test-only reference computations. Nothing here calls into the library's
// evolutionary machinery; bit strings are plain integers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

// Bit i (0-based) of `mask` is position i+1.
inline int leading_ones(std::uint32_t x, int n) {
  int k = 0;
  while (k < n && ((x >> k) & 1U)) ++k;
  return k;
}

inline int ones(std::uint32_t x) { return __builtin_popcount(x); }

// Pr(x -> y) under independent flips with probability 1/n.
inline double mutation_probability(std::uint32_t x, std::uint32_t y, int n) {
  const int d = ones(x ^ y);
  const double p = 1.0 / n;
  return std::pow(p, d) * std::pow(1.0 - p, n - d);
}

// Solves A z = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t m = b.size();
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < m; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (std::size_t r = 0; r < m; ++r) b[r] /= a[r][r];
  return b;
}

// (1+1) EA transition matrix with textbook acceptance g(y) >= g(x).
inline std::vector<std::vector<double>> one_plus_one_transitions(int n, const std::function<double(std::uint32_t)>& g) {
  const std::uint32_t states = 1U << n;
  std::vector<std::vector<double>> p(states, std::vector<double>(states, 0.0));
  for (std::uint32_t x = 0; x < states; ++x) {
    for (std::uint32_t y = 0; y < states; ++y) {
      const double q = mutation_probability(x, y, n);
      if (g(y) >= g(x)) p[x][y] += q;
      else p[x][x] += q;
    }
  }
  return p;
}

// Penalized fitness under |x|_1 <= B: LO when feasible, B - |x|_1 otherwise.
inline double penalized(std::uint32_t x, int n, int bound) {
  return ones(x) <= bound ? leading_ones(x, n) : bound - ones(x);
}

// Expected number of steps of the (1+1) EA from a uniform start until
// reaching 1^B 0^(n-B).
inline double expected_optimization_time(int n, int bound) {
  const std::uint32_t states = 1U << n;
  const std::uint32_t target = (1U << bound) - 1;
  const auto p = one_plus_one_transitions(n, [&](std::uint32_t x) { return penalized(x, n, bound); });
  // h(x) = 1 + sum_y p[x][y] h(y) for x != target, h(target) = 0.
  std::vector<std::vector<double>> a(states, std::vector<double>(states, 0.0));
  std::vector<double> b(states, 0.0);
  for (std::uint32_t x = 0; x < states; ++x) {
    a[x][x] = 1.0;
    if (x == target) continue;
    for (std::uint32_t y = 0; y < states; ++y) a[x][y] -= p[x][y];
    b[x] = 1.0;
  }
  const auto h = solve(a, b);
  double mean = 0.0;
  for (double v : h) mean += v / states;
  return mean;
}

inline double harmonic(int k) {
  double s = 0.0;
  for (int i = 1; i <= k; ++i) s += 1.0 / i;
  return s;
}

// Closed form of the upper-bound potential at exactly B ones, LO = i:
// sum_{j=1}^{i} [ e n (1 + e (n-B)/(B-j+1)) + e n / (B-j+1) ].
inline double gB_closed_form(int i, int n, int bound) {
  const double e = std::numbers::e;
  double s = 0.0;
  for (int j = 1; j <= i; ++j) s += e * n * (1.0 + e * (n - bound) / (bound - j + 1.0)) + e * n / (bound - j + 1.0);
  return s;
}

// g_B(B) as the two telescoping series:
// e n H(B) + e n B + e^2 n (n-B) H(B).
inline double gB_at_optimum_series(int n, int bound) {
  const double e = std::numbers::e;
  return e * n * harmonic(bound) + e * n * bound + e * e * n * (n - bound) * harmonic(bound);
}

}  // namespace oracle
