#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lcea/bit_vector.hpp"

namespace lcea {

namespace detail {
inline void require_bounds(std::size_t n, std::size_t bound) {
  if (bound < 1 || bound >= n) throw std::invalid_argument("potential requires 1 <= B < n");
}
}  // namespace detail

/// Tabulated upper-bound potential for the (1+1) EA under |x|_1 <= B.
///
///   g_B(0) = 0,              g_<B(0) = e n / B
///   g_B(i) = e n (1 + e (n - B) / (B - i + 1)) + g_<B(i - 1)   for 1 <= i <= B
///   g_<B(i) = e n / (B - i) + g_B(i)                           for 1 <= i <  B
///
/// A state with exactly B ones and LO = i has potential g_B(i); one with
/// fewer than B ones has g_<B(i). The potential grows towards the optimum.
class UpperBoundPotential {
 public:
  UpperBoundPotential(std::size_t n, std::size_t bound) : n_(n), bound_(bound) {
    detail::require_bounds(n, bound);
    const double e = std::numbers::e;
    const double nn = static_cast<double>(n);
    const double slack = static_cast<double>(n - bound);
    at_bound_.assign(bound + 1, 0.0);
    below_bound_.assign(bound, 0.0);
    below_bound_[0] = e * nn / static_cast<double>(bound);
    for (std::size_t i = 1; i <= bound; ++i) {
      const double levels_left = static_cast<double>(bound - i + 1);
      at_bound_[i] = e * nn * (1.0 + e * slack / levels_left) + below_bound_[i - 1];
      if (i < bound) below_bound_[i] = e * nn / static_cast<double>(bound - i) + at_bound_[i];
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t bound() const noexcept { return bound_; }

  double at_bound(std::size_t lo) const {
    if (lo > bound_) throw std::out_of_range("g_B: LO must lie in [0, B]");
    return at_bound_[lo];
  }

  double below_bound(std::size_t lo) const {
    if (lo >= bound_) throw std::out_of_range("g_<B: LO must lie in [0, B-1]");
    return below_bound_[lo];
  }

  /// Potential of a feasible state (ones <= B).
  double operator()(std::size_t lo, std::size_t ones) const {
    if (ones > bound_) throw std::out_of_range("upper-bound potential undefined for infeasible states");
    return ones == bound_ ? at_bound(lo) : below_bound(lo);
  }

 private:
  std::size_t n_;
  std::size_t bound_;
  std::vector<double> at_bound_;
  std::vector<double> below_bound_;
};

inline double potential_gB(std::size_t i, std::size_t n, std::size_t bound) {
  return UpperBoundPotential(n, bound).at_bound(i);
}

inline double potential_gLessB(std::size_t i, std::size_t n, std::size_t bound) {
  return UpperBoundPotential(n, bound).below_bound(i);
}

/// Lower-bound potential
///   n |x|_1 / (B - LO + 1) + sum_{i=LO}^{B-1} n (n - B) / (32 e^2 (B - i)).
/// Decreases towards the optimum, where it equals n B. Defined for feasible
/// states (LO <= |x|_1 <= B).
class LowerBoundPotential {
 public:
  LowerBoundPotential(std::size_t n, std::size_t bound) : n_(n), bound_(bound) {
    detail::require_bounds(n, bound);
    const double scale = static_cast<double>(n) * static_cast<double>(n - bound) /
                         (32.0 * std::numbers::e * std::numbers::e);
    // suffix_[lo] = sum_{i=lo}^{B-1} scale / (B - i)
    suffix_.assign(bound + 1, 0.0);
    for (std::size_t i = bound; i-- > 0;)
      suffix_[i] = suffix_[i + 1] + scale / static_cast<double>(bound - i);
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t bound() const noexcept { return bound_; }

  double operator()(std::size_t lo, std::size_t ones) const {
    if (ones > bound_ || lo > ones)
      throw std::out_of_range("lower-bound potential undefined for infeasible states");
    return static_cast<double>(n_) * static_cast<double>(ones) /
               static_cast<double>(bound_ - lo + 1) +
           suffix_[lo];
  }

 private:
  std::size_t n_;
  std::size_t bound_;
  std::vector<double> suffix_;
};

inline double lower_bound_potential(const BitVector& x, std::size_t bound) {
  return LowerBoundPotential(x.size(), bound)(leading_ones(x), count_ones(x));
}

/// 3e LO(x) + |x|_0, the potential for the lexicographic variant.
class LexPotential {
 public:
  explicit LexPotential(std::size_t n) : n_(n) {}
  std::size_t n() const noexcept { return n_; }
  double operator()(std::size_t lo, std::size_t ones) const {
    return 3.0 * std::numbers::e * static_cast<double>(lo) + static_cast<double>(n_ - ones);
  }

 private:
  std::size_t n_;
};

using PotentialSpec = std::variant<UpperBoundPotential, LowerBoundPotential, LexPotential>;

/// (1/sqrt(pi)) exp(-k^2 / (2 n^2 sigma^2)), clamped to 1. Bounds
/// Pr(W_x > B) for |x|_1 <= B - k under N(1, sigma^2) weights.
inline double erfc_violation_bound(double k, double n, double sigma) {
  if (k < 1.0) throw std::invalid_argument("erfc_violation_bound: k must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("erfc_violation_bound: sigma must be > 0");
  const double exponent = -(k * k) / (2.0 * n * n * sigma * sigma);
  return std::min(1.0, std::exp(exponent) / std::sqrt(std::numbers::pi));
}

}  // namespace lcea
