#pragma once

#include <compare>
#include <cstddef>
#include <string>

#include "lcea/bit_vector.hpp"
#include "lcea/constraints.hpp"

namespace lcea {

enum class FitnessKind { penalized, lexicographic };

/// Totally ordered fitness of either variant.
///
/// Scalar values compare numerically. Lexicographic values compare by
/// (leading ones, zeros); the lexicographic variant's infeasible branch holds
/// -|x|_1 and ranks below every feasible lexicographic value. Scalar and
/// lexicographic values are never compared with each other.
class FitnessValue {
 public:
  enum class Kind { scalar, lex, lex_infeasible };

  constexpr FitnessValue() = default;

  static constexpr FitnessValue scalar(double v) { return {Kind::scalar, 0, v, 0}; }
  static constexpr FitnessValue lex(int lo, int zeros) {
    return {Kind::lex, 1, static_cast<double>(lo), zeros};
  }
  static constexpr FitnessValue lex_infeasible(int ones) {
    return {Kind::lex_infeasible, 0, -static_cast<double>(ones), 0};
  }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_feasible_lex() const { return kind_ == Kind::lex; }
  /// Scalar value; for lex_infeasible the penalty -|x|_1.
  constexpr double value() const { return primary_; }
  constexpr int lo() const { return static_cast<int>(primary_); }
  constexpr int zeros() const { return secondary_; }

  friend constexpr std::partial_ordering operator<=>(const FitnessValue& a, const FitnessValue& b) {
    if (auto c = a.tier_ <=> b.tier_; c != 0) return c;
    if (auto c = a.primary_ <=> b.primary_; c != 0) return c;
    return a.secondary_ <=> b.secondary_;
  }
  friend constexpr bool operator==(const FitnessValue& a, const FitnessValue& b) {
    return a.tier_ == b.tier_ && a.primary_ == b.primary_ && a.secondary_ == b.secondary_;
  }

  std::string to_string() const {
    switch (kind_) {
      case Kind::scalar: return std::to_string(primary_);
      case Kind::lex: return "(" + std::to_string(lo()) + ", " + std::to_string(secondary_) + ")";
      case Kind::lex_infeasible: return "infeasible(" + std::to_string(primary_) + ")";
    }
    return {};
  }

 private:
  constexpr FitnessValue(Kind k, int tier, double primary, int secondary)
      : kind_(k), tier_(tier), primary_(primary), secondary_(secondary) {}

  Kind kind_ = Kind::scalar;
  int tier_ = 0;
  double primary_ = 0.0;
  int secondary_ = 0;
};

/// LO(x) when feasible, otherwise bound_realized - load (< 0).
inline FitnessValue penalized_fitness(std::size_t lo, const ConstraintEvaluation& eval) {
  if (eval.feasible) return FitnessValue::scalar(static_cast<double>(lo));
  return FitnessValue::scalar(eval.bound_realized - eval.load);
}

inline FitnessValue penalized_fitness(const BitVector& x, const ConstraintEvaluation& eval) {
  return penalized_fitness(leading_ones(x), eval);
}

inline FitnessValue lexicographic_fitness(std::size_t n, std::size_t lo, std::size_t ones,
                                          int bound) {
  if (static_cast<long long>(ones) <= bound)
    return FitnessValue::lex(static_cast<int>(lo), static_cast<int>(n - ones));
  return FitnessValue::lex_infeasible(static_cast<int>(ones));
}

/// (LO(x), |x|_0) if |x|_1 <= B, else -|x|_1 ranked below all feasible values.
inline FitnessValue lexicographic_fitness(const BitVector& x, int bound) {
  return lexicographic_fitness(x.size(), leading_ones(x), count_ones(x), bound);
}

/// x == 1^B 0^(n-B)
inline bool is_optimum(std::size_t lo, std::size_t ones, int bound) noexcept {
  return static_cast<long long>(lo) == bound && static_cast<long long>(ones) == bound;
}

inline bool is_optimum(const BitVector& x, int bound) noexcept {
  return is_optimum(leading_ones(x), count_ones(x), bound);
}

}  // namespace lcea
