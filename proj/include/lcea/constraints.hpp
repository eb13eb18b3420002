#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "lcea/bit_vector.hpp"
#include "lcea/random.hpp"

namespace lcea {

/// |x|_1 <= bound
struct Cardinality {
  int bound = 1;
  friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

/// sum of w_i over set bits <= bound, w_i ~ N(weight_mean, sigma^2) drawn
/// fresh on every evaluation.
struct NormalWeights {
  double weight_mean = 1.0;
  double sigma = 0.0;
  double bound = 1.0;
  friend bool operator==(const NormalWeights&, const NormalWeights&) = default;
};

/// |x|_1 <= y, y ~ U[center - epsilon, center + epsilon] drawn fresh on every
/// evaluation.
struct UniformBound {
  double center = 1.0;
  double epsilon = 0.0;
  friend bool operator==(const UniformBound&, const UniformBound&) = default;
};

using ConstraintModel = std::variant<Cardinality, NormalWeights, UniformBound>;

inline bool is_stochastic(const ConstraintModel& model) noexcept {
  return !std::holds_alternative<Cardinality>(model);
}

/// B of the model (the center for UniformBound).
inline double nominal_bound(const ConstraintModel& model) noexcept {
  return std::visit(
      [](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Cardinality>) return m.bound;
        else if constexpr (std::is_same_v<M, NormalWeights>) return m.bound;
        else return m.center;
      },
      model);
}

/// Throws std::invalid_argument when the model is inconsistent with length n.
inline void validate(const ConstraintModel& model, std::size_t n) {
  std::visit(
      [n](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Cardinality>) {
          if (m.bound < 1 || static_cast<std::size_t>(m.bound) > n)
            throw std::invalid_argument("cardinality bound B must satisfy 1 <= B <= n");
        } else if constexpr (std::is_same_v<M, NormalWeights>) {
          if (!std::isfinite(m.bound) || m.bound < 1.0)
            throw std::invalid_argument("normal-weight bound B must be >= 1");
          if (!std::isfinite(m.sigma) || m.sigma < 0.0)
            throw std::invalid_argument("sigma must be finite and >= 0");
          if (!std::isfinite(m.weight_mean))
            throw std::invalid_argument("mu_w must be finite");
        } else {
          if (!std::isfinite(m.center) || m.center < 1.0)
            throw std::invalid_argument("uniform-bound center B must be >= 1");
          if (!std::isfinite(m.epsilon) || m.epsilon < 0.0)
            throw std::invalid_argument("epsilon must be finite and >= 0");
        }
      },
      model);
}

struct ConstraintEvaluation {
  bool feasible = true;
  double load = 0.0;
  double bound_realized = 0.0;
};

/// One shared realization of the stochastic quantities, used when all
/// individuals of an iteration are judged against the same sample.
struct ConstraintSample {
  std::vector<double> weights;  // NormalWeights only, index p-1 for position p
  double bound = 0.0;
};

inline ConstraintSample draw_constraint_sample(const ConstraintModel& model, std::size_t n,
                                               RandomSource& rng) {
  ConstraintSample sample;
  if (const auto* m = std::get_if<NormalWeights>(&model)) {
    sample.weights.resize(n);
    for (auto& w : sample.weights) w = rng.normal(m->weight_mean, m->sigma);
    sample.bound = m->bound;
  } else if (const auto* m = std::get_if<UniformBound>(&model)) {
    sample.bound = rng.uniform(m->center - m->epsilon, m->center + m->epsilon);
  } else {
    sample.bound = std::get<Cardinality>(model).bound;
  }
  return sample;
}

namespace detail {

template <typename F>
void for_each_set_position(const BitVector& x, F&& f) {
  std::size_t base = 1;
  for (auto w : x.words()) {
    while (w != 0) {
      f(base + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
    base += BitVector::word_bits;
  }
}

inline ConstraintEvaluation make_evaluation(double load, double bound) {
  return {load <= bound, load, bound};
}

}  // namespace detail

/// Evaluates the constraint with fresh samples. NormalWeights draws one
/// weight per set bit in position order; UniformBound draws one bound;
/// Cardinality draws nothing.
inline ConstraintEvaluation evaluate_constraint(const ConstraintModel& model, const BitVector& x,
                                                RandomSource& rng) {
  if (const auto* m = std::get_if<Cardinality>(&model)) {
    return detail::make_evaluation(static_cast<double>(count_ones(x)), m->bound);
  }
  if (const auto* m = std::get_if<NormalWeights>(&model)) {
    double load = 0.0;
    detail::for_each_set_position(x, [&](std::size_t) { load += rng.normal(m->weight_mean, m->sigma); });
    return detail::make_evaluation(load, m->bound);
  }
  const auto& u = std::get<UniformBound>(model);
  const double y = rng.uniform(u.center - u.epsilon, u.center + u.epsilon);
  return detail::make_evaluation(static_cast<double>(count_ones(x)), y);
}

/// Evaluates against a pre-drawn sample (no rng use).
inline ConstraintEvaluation evaluate_constraint(const ConstraintModel& model, const BitVector& x,
                                                const ConstraintSample& sample) {
  if (std::holds_alternative<NormalWeights>(model)) {
    double load = 0.0;
    detail::for_each_set_position(x, [&](std::size_t p) { load += sample.weights[p - 1]; });
    return detail::make_evaluation(load, sample.bound);
  }
  return detail::make_evaluation(static_cast<double>(count_ones(x)), sample.bound);
}

inline std::string describe(const ConstraintModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Cardinality>)
          return "cardinality(B=" + std::to_string(m.bound) + ")";
        else if constexpr (std::is_same_v<M, NormalWeights>)
          return "normal(mu_w=" + std::to_string(m.weight_mean) + ", sigma=" +
                 std::to_string(m.sigma) + ", B=" + std::to_string(m.bound) + ")";
        else
          return "uniform(B=" + std::to_string(m.center) + ", epsilon=" + std::to_string(m.epsilon) +
                 ")";
      },
      model);
}

}  // namespace lcea
