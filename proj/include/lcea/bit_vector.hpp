#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lcea/random.hpp"

namespace lcea {

/// Fixed-length bit string, packed into 64-bit words.
///
/// Positions are 1-indexed: position p lives in bit (p-1) % 64 of word
/// (p-1) / 64. Bits past the length in the last word are always zero.
class BitVector {
 public:
  using word_type = std::uint64_t;
  static constexpr std::size_t word_bits = 64;

  /// All-zeros string of length n (n >= 1).
  explicit BitVector(std::size_t n) : n_(n), words_((n + word_bits - 1) / word_bits, 0) {
    if (n == 0) throw std::invalid_argument("BitVector length must be at least 1");
  }

  /// Parses '0'/'1' characters; spaces and underscores are ignored.
  static BitVector from_string(std::string_view text) {
    std::size_t n = 0;
    for (char c : text) {
      if (c == '0' || c == '1') {
        ++n;
      } else if (c != ' ' && c != '_') {
        throw std::invalid_argument("BitVector::from_string: unexpected character");
      }
    }
    BitVector x(n);
    std::size_t pos = 1;
    for (char c : text) {
      if (c == '0' || c == '1') x.set(pos++, c == '1');
    }
    return x;
  }

  static BitVector ones(std::size_t n) {
    BitVector x(n);
    for (auto& w : x.words_) w = ~word_type{0};
    x.clear_padding();
    return x;
  }

  /// 1^k 0^(n-k)
  static BitVector prefix_ones(std::size_t n, std::size_t k) {
    BitVector x(n);
    for (std::size_t p = 1; p <= k && p <= n; ++p) x.set(p, true);
    return x;
  }

  std::size_t size() const noexcept { return n_; }

  bool test(std::size_t pos) const {
    check(pos);
    return (words_[(pos - 1) / word_bits] >> ((pos - 1) % word_bits)) & 1U;
  }

  void set(std::size_t pos, bool value) {
    check(pos);
    const word_type mask = word_type{1} << ((pos - 1) % word_bits);
    auto& w = words_[(pos - 1) / word_bits];
    w = value ? (w | mask) : (w & ~mask);
  }

  void flip(std::size_t pos) {
    check(pos);
    words_[(pos - 1) / word_bits] ^= word_type{1} << ((pos - 1) % word_bits);
  }

  std::span<const word_type> words() const noexcept { return words_; }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t p = 1; p <= n_; ++p) {
      if (test(p)) s[p - 1] = '1';
    }
    return s;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  friend BitVector uniform_random(std::size_t n, RandomSource& rng);
  friend BitVector standard_bit_mutation(const BitVector& x, RandomSource& rng);

  void check(std::size_t pos) const {
    if (pos == 0 || pos > n_) throw std::out_of_range("BitVector position out of range");
  }

  void clear_padding() noexcept {
    const std::size_t tail = n_ % word_bits;
    if (tail != 0) words_.back() &= (word_type{1} << tail) - 1;
  }

  std::size_t n_;
  std::vector<word_type> words_;
};

/// Length of the all-ones prefix.
inline std::size_t leading_ones(const BitVector& x) noexcept {
  std::size_t count = 0;
  for (auto w : x.words()) {
    if (w == ~BitVector::word_type{0}) {
      count += BitVector::word_bits;
      continue;
    }
    count += static_cast<std::size_t>(std::countr_one(w));
    break;
  }
  return count < x.size() ? count : x.size();
}

inline std::size_t count_ones(const BitVector& x) noexcept {
  std::size_t count = 0;
  for (auto w : x.words()) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

inline std::size_t count_zeros(const BitVector& x) noexcept { return x.size() - count_ones(x); }

/// Each bit independently 1 with probability 1/2. Consumes one draw per
/// 64-bit word, low positions first.
inline BitVector uniform_random(std::size_t n, RandomSource& rng) {
  BitVector x(n);
  for (auto& w : x.words_) w = rng.next();
  x.clear_padding();
  return x;
}

// Probability (threshold + 1) / 2^64 for "draw <= threshold"; exactly 1 when n = 1.
inline std::uint64_t flip_threshold(std::size_t n) noexcept {
  return std::numeric_limits<std::uint64_t>::max() / n;
}

/// Flips every bit independently with probability 1/n. One draw per
/// position, in position order 1..n.
inline BitVector standard_bit_mutation(const BitVector& x, RandomSource& rng) {
  BitVector y = x;
  const std::uint64_t threshold = flip_threshold(x.size());
  std::size_t remaining = x.size();
  for (auto& w : y.words_) {
    const std::size_t bits = remaining < BitVector::word_bits ? remaining : BitVector::word_bits;
    BitVector::word_type mask = 0;
    for (std::size_t b = 0; b < bits; ++b) {
      if (rng.next() <= threshold) mask |= BitVector::word_type{1} << b;
    }
    w ^= mask;
    remaining -= bits;
  }
  return y;
}

}  // namespace lcea
