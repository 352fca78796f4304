// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace factorsat {

/// Arbitrary-precision non-negative integer.
class Natural {
 public:
  Natural() = default;
  Natural(std::uint64_t value);  // NOLINT(google-explicit-constructor)

  /// Parses a base-10 string of digits. Throws ParseError on anything else.
  static Natural from_decimal(std::string_view text);
  std::string to_decimal() const;

  /// Number of significant bits; 0 for zero.
  std::size_t bit_length() const;
  bool bit(std::size_t index) const;
  bool is_zero() const { return value_ == 0; }
  /// Throws Error if the value does not fit.
  std::uint64_t to_u64() const;

  const mpz_class& mpz() const { return value_; }
  static Natural from_mpz(mpz_class value);

  friend Natural operator*(const Natural& a, const Natural& b);
  friend Natural operator+(const Natural& a, const Natural& b);
  friend bool operator==(const Natural& a, const Natural& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Natural& a, const Natural& b);

 private:
  mpz_class value_{0};
};

/// Least-significant-bit-first binary expansion without leading-zero padding.
struct BitString {
  std::vector<std::uint8_t> bits;

  std::size_t size() const { return bits.size(); }
  bool operator[](std::size_t i) const { return bits[i] != 0; }
  friend bool operator==(const BitString&, const BitString&) = default;
};

/// Throws Error("zero has no bit-length") for n == 0.
BitString to_bits(const Natural& n);
Natural from_bits(const BitString& bits);

/// Miller-Rabin. Deterministic below 2^64 using the first twelve prime bases;
/// above that the same bases plus 32 pseudo-random bases derived from n, for an
/// error bound of at most 4^-32 = 2^-64 on composites.
bool is_prime(const Natural& n);

/// Uniform prime with exactly `bits` bits, reproducible for a fixed seed.
/// Rejection-samples odd candidates with the top bit forced.
Natural sample_prime(unsigned bits, std::uint64_t seed);

/// Samples p (n_p bits) and q (n_q bits) from independent streams derived from
/// one instance seed. p == q is rejected unless allow_equal is set.
std::pair<Natural, Natural> sample_prime_pair(unsigned n_p, unsigned n_q, std::uint64_t seed,
                                              bool allow_equal = false);

/// SplitMix64 finalizer; used to derive independent seeds from a base seed.
std::uint64_t mix_seed(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace factorsat
