// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <set>

#include "factorsat/error.hpp"
#include "factorsat/numeric.hpp"

namespace factorsat {
namespace {

TEST(Natural, DecimalRoundTrip) {
  const std::string big = "340282366920938463463374607431768211457";
  EXPECT_EQ(Natural::from_decimal(big).to_decimal(), big);
  EXPECT_EQ(Natural::from_decimal("0").to_decimal(), "0");
  EXPECT_THROW(Natural::from_decimal(""), ParseError);
  EXPECT_THROW(Natural::from_decimal("12a"), ParseError);
  EXPECT_THROW(Natural::from_decimal("-5"), ParseError);
}

TEST(Natural, Arithmetic) {
  EXPECT_EQ(Natural(11) * Natural(13), Natural(143));
  EXPECT_EQ((Natural(11) + Natural(13)).to_u64(), 24U);
  EXPECT_LT(Natural(11), Natural(13));
  EXPECT_EQ(Natural(143).bit_length(), 8U);
  EXPECT_EQ(Natural(0).bit_length(), 0U);
  EXPECT_TRUE(Natural(143).bit(7));
  EXPECT_FALSE(Natural(143).bit(6));
  EXPECT_THROW(Natural::from_decimal("36893488147419103232").to_u64(), Error);
}

TEST(Bits, LsbFirstWithoutPadding) {
  const BitString b = to_bits(Natural(143));
  EXPECT_EQ(b.bits, (std::vector<std::uint8_t>{1, 1, 1, 1, 0, 0, 0, 1}));
  EXPECT_EQ(from_bits(b), Natural(143));
  EXPECT_EQ(to_bits(Natural(1)).size(), 1U);
  EXPECT_THROW(to_bits(Natural(0)), Error);
}

TEST(Bits, RoundTripRandomWide) {
  const Natural n = Natural::from_decimal("98765432109876543210987654321");
  EXPECT_EQ(from_bits(to_bits(n)), n);
  EXPECT_EQ(to_bits(n).size(), n.bit_length());
}

TEST(IsPrime, MatchesSieveBelowTenThousand) {
  std::vector<bool> composite(10000, false);
  composite[0] = composite[1] = true;
  for (std::size_t i = 2; i * i < composite.size(); ++i) {
    if (composite[i]) continue;
    for (std::size_t j = i * i; j < composite.size(); j += i) composite[j] = true;
  }
  for (std::uint64_t n = 0; n < composite.size(); ++n) EXPECT_EQ(is_prime(Natural(n)), !composite[n]) << n;
}

TEST(IsPrime, HardCases) {
  for (std::uint64_t carmichael : {561ULL, 1105ULL, 1729ULL, 2465ULL, 41041ULL, 825265ULL}) {
    EXPECT_FALSE(is_prime(Natural(carmichael))) << carmichael;
  }
  // Strong pseudoprime to bases 2..37 is above 2^64; check a large known prime and composite.
  EXPECT_TRUE(is_prime(Natural::from_decimal("170141183460469231731687303715884105727")));   // 2^127 - 1
  EXPECT_FALSE(is_prime(Natural::from_decimal("340282366920938463463374607431768211457")));  // 2^128 + 1
  EXPECT_TRUE(is_prime(Natural(18446744073709551557ULL)));                                    // largest 64-bit prime
  EXPECT_FALSE(is_prime(Natural(3825123056546413051ULL)));  // strong pseudoprime to bases 2..23
}

TEST(SamplePrime, ExactWidthAndDeterminism) {
  for (unsigned bits = 2; bits <= 40; ++bits) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const Natural p = sample_prime(bits, seed);
      EXPECT_EQ(p.bit_length(), bits);
      EXPECT_TRUE(is_prime(p));
      EXPECT_EQ(p, sample_prime(bits, seed));
    }
  }
  const Natural wide = sample_prime(256, 99);
  EXPECT_EQ(wide.bit_length(), 256U);
  EXPECT_TRUE(is_prime(wide));
}

TEST(SamplePrime, FourBitPrimesAreElevenAndThirteen) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed = 0; seed < 64; ++seed) seen.insert(sample_prime(4, seed).to_u64());
  EXPECT_EQ(seen, (std::set<std::uint64_t>{11, 13}));
}

TEST(SamplePrime, CoversAllSmallPrimes) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t seed = 0; seed < 400; ++seed) seen.insert(sample_prime(6, seed).to_u64());
  EXPECT_EQ(seen, (std::set<std::uint64_t>{37, 41, 43, 47, 53, 59, 61}));
}

TEST(SamplePrimePair, DistinctUnlessAllowed) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto [p, q] = sample_prime_pair(4, 4, seed);
    EXPECT_NE(p, q);
    EXPECT_EQ(sample_prime_pair(4, 4, seed), std::make_pair(p, q));
  }
  bool saw_equal = false;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto [p, q] = sample_prime_pair(3, 3, seed, true);
    saw_equal |= p == q;
  }
  EXPECT_TRUE(saw_equal);  // 3-bit primes are 5 and 7
  const auto [p, q] = sample_prime_pair(5, 9, 3);
  EXPECT_EQ(p.bit_length(), 5U);
  EXPECT_EQ(q.bit_length(), 9U);
}

TEST(Seeds, DerivedStreamsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 30; ++a) {
    for (std::uint64_t b = 0; b < 30; ++b) seen.insert(derive_seed(42, a, b));
  }
  EXPECT_EQ(seen.size(), 900U);
  EXPECT_NE(mix_seed(0), mix_seed(1));
}

}  // namespace
}  // namespace factorsat
