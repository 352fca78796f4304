// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#include "factorsat/numeric.hpp"

#include <array>
#include <cctype>
#include <random>

#include "factorsat/error.hpp"

namespace factorsat {

namespace {

constexpr std::array<unsigned, 12> kSmallPrimeBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
constexpr int kExtraRounds = 32;
constexpr unsigned kMaxCandidatesPerBit = 4096;

// One Miller-Rabin round; n odd, n > 3, n - 1 = d * 2^s.
bool passes_round(const mpz_class& n, const mpz_class& base, const mpz_class& d, unsigned long s) {
  mpz_class x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  const mpz_class n_minus_1 = n - 1;
  if (x == 1 || x == n_minus_1) return true;
  for (unsigned long r = 1; r < s; ++r) {
    x = (x * x) % n;
    if (x == n_minus_1) return true;
  }
  return false;
}

mpz_class random_bits(std::mt19937_64& rng, unsigned bits) {
  mpz_class out = 0;
  unsigned remaining = bits;
  while (remaining > 0) {
    const unsigned take = remaining >= 64 ? 64 : remaining;
    std::uint64_t word = rng();
    if (take < 64) word &= (std::uint64_t{1} << take) - 1;
    out <<= take;
    mpz_class chunk;
    mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
    out += chunk;
    remaining -= take;
  }
  return out;
}

}  // namespace

Natural::Natural(std::uint64_t value) {
  mpz_import(value_.get_mpz_t(), 1, 1, sizeof(value), 0, 0, &value);
}

Natural Natural::from_decimal(std::string_view text) {
  if (text.empty()) throw ParseError("empty decimal string");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("not a decimal natural: '" + std::string(text) + "'");
    }
  }
  return from_mpz(mpz_class(std::string(text), 10));
}

std::string Natural::to_decimal() const { return value_.get_str(10); }

std::size_t Natural::bit_length() const {
  if (value_ == 0) return 0;
  return mpz_sizeinbase(value_.get_mpz_t(), 2);
}

bool Natural::bit(std::size_t index) const { return mpz_tstbit(value_.get_mpz_t(), index) != 0; }

std::uint64_t Natural::to_u64() const {
  if (bit_length() > 64) throw Error("value does not fit in 64 bits: " + to_decimal());
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, 1, sizeof(out), 0, 0, value_.get_mpz_t());
  return out;
}

Natural Natural::from_mpz(mpz_class value) {
  if (value < 0) throw Error("negative value is not a natural");
  Natural n;
  n.value_ = std::move(value);
  return n;
}

Natural operator*(const Natural& a, const Natural& b) { return Natural::from_mpz(a.value_ * b.value_); }
Natural operator+(const Natural& a, const Natural& b) { return Natural::from_mpz(a.value_ + b.value_); }

std::strong_ordering operator<=>(const Natural& a, const Natural& b) {
  const int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

BitString to_bits(const Natural& n) {
  if (n.is_zero()) throw Error("zero has no bit-length");
  BitString out;
  const std::size_t len = n.bit_length();
  out.bits.resize(len);
  for (std::size_t i = 0; i < len; ++i) out.bits[i] = n.bit(i) ? 1 : 0;
  return out;
}

Natural from_bits(const BitString& bits) {
  mpz_class v = 0;
  for (std::size_t i = bits.size(); i-- > 0;) {
    v <<= 1;
    if (bits.bits[i]) v += 1;
  }
  return Natural::from_mpz(v);
}

bool is_prime(const Natural& n) {
  const mpz_class& v = n.mpz();
  if (v < 2) return false;
  for (unsigned p : kSmallPrimeBases) {
    if (v == p) return true;
    if (mpz_divisible_ui_p(v.get_mpz_t(), p) != 0) return false;
  }
  mpz_class d = v - 1;
  unsigned long s = 0;
  while (mpz_even_p(d.get_mpz_t()) != 0) {
    d >>= 1;
    ++s;
  }
  for (unsigned p : kSmallPrimeBases) {
    if (!passes_round(v, mpz_class(p), d, s)) return false;
  }
  if (n.bit_length() <= 64) return true;

  // Bases drawn from a stream keyed by n so the answer is reproducible.
  std::uint64_t low = 0;
  mpz_class masked = v & mpz_class("18446744073709551615");
  mpz_export(&low, nullptr, 1, sizeof(low), 0, 0, masked.get_mpz_t());
  std::mt19937_64 rng(mix_seed(low ^ n.bit_length()));
  const mpz_class span = v - 3;
  for (int round = 0; round < kExtraRounds; ++round) {
    mpz_class base = random_bits(rng, static_cast<unsigned>(n.bit_length()) + 64) % span + 2;
    if (!passes_round(v, base, d, s)) return false;
  }
  return true;
}

Natural sample_prime(unsigned bits, std::uint64_t seed) {
  if (bits < 2) throw Error("prime bit-length must be at least 2");
  std::mt19937_64 rng(mix_seed(seed));
  if (bits == 2) return Natural((rng() & 1) != 0 ? 3 : 2);
  const unsigned cap = kMaxCandidatesPerBit * bits;
  for (unsigned attempt = 0; attempt < cap; ++attempt) {
    mpz_class candidate = random_bits(rng, bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), 0);
    Natural n = Natural::from_mpz(candidate);
    if (is_prime(n)) return n;
  }
  throw Error("prime sampling exhausted " + std::to_string(cap) + " candidates for " +
              std::to_string(bits) + " bits");
}

std::pair<Natural, Natural> sample_prime_pair(unsigned n_p, unsigned n_q, std::uint64_t seed,
                                              bool allow_equal) {
  Natural p = sample_prime(n_p, derive_seed(seed, 1));
  constexpr std::uint64_t kMaxRedraws = 1024;
  for (std::uint64_t redraw = 0; redraw < kMaxRedraws; ++redraw) {
    Natural q = sample_prime(n_q, derive_seed(seed, 2, redraw));
    if (allow_equal || !(p == q)) return {std::move(p), std::move(q)};
  }
  throw Error("could not draw two distinct " + std::to_string(n_p) + "-bit primes");
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix_seed(mix_seed(mix_seed(base) ^ a) ^ (b * 0xD6E8FEB86659FD93ULL));
}

}  // namespace factorsat
