// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <filesystem>
#include <string>
#include <vector>

#include "factorsat/bundle.hpp"
#include "factorsat/numeric.hpp"

namespace factorsat::testing {

inline Instance make_instance(std::uint64_t p, std::uint64_t q, bool reduce = true) {
  GenerateOptions o;
  o.p = Natural(p);
  o.q = Natural(q);
  o.reduce = reduce;
  o.allow_equal = true;
  return generate(o);
}

/// All primes with exactly `bits` bits.
inline std::vector<std::uint64_t> primes_with_bits(unsigned bits) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = std::uint64_t{1} << (bits - 1); n < (std::uint64_t{1} << bits); ++n) {
    if (is_prime(Natural(n))) out.push_back(n);
  }
  return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("factorsat_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

}  // namespace factorsat::testing
