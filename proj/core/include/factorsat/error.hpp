// Copyright 2026 The factorsat Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace factorsat {

/// Base class for recoverable errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Preprocessing derived a contradiction. Planted instances never trigger it.
class InconsistentInstance : public Error {
 public:
  using Error::Error;
};

/// A file did not match its documented text format.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Caller supplied options that cannot be honoured.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace factorsat
