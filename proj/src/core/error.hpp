// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace zkls {

enum class ErrorKind {
  InvalidArgument,
  Precondition,
  Numerical,
  Io,
};

// All failures inside the core are reported through this exception; the C
// layer maps the kind onto a status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

inline void require(bool ok, ErrorKind kind, const std::string& what) {
  if (!ok) fail(kind, what);
}

const char* kind_name(ErrorKind kind) noexcept;

}  // namespace zkls
