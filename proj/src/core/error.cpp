// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/error.hpp"

namespace zkls {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

const char* kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::Numerical: return "numerical failure";
    case ErrorKind::Io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace zkls
