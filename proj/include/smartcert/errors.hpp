// Copyright 2026 The Smartcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SMARTCERT_ERRORS_HPP_
#define SMARTCERT_ERRORS_HPP_

#include <cassert>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

namespace smartcert {

enum class ErrorCode {
  // crypto
  InvalidSeed,
  InvalidKey,
  // registry
  NotFound,
  NotOwner,
  NotAuthority,
  AlreadyRevoked,
  RevokedCertificate,
  MaturityNotFuture,
  ZeroDeposit,
  InvalidIssuerSignature,
  ModelError,
  NotAnomaly,
  // merkle / ctlog
  IndexOutOfRange,
  // ledger
  InvalidSignature,
  StaleNonce,
  UnknownKind,
  TimestampRegression,
  ForkDetected,
  StateDivergence,
  InsufficientFunds,
  WalletFrozen,
  ZeroAmount,
  // sentinel
  RepoNotFound,
  ParseError,
  EnforcementFailed,
  // plumbing
  IoError,
  BadRequest,
};

// Machine-readable code string, e.g. NOT_OWNER. Stable across the wire format
// and transaction receipts.
std::string_view error_code_name(ErrorCode code);

struct Error {
  ErrorCode code;
  std::string message;
};

inline Error make_error(ErrorCode code, std::string message) {
  return Error{code, std::move(message)};
}

// Minimal expected-like result. Domain operations return Result<T> so error
// strings from the contract semantics travel unmodified to receipts, the CLI
// and the HTTP error body.
template <typename T = std::monostate>
class Result {
 public:
  Result(T value) : data_(std::move(value)) {}  // NOLINT: implicit by design
  Result(Error error) : data_(std::move(error)) {}
  Result(ErrorCode code, std::string message)
      : data_(Error{code, std::move(message)}) {}

  bool ok() const { return std::holds_alternative<T>(data_); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    assert(ok());
    return std::get<T>(data_);
  }
  T& value() {
    assert(ok());
    return std::get<T>(data_);
  }

  const Error& error() const {
    assert(!ok());
    return std::get<Error>(data_);
  }

  ErrorCode code() const { return error().code; }
  const std::string& message() const { return error().message; }

 private:
  std::variant<T, Error> data_;
};

using Status = Result<std::monostate>;

inline Status ok_status() { return Status(std::monostate{}); }

}  // namespace smartcert

#endif  // SMARTCERT_ERRORS_HPP_
