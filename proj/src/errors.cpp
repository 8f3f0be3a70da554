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

#include "smartcert/errors.hpp"

namespace smartcert {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSeed: return "INVALID_SEED";
    case ErrorCode::InvalidKey: return "INVALID_KEY";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::NotOwner: return "NOT_OWNER";
    case ErrorCode::NotAuthority: return "NOT_AUTHORITY";
    case ErrorCode::AlreadyRevoked: return "ALREADY_REVOKED";
    case ErrorCode::RevokedCertificate: return "REVOKED_CERTIFICATE";
    case ErrorCode::MaturityNotFuture: return "MATURITY_NOT_FUTURE";
    case ErrorCode::ZeroDeposit: return "ZERO_DEPOSIT";
    case ErrorCode::InvalidIssuerSignature: return "INVALID_ISSUER_SIGNATURE";
    case ErrorCode::ModelError: return "MODEL_ERROR";
    case ErrorCode::NotAnomaly: return "NOT_ANOMALY";
    case ErrorCode::IndexOutOfRange: return "INDEX_OUT_OF_RANGE";
    case ErrorCode::InvalidSignature: return "INVALID_SIGNATURE";
    case ErrorCode::StaleNonce: return "STALE_NONCE";
    case ErrorCode::UnknownKind: return "UNKNOWN_KIND";
    case ErrorCode::TimestampRegression: return "TIMESTAMP_REGRESSION";
    case ErrorCode::ForkDetected: return "FORK_DETECTED";
    case ErrorCode::StateDivergence: return "STATE_DIVERGENCE";
    case ErrorCode::InsufficientFunds: return "INSUFFICIENT_FUNDS";
    case ErrorCode::WalletFrozen: return "WALLET_FROZEN";
    case ErrorCode::ZeroAmount: return "ZERO_AMOUNT";
    case ErrorCode::RepoNotFound: return "REPO_NOT_FOUND";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::EnforcementFailed: return "ENFORCEMENT_FAILED";
    case ErrorCode::IoError: return "IO_ERROR";
    case ErrorCode::BadRequest: return "BAD_REQUEST";
  }
  return "UNKNOWN";
}

}  // namespace smartcert
