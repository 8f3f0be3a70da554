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

#ifndef SMARTCERT_WIRE_HPP_
#define SMARTCERT_WIRE_HPP_

#include <string>

#include "json.hpp"
#include "smartcert/ctlog.hpp"
#include "smartcert/errors.hpp"
#include "smartcert/ledger.hpp"
#include "smartcert/registry.hpp"
#include "smartcert/sentinel.hpp"

// JSON wire format: UTF-8 with hex-encoded binary fields. The canonical
// binary encoding is used only for hashing and signing; everything the
// service says on the wire goes through these converters. ordered_json keeps
// object members in insertion/document order so metadata round-trips.
namespace smartcert::wire {

using Json = nlohmann::ordered_json;

struct ApiError {
  std::string code;
  std::string message;
  int http_status = 400;
};

ApiError api_error(const Error& error);
int http_status_for(ErrorCode code);

Json metadata_to_json(const Metadata& metadata);
Result<Metadata> metadata_from_json(const Json& json);

Json to_json(const registry::CertificateRecord& record);
Json to_json(const registry::RegistryEvent& event);
Json to_json(const ledger::TxReceipt& receipt);
Json to_json(const ledger::LedgerTransaction& tx);
Json to_json(const ledger::Block& block);
Json to_json(const ledger::WalletEvent& event);
Json to_json(const ctlog::LogEntry& entry);
Json to_json(const ctlog::SignedCertificateTimestamp& sct);
Json to_json(const ctlog::SignedTreeHead& sth);
Json to_json(const ctlog::Alert& alert);
Json to_json(const ctlog::TransparencyStatus& status);
Json to_json(const merkle::InclusionProof& proof);
Json to_json(const merkle::ConsistencyProof& proof);
Json to_json(const sentinel::VulnerabilitySignature& signature);
Json to_json(const sentinel::MonitoredEvent& event);
Json to_json(const sentinel::SignatureMatch& match);
Json to_json(const sentinel::AnomalyFinding& finding);
Json to_json(const sentinel::RiskReport& report);
Json to_json(const sentinel::AlertRecord& alert);
Json to_json(const sentinel::ExecutedAction& action);
Json to_json(const sentinel::ComplianceFlag& flag);

Result<ledger::LedgerTransaction> transaction_from_json(const Json& json);
Result<ctlog::LogEntry> log_entry_from_json(const Json& json);
Result<ctlog::SignedCertificateTimestamp> sct_from_json(const Json& json);
Result<ctlog::SignedTreeHead> sth_from_json(const Json& json);
Result<merkle::InclusionProof> inclusion_proof_from_json(const Json& json);
Result<sentinel::MonitoredEvent> event_from_json(const Json& json,
                                                 std::uint64_t default_timestamp);

}  // namespace smartcert::wire

#endif  // SMARTCERT_WIRE_HPP_
