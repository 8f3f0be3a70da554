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

#ifndef SMARTCERT_REGISTRY_HPP_
#define SMARTCERT_REGISTRY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "smartcert/crypto.hpp"
#include "smartcert/encoding.hpp"
#include "smartcert/errors.hpp"

namespace smartcert::registry {

enum class CertificateStatus : std::uint8_t {
  Active = 0,
  Revoked = 1,
  Frozen = 2,
};

const char* certificate_status_name(CertificateStatus status);

// One certificate of deposit. Records keep the issuer's public key so
// document signatures stay verifiable from state alone.
struct CertificateRecord {
  std::uint64_t id = 0;
  AccountId owner;
  AccountId issuer;
  PublicKey issuer_public_key;
  std::uint64_t deposit_amount = 0;
  std::uint64_t maturity_date = 0;
  Metadata metadata;
  Digest document_hash;
  Signature issuer_signature;
  CertificateStatus status = CertificateStatus::Active;
  bool is_anomaly = false;

  void encode(Encoder& enc) const;
};

enum class EventKind : std::uint8_t {
  CertificateIssued = 0,
  CertificateRevoked = 1,
  AnomalyDetected = 2,
  CertificateFrozen = 3,
};

const char* event_kind_name(EventKind kind);

struct RegistryEvent {
  EventKind kind = EventKind::CertificateIssued;
  std::uint64_t certificate_id = 0;
  // CertificateIssued only.
  AccountId owner;
  std::uint64_t deposit_amount = 0;
  std::uint64_t maturity_date = 0;
  // AnomalyDetected description or CertificateFrozen reason.
  std::string description;
};

struct RegistryState {
  std::vector<CertificateRecord> certificates;
  std::uint64_t next_certificate_id = 0;
  std::string model_endpoint;
  AccountId authority;
  std::vector<RegistryEvent> event_log;
};

struct ModelResponse {
  int status = 0;
  std::string body;
};

// Transport to the external anomaly model. detect_anomaly() posts the
// request body to <endpoint>/detect_anomaly and reports status and body;
// transport failures surface as an error Result.
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual Result<ModelResponse> detect_anomaly(const std::string& endpoint,
                                               const std::string& request_body) = 0;
};

// In-process stand-in for the model server: answers 200 "Anomaly" when the
// request body contains the configured keyword, 200 "Normal" otherwise.
class KeywordModelClient : public ModelClient {
 public:
  explicit KeywordModelClient(std::string keyword);
  Result<ModelResponse> detect_anomaly(const std::string& endpoint,
                                       const std::string& request_body) override;

 private:
  std::string keyword_;
};

Result<std::uint64_t> issue_certificate(RegistryState& state,
                                        const PublicKey& caller_key,
                                        std::uint64_t deposit_amount,
                                        std::uint64_t maturity_date,
                                        const Metadata& metadata,
                                        const Digest& document_hash,
                                        const Signature& issuer_signature,
                                        std::uint64_t now);

Result<bool> verify_certificate(const RegistryState& state,
                                std::uint64_t certificate_id, std::uint64_t now);

Result<bool> verify_document(const RegistryState& state,
                             std::uint64_t certificate_id, BytesView document);

Status revoke_certificate(RegistryState& state, const AccountId& caller,
                          std::uint64_t certificate_id);

Status detect_anomaly(RegistryState& state, const AccountId& caller,
                      std::uint64_t certificate_id, const std::string& description,
                      ModelClient& model);

// Toggles Active <-> Frozen. Only the configured authority may call.
Status freeze_certificate(RegistryState& state, const AccountId& caller,
                          std::uint64_t certificate_id, const std::string& reason);

// Gate consulted by the ledger before applying a WalletTransfer.
bool owner_has_frozen_certificate(const RegistryState& state, const AccountId& owner);

}  // namespace smartcert::registry

#endif  // SMARTCERT_REGISTRY_HPP_
