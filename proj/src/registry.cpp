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

#include "smartcert/registry.hpp"

#include <utility>

namespace smartcert::registry {

namespace {

Error not_found() {
  return {ErrorCode::NotFound, "Certificate does not exist."};
}

}  // namespace

const char* certificate_status_name(CertificateStatus status) {
  switch (status) {
    case CertificateStatus::Active:
      return "Active";
    case CertificateStatus::Revoked:
      return "Revoked";
    case CertificateStatus::Frozen:
      return "Frozen";
  }
  return "Unknown";
}

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::CertificateIssued:
      return "CertificateIssued";
    case EventKind::CertificateRevoked:
      return "CertificateRevoked";
    case EventKind::AnomalyDetected:
      return "AnomalyDetected";
    case EventKind::CertificateFrozen:
      return "CertificateFrozen";
  }
  return "Unknown";
}

void CertificateRecord::encode(Encoder& enc) const {
  enc.put_u64(id);
  enc.put_fixed(owner);
  enc.put_fixed(issuer);
  enc.put_fixed(issuer_public_key);
  enc.put_u64(deposit_amount);
  enc.put_u64(maturity_date);
  enc.put_metadata(metadata);
  enc.put_fixed(document_hash);
  enc.put_fixed(issuer_signature);
  enc.put_u8(static_cast<std::uint8_t>(status));
  enc.put_u8(is_anomaly ? 1 : 0);
}

KeywordModelClient::KeywordModelClient(std::string keyword)
    : keyword_(std::move(keyword)) {}

Result<ModelResponse> KeywordModelClient::detect_anomaly(
    const std::string& endpoint, const std::string& request_body) {
  (void)endpoint;
  bool hit = !keyword_.empty() && request_body.find(keyword_) != std::string::npos;
  return ModelResponse{200, hit ? "Anomaly" : "Normal"};
}

Result<std::uint64_t> issue_certificate(RegistryState& state,
                                        const PublicKey& caller_key,
                                        std::uint64_t deposit_amount,
                                        std::uint64_t maturity_date,
                                        const Metadata& metadata,
                                        const Digest& document_hash,
                                        const Signature& issuer_signature,
                                        std::uint64_t now) {
  if (maturity_date <= now) {
    return Error{ErrorCode::MaturityNotFuture, "Maturity date must be in the future."};
  }
  if (deposit_amount == 0) {
    return Error{ErrorCode::ZeroDeposit, "Deposit amount must be greater than 0."};
  }
  if (!crypto::verify(caller_key, document_hash, issuer_signature)) {
    return Error{ErrorCode::InvalidIssuerSignature, "Invalid issuer signature."};
  }

  AccountId caller = crypto::account_from_public_key(caller_key);
  CertificateRecord record;
  record.id = state.next_certificate_id;
  record.owner = caller;
  record.issuer = caller;
  record.issuer_public_key = caller_key;
  record.deposit_amount = deposit_amount;
  record.maturity_date = maturity_date;
  record.metadata = metadata;
  record.document_hash = document_hash;
  record.issuer_signature = issuer_signature;
  state.certificates.push_back(std::move(record));
  state.next_certificate_id++;

  RegistryEvent event;
  event.kind = EventKind::CertificateIssued;
  event.certificate_id = state.next_certificate_id - 1;
  event.owner = caller;
  event.deposit_amount = deposit_amount;
  event.maturity_date = maturity_date;
  state.event_log.push_back(std::move(event));
  return state.next_certificate_id - 1;
}

Result<bool> verify_certificate(const RegistryState& state,
                                std::uint64_t certificate_id, std::uint64_t now) {
  if (certificate_id >= state.certificates.size()) return not_found();
  const CertificateRecord& record = state.certificates[certificate_id];
  bool revoked = record.status == CertificateStatus::Revoked;
  return !revoked && record.maturity_date <= now;
}

Result<bool> verify_document(const RegistryState& state,
                             std::uint64_t certificate_id, BytesView document) {
  if (certificate_id >= state.certificates.size()) return not_found();
  const CertificateRecord& record = state.certificates[certificate_id];
  if (crypto::hash_document(document) != record.document_hash) return false;
  return crypto::verify(record.issuer_public_key, record.document_hash,
                        record.issuer_signature);
}

Status revoke_certificate(RegistryState& state, const AccountId& caller,
                          std::uint64_t certificate_id) {
  if (certificate_id >= state.certificates.size()) return not_found();
  CertificateRecord& record = state.certificates[certificate_id];
  if (record.owner != caller) {
    return Error{ErrorCode::NotOwner, "Only the owner can revoke the certificate."};
  }
  if (record.status == CertificateStatus::Revoked) {
    return Error{ErrorCode::AlreadyRevoked, "Certificate is already revoked."};
  }
  record.status = CertificateStatus::Revoked;

  RegistryEvent event;
  event.kind = EventKind::CertificateRevoked;
  event.certificate_id = certificate_id;
  state.event_log.push_back(std::move(event));
  return ok_status();
}

Status detect_anomaly(RegistryState& state, const AccountId& caller,
                      std::uint64_t certificate_id, const std::string& description,
                      ModelClient& model) {
  if (certificate_id >= state.certificates.size()) return not_found();
  CertificateRecord& record = state.certificates[certificate_id];
  if (record.owner != caller) {
    return Error{ErrorCode::NotOwner, "Only the owner can detect anomalies."};
  }
  if (record.status == CertificateStatus::Revoked) {
    return Error{ErrorCode::RevokedCertificate,
                 "Certificate is revoked and cannot have anomalies."};
  }

  std::string request_body = description + "," + std::to_string(certificate_id);
  auto response = model.detect_anomaly(state.model_endpoint, request_body);
  if (!response.ok() || response.value().status != 200) {
    return Error{ErrorCode::ModelError, "Machine learning model error"};
  }
  if (response.value().body != "Anomaly") {
    return Error{ErrorCode::NotAnomaly, "Not detected as an anomaly"};
  }
  record.is_anomaly = true;

  RegistryEvent event;
  event.kind = EventKind::AnomalyDetected;
  event.certificate_id = certificate_id;
  event.description = description;
  state.event_log.push_back(std::move(event));
  return ok_status();
}

Status freeze_certificate(RegistryState& state, const AccountId& caller,
                          std::uint64_t certificate_id, const std::string& reason) {
  if (certificate_id >= state.certificates.size()) return not_found();
  if (caller != state.authority) {
    return Error{ErrorCode::NotAuthority,
                 "Only the sentinel authority can freeze certificates."};
  }
  CertificateRecord& record = state.certificates[certificate_id];
  if (record.status == CertificateStatus::Revoked) {
    return Error{ErrorCode::RevokedCertificate,
                 "Certificate is revoked and cannot be frozen."};
  }
  record.status = record.status == CertificateStatus::Frozen
                      ? CertificateStatus::Active
                      : CertificateStatus::Frozen;

  RegistryEvent event;
  event.kind = EventKind::CertificateFrozen;
  event.certificate_id = certificate_id;
  event.description = reason;
  state.event_log.push_back(std::move(event));
  return ok_status();
}

bool owner_has_frozen_certificate(const RegistryState& state, const AccountId& owner) {
  for (const auto& record : state.certificates) {
    if (record.owner == owner && record.status == CertificateStatus::Frozen) {
      return true;
    }
  }
  return false;
}

}  // namespace smartcert::registry
