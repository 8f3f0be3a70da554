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

#include "smartcert/wire.hpp"

namespace smartcert::wire {

namespace {

Error bad_field(const std::string& field, const std::string& why) {
  return Error{ErrorCode::BadRequest, "field \"" + field + "\" " + why};
}

template <typename T>
Result<T> fixed_field(const Json& json, const char* field) {
  if (!json.contains(field) || !json[field].is_string()) {
    return bad_field(field, "must be a hex string");
  }
  auto value = T::from_hex(json[field].template get<std::string>());
  if (!value) {
    return bad_field(field, "must be " + std::to_string(T::size()) + "-byte hex");
  }
  return *value;
}

Result<std::uint64_t> u64_field(const Json& json, const char* field) {
  if (!json.contains(field) || !json[field].is_number_unsigned()) {
    return bad_field(field, "must be an unsigned integer");
  }
  return json[field].template get<std::uint64_t>();
}

Result<std::string> string_field(const Json& json, const char* field) {
  if (!json.contains(field) || !json[field].is_string()) {
    return bad_field(field, "must be a string");
  }
  return json[field].template get<std::string>();
}

std::optional<ledger::TxKind> tx_kind_from_name(const std::string& name) {
  for (std::uint8_t raw = 0; ledger::valid_tx_kind(raw); ++raw) {
    auto kind = static_cast<ledger::TxKind>(raw);
    if (name == ledger::tx_kind_name(kind)) return kind;
  }
  return std::nullopt;
}

Json digest_array(const std::vector<Digest>& digests) {
  Json out = Json::array();
  for (const auto& digest : digests) out.push_back(digest.hex());
  return out;
}

}  // namespace

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotFound:
      return 404;
    case ErrorCode::NotOwner:
    case ErrorCode::NotAuthority:
      return 403;
    case ErrorCode::AlreadyRevoked:
    case ErrorCode::RevokedCertificate:
    case ErrorCode::StaleNonce:
    case ErrorCode::WalletFrozen:
    case ErrorCode::InsufficientFunds:
    case ErrorCode::TimestampRegression:
    case ErrorCode::ForkDetected:
    case ErrorCode::EnforcementFailed:
      return 409;
    case ErrorCode::NotAnomaly:
      return 422;
    case ErrorCode::ModelError:
      return 502;
    case ErrorCode::StateDivergence:
    case ErrorCode::IoError:
    case ErrorCode::RepoNotFound:
      return 500;
    default:
      return 400;
  }
}

ApiError api_error(const Error& error) {
  return ApiError{std::string(error_code_name(error.code)), error.message,
                  http_status_for(error.code)};
}

Json metadata_to_json(const Metadata& metadata) {
  Json out = Json::object();
  for (const auto& [key, value] : metadata) out[key] = value;
  return out;
}

Result<Metadata> metadata_from_json(const Json& json) {
  if (!json.is_object()) {
    return Error{ErrorCode::BadRequest, "metadata must be an object"};
  }
  Metadata metadata;
  for (const auto& [key, value] : json.items()) {
    if (!value.is_string()) {
      return Error{ErrorCode::BadRequest,
                   "metadata value for \"" + key + "\" must be a string"};
    }
    metadata.emplace_back(key, value.get<std::string>());
  }
  return metadata;
}

Json to_json(const registry::CertificateRecord& record) {
  Json out;
  out["id"] = record.id;
  out["owner"] = record.owner.hex();
  out["issuer"] = record.issuer.hex();
  out["issuer_public_key"] = record.issuer_public_key.hex();
  out["deposit_amount"] = record.deposit_amount;
  out["maturity_date"] = record.maturity_date;
  out["metadata"] = metadata_to_json(record.metadata);
  out["document_hash"] = record.document_hash.hex();
  out["issuer_signature"] = record.issuer_signature.hex();
  out["status"] = registry::certificate_status_name(record.status);
  out["is_anomaly"] = record.is_anomaly;
  return out;
}

Json to_json(const registry::RegistryEvent& event) {
  Json out;
  out["kind"] = registry::event_kind_name(event.kind);
  out["certificate_id"] = event.certificate_id;
  if (event.kind == registry::EventKind::CertificateIssued) {
    out["owner"] = event.owner.hex();
    out["deposit_amount"] = event.deposit_amount;
    out["maturity_date"] = event.maturity_date;
  }
  if (!event.description.empty()) out["description"] = event.description;
  return out;
}

Json to_json(const ledger::TxReceipt& receipt) {
  Json out;
  out["success"] = receipt.success;
  if (!receipt.success) out["code"] = std::string(error_code_name(receipt.code));
  if (!receipt.message.empty()) out["message"] = receipt.message;
  return out;
}

Json to_json(const ledger::LedgerTransaction& tx) {
  Json out;
  out["nonce"] = tx.nonce;
  out["sender_public_key"] = tx.sender_public_key.hex();
  out["kind"] = ledger::tx_kind_name(tx.kind);
  out["payload"] = to_hex(tx.payload);
  out["signature"] = tx.signature.hex();
  return out;
}

Json to_json(const ledger::Block& block) {
  Json out;
  out["height"] = block.height;
  out["parent_digest"] = block.parent_digest.hex();
  out["timestamp"] = block.timestamp;
  out["tx_root"] = block.tx_root.hex();
  out["state_digest"] = block.state_digest.hex();
  Json txs = Json::array();
  for (const auto& tx : block.transactions) txs.push_back(to_json(tx));
  out["transactions"] = std::move(txs);
  Json receipts = Json::array();
  for (const auto& receipt : block.receipts) receipts.push_back(to_json(receipt));
  out["receipts"] = std::move(receipts);
  out["digest"] = block.digest().hex();
  return out;
}

Json to_json(const ledger::WalletEvent& event) {
  Json out;
  out["timestamp"] = event.timestamp;
  out["sender"] = event.sender.hex();
  out["recipient"] = event.recipient.hex();
  out["amount"] = event.amount;
  out["block_height"] = event.block_height;
  out["tx_index"] = event.tx_index;
  return out;
}

Json to_json(const ctlog::LogEntry& entry) {
  Json out;
  out["certificate_hash"] = entry.certificate_hash.hex();
  out["metadata"] = metadata_to_json(entry.metadata);
  out["submitted_at"] = entry.submitted_at;
  return out;
}

Json to_json(const ctlog::SignedCertificateTimestamp& sct) {
  Json out;
  out["log_id"] = sct.log_id.hex();
  out["timestamp"] = sct.timestamp;
  out["leaf_hash"] = sct.leaf_hash.hex();
  out["log_signature"] = sct.log_signature.hex();
  return out;
}

Json to_json(const ctlog::SignedTreeHead& sth) {
  Json out;
  out["tree_size"] = sth.tree_size;
  out["root"] = sth.root.hex();
  out["timestamp"] = sth.timestamp;
  out["log_signature"] = sth.log_signature.hex();
  return out;
}

Json to_json(const ctlog::Alert& alert) {
  Json out;
  out["kind"] = ctlog::alert_kind_name(alert.kind);
  out["detail"] = alert.detail;
  out["tree_size"] = alert.tree_size;
  if (!alert.certificate_hash.is_zero()) {
    out["certificate_hash"] = alert.certificate_hash.hex();
  }
  if (!alert.issuer.is_zero()) out["issuer"] = alert.issuer.hex();
  return out;
}

Json to_json(const ctlog::TransparencyStatus& status) {
  Json out;
  out["registry_valid"] = status.registry_valid;
  out["revoked"] = status.revoked;
  out["sct_present"] = status.sct_present;
  out["inclusion_ok"] = status.inclusion_ok;
  out["transparent"] = status.transparent();
  return out;
}

Json to_json(const merkle::InclusionProof& proof) {
  Json out;
  out["leaf_index"] = proof.leaf_index;
  out["tree_size"] = proof.tree_size;
  out["audit_path"] = digest_array(proof.audit_path);
  return out;
}

Json to_json(const merkle::ConsistencyProof& proof) {
  Json out;
  out["old_size"] = proof.old_size;
  out["new_size"] = proof.new_size;
  out["path"] = digest_array(proof.path);
  return out;
}

Json to_json(const sentinel::VulnerabilitySignature& signature) {
  Json out;
  out["id"] = signature.id;
  out["category"] = sentinel::threat_category_name(signature.category);
  out["layer"] = sentinel::layer_name(signature.layer);
  out["pattern"] = signature.pattern;
  out["severity"] = signature.severity;
  return out;
}

Json to_json(const sentinel::MonitoredEvent& event) {
  Json out;
  out["source"] = sentinel::layer_name(event.source);
  out["timestamp"] = event.timestamp;
  out["subject"] = event.subject;
  out["description"] = event.description;
  out["attributes"] = metadata_to_json(event.attributes);
  return out;
}

Json to_json(const sentinel::SignatureMatch& match) {
  Json out;
  out["event"] = to_json(match.event);
  out["signature"] = to_json(match.signature);
  return out;
}

Json to_json(const sentinel::AnomalyFinding& finding) {
  Json out;
  out["wallet"] = finding.wallet.hex();
  out["fired_at"] = finding.fired_at;
  Json transfers = Json::array();
  for (const auto& transfer : finding.transfers) transfers.push_back(to_json(transfer));
  out["transfers"] = std::move(transfers);
  return out;
}

Json to_json(const sentinel::RiskReport& report) {
  Json out;
  out["id"] = report.id;
  out["window_start"] = report.window_start;
  out["window_end"] = report.window_end;
  out["score"] = report.score;
  if (report.predicted_category) {
    out["predicted_category"] = sentinel::threat_category_name(*report.predicted_category);
  } else {
    out["predicted_category"] = nullptr;
  }
  out["recommended_action"] = sentinel::action_name(report.recommended_action);
  Json matched = Json::array();
  for (const auto& match : report.matched) matched.push_back(to_json(match));
  out["matched"] = std::move(matched);
  Json findings = Json::array();
  for (const auto& finding : report.findings) findings.push_back(to_json(finding));
  out["findings"] = std::move(findings);
  return out;
}

Json to_json(const sentinel::AlertRecord& alert) {
  Json out;
  out["timestamp"] = alert.timestamp;
  out["report_id"] = alert.report_id;
  out["action"] = sentinel::action_name(alert.action);
  out["score"] = alert.score;
  if (alert.predicted_category) {
    out["predicted_category"] = sentinel::threat_category_name(*alert.predicted_category);
  } else {
    out["predicted_category"] = nullptr;
  }
  out["detail"] = alert.detail;
  return out;
}

Json to_json(const sentinel::ExecutedAction& action) {
  Json out;
  out["action"] = sentinel::action_name(action.action);
  out["certificate_id"] = action.certificate_id;
  if (!action.wallet.is_zero()) out["wallet"] = action.wallet.hex();
  out["tx_digest"] = action.tx_digest.hex();
  out["success"] = action.success;
  out["note"] = action.note;
  return out;
}

Json to_json(const sentinel::ComplianceFlag& flag) {
  Json out;
  out["block_height"] = flag.block_height;
  out["tx_index"] = flag.tx_index;
  out["block_timestamp"] = flag.block_timestamp;
  out["metadata_key"] = flag.metadata_key;
  out["rule"] = flag.rule;
  return out;
}

Result<ledger::LedgerTransaction> transaction_from_json(const Json& json) {
  if (!json.is_object()) {
    return Error{ErrorCode::BadRequest, "transaction must be a JSON object"};
  }
  ledger::LedgerTransaction tx;
  auto nonce = u64_field(json, "nonce");
  if (!nonce.ok()) return nonce.error();
  tx.nonce = nonce.value();
  auto sender = fixed_field<PublicKey>(json, "sender_public_key");
  if (!sender.ok()) return sender.error();
  tx.sender_public_key = sender.value();
  auto kind_name = string_field(json, "kind");
  if (!kind_name.ok()) return kind_name.error();
  auto kind = tx_kind_from_name(kind_name.value());
  if (!kind) {
    return Error{ErrorCode::UnknownKind,
                 "unknown transaction kind \"" + kind_name.value() + "\""};
  }
  tx.kind = *kind;
  auto payload_hex = string_field(json, "payload");
  if (!payload_hex.ok()) return payload_hex.error();
  auto payload = from_hex(payload_hex.value());
  if (!payload) return bad_field("payload", "must be hex");
  tx.payload = *payload;
  auto signature = fixed_field<Signature>(json, "signature");
  if (!signature.ok()) return signature.error();
  tx.signature = signature.value();
  return tx;
}

Result<ctlog::LogEntry> log_entry_from_json(const Json& json) {
  if (!json.is_object()) {
    return Error{ErrorCode::BadRequest, "log entry must be a JSON object"};
  }
  ctlog::LogEntry entry;
  auto hash = fixed_field<Digest>(json, "certificate_hash");
  if (!hash.ok()) return hash.error();
  entry.certificate_hash = hash.value();
  if (!json.contains("metadata")) {
    return Error{ErrorCode::BadRequest, "field \"metadata\" must be an object"};
  }
  auto metadata = metadata_from_json(json["metadata"]);
  if (!metadata.ok()) return metadata.error();
  entry.metadata = metadata.value();
  auto submitted = u64_field(json, "submitted_at");
  if (!submitted.ok()) return submitted.error();
  entry.submitted_at = submitted.value();
  return entry;
}

Result<ctlog::SignedCertificateTimestamp> sct_from_json(const Json& json) {
  if (!json.is_object()) {
    return Error{ErrorCode::BadRequest, "sct must be a JSON object"};
  }
  ctlog::SignedCertificateTimestamp sct;
  auto log_id = fixed_field<Digest>(json, "log_id");
  if (!log_id.ok()) return log_id.error();
  sct.log_id = log_id.value();
  auto timestamp = u64_field(json, "timestamp");
  if (!timestamp.ok()) return timestamp.error();
  sct.timestamp = timestamp.value();
  auto leaf = fixed_field<Digest>(json, "leaf_hash");
  if (!leaf.ok()) return leaf.error();
  sct.leaf_hash = leaf.value();
  auto signature = fixed_field<Signature>(json, "log_signature");
  if (!signature.ok()) return signature.error();
  sct.log_signature = signature.value();
  return sct;
}

Result<ctlog::SignedTreeHead> sth_from_json(const Json& json) {
  if (!json.is_object()) {
    return Error{ErrorCode::BadRequest, "sth must be a JSON object"};
  }
  ctlog::SignedTreeHead sth;
  auto size = u64_field(json, "tree_size");
  if (!size.ok()) return size.error();
  sth.tree_size = size.value();
  auto root = fixed_field<Digest>(json, "root");
  if (!root.ok()) return root.error();
  sth.root = root.value();
  auto timestamp = u64_field(json, "timestamp");
  if (!timestamp.ok()) return timestamp.error();
  sth.timestamp = timestamp.value();
  auto signature = fixed_field<Signature>(json, "log_signature");
  if (!signature.ok()) return signature.error();
  sth.log_signature = signature.value();
  return sth;
}

Result<merkle::InclusionProof> inclusion_proof_from_json(const Json& json) {
  if (!json.is_object()) {
    return Error{ErrorCode::BadRequest, "inclusion proof must be a JSON object"};
  }
  merkle::InclusionProof proof;
  auto index = u64_field(json, "leaf_index");
  if (!index.ok()) return index.error();
  proof.leaf_index = index.value();
  auto size = u64_field(json, "tree_size");
  if (!size.ok()) return size.error();
  proof.tree_size = size.value();
  if (!json.contains("audit_path") || !json["audit_path"].is_array()) {
    return bad_field("audit_path", "must be an array");
  }
  for (const auto& item : json["audit_path"]) {
    if (!item.is_string()) return bad_field("audit_path", "must hold hex strings");
    auto digest = Digest::from_hex(item.get<std::string>());
    if (!digest) return bad_field("audit_path", "must hold 32-byte hex strings");
    proof.audit_path.push_back(*digest);
  }
  return proof;
}

Result<sentinel::MonitoredEvent> event_from_json(const Json& json,
                                                 std::uint64_t default_timestamp) {
  if (!json.is_object()) {
    return Error{ErrorCode::BadRequest, "event must be a JSON object"};
  }
  sentinel::MonitoredEvent event;
  auto source = string_field(json, "source");
  if (!source.ok()) return source.error();
  auto layer = sentinel::layer_from_name(source.value());
  if (!layer) {
    return Error{ErrorCode::BadRequest,
                 "unknown source \"" + source.value() + "\""};
  }
  event.source = *layer;
  if (json.contains("timestamp")) {
    auto timestamp = u64_field(json, "timestamp");
    if (!timestamp.ok()) return timestamp.error();
    event.timestamp = timestamp.value();
  } else {
    event.timestamp = default_timestamp;
  }
  if (json.contains("subject")) {
    auto subject = string_field(json, "subject");
    if (!subject.ok()) return subject.error();
    event.subject = subject.value();
  }
  auto description = string_field(json, "description");
  if (!description.ok()) return description.error();
  event.description = description.value();
  if (json.contains("attributes")) {
    auto attributes = metadata_from_json(json["attributes"]);
    if (!attributes.ok()) return attributes.error();
    event.attributes = attributes.value();
  }
  return event;
}

}  // namespace smartcert::wire
