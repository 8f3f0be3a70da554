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

#include "smartcert/ctlog.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <utility>

namespace smartcert::ctlog {

namespace {

std::optional<LogEntry> decode_entry(BytesView bytes) {
  Decoder dec(bytes);
  auto hash = dec.get_fixed<32, DigestTag>();
  auto metadata = dec.get_metadata();
  auto submitted = dec.get_u64();
  if (!hash || !metadata || !submitted || !dec.exhausted()) return std::nullopt;
  LogEntry entry;
  entry.certificate_hash = *hash;
  entry.metadata = std::move(*metadata);
  entry.submitted_at = *submitted;
  return entry;
}

}  // namespace

Bytes LogEntry::leaf_bytes() const {
  Encoder enc;
  enc.put_fixed(certificate_hash);
  enc.put_metadata(metadata);
  enc.put_u64(submitted_at);
  return enc.take();
}

LogEntry entry_for_certificate(const registry::CertificateRecord& record,
                               std::uint64_t submitted_at) {
  LogEntry entry;
  entry.certificate_hash = record.document_hash;
  entry.metadata.emplace_back("certificate_id", std::to_string(record.id));
  entry.metadata.emplace_back("issuer", record.issuer.hex());
  for (const auto& [key, value] : record.metadata) {
    if (key == "recipient") entry.metadata.emplace_back("recipient", value);
  }
  entry.submitted_at = submitted_at;
  return entry;
}

Digest SignedCertificateTimestamp::signing_digest() const {
  Encoder enc;
  enc.put_fixed(log_id);
  enc.put_u64(timestamp);
  enc.put_fixed(leaf_hash);
  return crypto::sha256(enc.bytes());
}

Digest SignedTreeHead::signing_digest() const {
  Encoder enc;
  enc.put_u64(tree_size);
  enc.put_fixed(root);
  enc.put_u64(timestamp);
  return crypto::sha256(enc.bytes());
}

bool verify_sct_signature(const PublicKey& log_key,
                          const SignedCertificateTimestamp& sct) {
  return crypto::verify(log_key, sct.signing_digest(), sct.log_signature);
}

bool verify_sth_signature(const PublicKey& log_key, const SignedTreeHead& sth) {
  return crypto::verify(log_key, sth.signing_digest(), sth.log_signature);
}

CtLog::CtLog(crypto::KeyPair key) : key_(std::move(key)) {
  log_id_ = crypto::sha256(key_.public_key.view());
}

Result<CtLog> CtLog::open(crypto::KeyPair key, const std::string& path) {
  CtLog log(std::move(key));
  std::error_code fs_error;
  if (std::filesystem::exists(path, fs_error) &&
      std::filesystem::file_size(path, fs_error) > 0) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return Error{ErrorCode::IoError, "cannot open log file: " + path};
    Bytes raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Decoder dec(raw);
    std::size_t index = 0;
    while (!dec.exhausted()) {
      auto length = dec.get_u32();
      if (!length) {
        return Error{ErrorCode::ParseError,
                     "log file truncated at record " + std::to_string(index)};
      }
      auto body = dec.get_raw(*length);
      auto stored = dec.get_fixed<32, DigestTag>();
      if (!body || !stored) {
        return Error{ErrorCode::ParseError,
                     "log file truncated at record " + std::to_string(index)};
      }
      if (crypto::sha256(*body) != *stored) {
        return Error{ErrorCode::StateDivergence,
                     "log file corrupted at record " + std::to_string(index)};
      }
      auto entry = decode_entry(*body);
      if (!entry) {
        return Error{ErrorCode::ParseError,
                     "undecodable log entry at record " + std::to_string(index)};
      }
      auto appended = log.submit_entry(*entry);
      if (!appended.ok()) return appended.error();
      ++index;
    }
  }
  log.path_ = path;
  return log;
}

SignedCertificateTimestamp CtLog::issue_sct(const LogEntry& entry) const {
  SignedCertificateTimestamp sct;
  sct.log_id = log_id_;
  sct.timestamp = entry.submitted_at;
  sct.leaf_hash = merkle::leaf_hash(entry.leaf_bytes());
  sct.log_signature = crypto::sign(key_, sct.signing_digest());
  return sct;
}

Result<SignedCertificateTimestamp> CtLog::submit_entry(const LogEntry& entry) {
  auto existing = by_certificate_.find(entry.certificate_hash);
  if (existing != by_certificate_.end()) {
    return issue_sct(entries_[existing->second]);
  }

  if (!path_.empty()) {
    Bytes body = entry.leaf_bytes();
    Encoder enc;
    enc.put_u32(static_cast<std::uint32_t>(body.size()));
    enc.put_raw(body);
    enc.put_fixed(crypto::sha256(body));
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out) return Error{ErrorCode::IoError, "cannot open log file: " + path_};
    const Bytes& record = enc.bytes();
    out.write(reinterpret_cast<const char*>(record.data()),
              static_cast<std::streamsize>(record.size()));
    out.flush();
    if (!out) return Error{ErrorCode::IoError, "cannot write log file: " + path_};
  }

  std::size_t index = entries_.size();
  entries_.push_back(entry);
  tree_.append(entry.leaf_bytes());
  by_certificate_[entry.certificate_hash] = index;
  by_leaf_[merkle::leaf_hash(entry.leaf_bytes())] = index;
  max_submitted_at_ = std::max(max_submitted_at_, entry.submitted_at);
  return issue_sct(entry);
}

SignedTreeHead CtLog::latest_sth() const { return sth_at(entries_.size()); }

SignedTreeHead CtLog::sth_at(std::uint64_t tree_size) const {
  SignedTreeHead sth;
  sth.tree_size = tree_size;
  sth.root = tree_.root_at(tree_size).value();
  // The head timestamp is the newest submission it covers, keeping repeated
  // reads byte-identical instead of sampling a wall clock.
  std::uint64_t timestamp = 0;
  for (std::uint64_t i = 0; i < tree_size; ++i) {
    timestamp = std::max(timestamp, entries_[i].submitted_at);
  }
  sth.timestamp = timestamp;
  sth.log_signature = crypto::sign(key_, sth.signing_digest());
  return sth;
}

Result<merkle::InclusionProof> CtLog::prove_entry(const Digest& leaf_hash,
                                                  std::uint64_t tree_size) const {
  if (tree_size > entries_.size()) {
    return Error{ErrorCode::IndexOutOfRange, "tree size exceeds the log"};
  }
  auto it = by_leaf_.find(leaf_hash);
  if (it == by_leaf_.end() || it->second >= tree_size) {
    return Error{ErrorCode::NotFound, "leaf is not among the first tree_size entries"};
  }
  return tree_.inclusion_proof(it->second, tree_size);
}

Result<merkle::ConsistencyProof> CtLog::consistency(std::uint64_t old_size,
                                                    std::uint64_t new_size) const {
  return tree_.consistency_proof(old_size, new_size);
}

Result<std::vector<LogEntry>> CtLog::entries(std::uint64_t from,
                                             std::uint64_t to) const {
  if (from > to || to > entries_.size()) {
    return Error{ErrorCode::IndexOutOfRange, "entry range out of bounds"};
  }
  return std::vector<LogEntry>(entries_.begin() + static_cast<std::ptrdiff_t>(from),
                               entries_.begin() + static_cast<std::ptrdiff_t>(to));
}

std::optional<SignedCertificateTimestamp> CtLog::sct_for(
    const Digest& certificate_hash) const {
  auto it = by_certificate_.find(certificate_hash);
  if (it == by_certificate_.end()) return std::nullopt;
  return issue_sct(entries_[it->second]);
}

Result<TransparencyStatus> verify_certificate_transparency(
    const registry::RegistryState& registry, const CtLog& log,
    std::uint64_t certificate_id) {
  if (certificate_id >= registry.certificates.size()) {
    return Error{ErrorCode::NotFound, "Certificate does not exist."};
  }
  const auto& record = registry.certificates[certificate_id];

  TransparencyStatus status;
  status.registry_valid = crypto::verify(record.issuer_public_key,
                                         record.document_hash,
                                         record.issuer_signature);
  status.revoked = record.status == registry::CertificateStatus::Revoked;

  auto sct = log.sct_for(record.document_hash);
  if (!sct || !verify_sct_signature(log.public_key(), *sct)) return status;
  status.sct_present = true;

  SignedTreeHead sth = log.latest_sth();
  if (!verify_sth_signature(log.public_key(), sth)) return status;
  auto proof = log.prove_entry(sct->leaf_hash, sth.tree_size);
  if (!proof.ok()) return status;
  status.inclusion_ok =
      merkle::verify_inclusion_hash(sth.root, sct->leaf_hash, proof.value());
  return status;
}

const char* alert_kind_name(AlertKind kind) {
  switch (kind) {
    case AlertKind::Misissuance:
      return "MisissuanceAlert";
    case AlertKind::Consistency:
      return "ConsistencyAlert";
    case AlertKind::SthSignature:
      return "SthSignatureAlert";
  }
  return "Unknown";
}

Monitor::Monitor(PublicKey log_key, std::set<AccountId> watched_issuers)
    : log_key_(log_key), watched_(std::move(watched_issuers)) {}

void Monitor::expect_issuance(const Digest& certificate_hash) {
  expected_.insert(certificate_hash);
}

std::vector<Alert> Monitor::poll(const CtLog& log) {
  std::vector<Alert> alerts;
  SignedTreeHead sth = log.latest_sth();

  if (!verify_sth_signature(log_key_, sth)) {
    Alert alert;
    alert.kind = AlertKind::SthSignature;
    alert.detail = "tree head signature does not verify under the log key";
    alert.tree_size = sth.tree_size;
    alerts.push_back(std::move(alert));
    return alerts;
  }

  if (has_sth_) {
    bool consistent = false;
    if (last_sth_.tree_size == 0) {
      // Everything extends the empty tree.
      consistent = true;
    } else if (sth.tree_size >= last_sth_.tree_size) {
      auto proof = log.consistency(last_sth_.tree_size, sth.tree_size);
      consistent = proof.ok() && merkle::verify_consistency(last_sth_.root,
                                                            sth.root,
                                                            proof.value());
    }
    if (!consistent) {
      Alert alert;
      alert.kind = AlertKind::Consistency;
      alert.detail = "tree head at size " + std::to_string(sth.tree_size) +
                     " is not an append-only extension of size " +
                     std::to_string(last_sth_.tree_size);
      alert.tree_size = sth.tree_size;
      alerts.push_back(std::move(alert));
      // A forked log invalidates the entry cursor; do not advance state.
      return alerts;
    }
  }

  auto fresh = log.entries(std::min(seen_entries_, sth.tree_size), sth.tree_size);
  if (fresh.ok()) {
    for (const auto& entry : fresh.value()) {
      AccountId issuer;
      bool have_issuer = false;
      for (const auto& [key, value] : entry.metadata) {
        if (key == "issuer") {
          auto parsed = AccountId::from_hex(value);
          if (parsed) {
            issuer = *parsed;
            have_issuer = true;
          }
        }
      }
      if (!have_issuer || watched_.find(issuer) == watched_.end()) continue;
      if (expected_.find(entry.certificate_hash) != expected_.end()) continue;
      Alert alert;
      alert.kind = AlertKind::Misissuance;
      alert.detail = "logged certificate for watched issuer " + issuer.hex() +
                     " has no expected-issuance record";
      alert.tree_size = sth.tree_size;
      alert.certificate_hash = entry.certificate_hash;
      alert.issuer = issuer;
      alerts.push_back(std::move(alert));
    }
  }

  seen_entries_ = sth.tree_size;
  last_sth_ = sth;
  has_sth_ = true;
  return alerts;
}

bool audit_sct(const Auditor& auditor, const SignedCertificateTimestamp& sct,
               BytesView leaf_bytes, const CtLog& log) {
  if (sct.log_id != crypto::sha256(auditor.log_key.view())) return false;
  if (!verify_sct_signature(auditor.log_key, sct)) return false;
  if (merkle::leaf_hash(leaf_bytes) != sct.leaf_hash) return false;

  SignedTreeHead sth = log.latest_sth();
  if (!verify_sth_signature(auditor.log_key, sth)) return false;
  auto proof = log.prove_entry(sct.leaf_hash, sth.tree_size);
  if (!proof.ok()) return false;
  return merkle::verify_inclusion_hash(sth.root, sct.leaf_hash, proof.value());
}

}  // namespace smartcert::ctlog
