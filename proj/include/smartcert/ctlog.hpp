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

#ifndef SMARTCERT_CTLOG_HPP_
#define SMARTCERT_CTLOG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smartcert/crypto.hpp"
#include "smartcert/encoding.hpp"
#include "smartcert/errors.hpp"
#include "smartcert/merkle.hpp"
#include "smartcert/registry.hpp"

namespace smartcert::ctlog {

struct LogEntry {
  Digest certificate_hash;
  Metadata metadata;
  std::uint64_t submitted_at = 0;

  Bytes leaf_bytes() const;
  bool operator==(const LogEntry&) const = default;
};

// Builds the log entry for a registry record: the certificate id, issuer
// account, and any recipient metadata travel with the document hash.
LogEntry entry_for_certificate(const registry::CertificateRecord& record,
                               std::uint64_t submitted_at);

struct SignedCertificateTimestamp {
  Digest log_id;
  std::uint64_t timestamp = 0;
  Digest leaf_hash;
  Signature log_signature;

  Digest signing_digest() const;
  bool operator==(const SignedCertificateTimestamp&) const = default;
};

struct SignedTreeHead {
  std::uint64_t tree_size = 0;
  Digest root;
  std::uint64_t timestamp = 0;
  Signature log_signature;

  Digest signing_digest() const;
  bool operator==(const SignedTreeHead&) const = default;
};

bool verify_sct_signature(const PublicKey& log_key,
                          const SignedCertificateTimestamp& sct);
bool verify_sth_signature(const PublicKey& log_key, const SignedTreeHead& sth);

class CtLog {
 public:
  explicit CtLog(crypto::KeyPair key);

  // Opens (or creates) a log persisted at path. Entries reload in order;
  // SCTs are re-derived bit-identically from the deterministic signatures.
  static Result<CtLog> open(crypto::KeyPair key, const std::string& path);

  const PublicKey& public_key() const { return key_.public_key; }
  Digest log_id() const { return log_id_; }
  std::uint64_t size() const { return entries_.size(); }

  Result<SignedCertificateTimestamp> submit_entry(const LogEntry& entry);
  SignedTreeHead latest_sth() const;
  SignedTreeHead sth_at(std::uint64_t tree_size) const;
  Result<merkle::InclusionProof> prove_entry(const Digest& leaf_hash,
                                             std::uint64_t tree_size) const;
  Result<merkle::ConsistencyProof> consistency(std::uint64_t old_size,
                                               std::uint64_t new_size) const;
  // Entries with indices in [from, to).
  Result<std::vector<LogEntry>> entries(std::uint64_t from, std::uint64_t to) const;
  std::optional<SignedCertificateTimestamp> sct_for(const Digest& certificate_hash) const;

 private:
  SignedCertificateTimestamp issue_sct(const LogEntry& entry) const;

  crypto::KeyPair key_;
  Digest log_id_;
  merkle::MerkleTree tree_;
  std::vector<LogEntry> entries_;
  std::map<Digest, std::size_t> by_certificate_;
  std::map<Digest, std::size_t> by_leaf_;
  std::uint64_t max_submitted_at_ = 0;
  std::string path_;
};

// Combined registry + transparency verdict for one certificate.
struct TransparencyStatus {
  bool registry_valid = false;
  bool revoked = false;
  bool sct_present = false;
  bool inclusion_ok = false;

  bool transparent() const { return registry_valid && sct_present && inclusion_ok; }
};

Result<TransparencyStatus> verify_certificate_transparency(
    const registry::RegistryState& registry, const CtLog& log,
    std::uint64_t certificate_id);

enum class AlertKind : std::uint8_t {
  Misissuance = 0,
  Consistency = 1,
  SthSignature = 2,
};

const char* alert_kind_name(AlertKind kind);

struct Alert {
  AlertKind kind = AlertKind::Misissuance;
  std::string detail;
  std::uint64_t tree_size = 0;
  Digest certificate_hash;
  AccountId issuer;
};

// Watches a log for misissuance against an expected-issuance feed and for
// append-only violations between successive tree heads.
class Monitor {
 public:
  Monitor(PublicKey log_key, std::set<AccountId> watched_issuers);

  void expect_issuance(const Digest& certificate_hash);
  std::vector<Alert> poll(const CtLog& log);

 private:
  PublicKey log_key_;
  std::set<AccountId> watched_;
  std::set<Digest> expected_;
  std::uint64_t seen_entries_ = 0;
  SignedTreeHead last_sth_;
  bool has_sth_ = false;
};

struct Auditor {
  PublicKey log_key;
  std::uint64_t max_merge_delay = 0;
};

// Client-side SCT check: signature, leaf binding, and incorporation under
// the latest tree head.
bool audit_sct(const Auditor& auditor, const SignedCertificateTimestamp& sct,
               BytesView leaf_bytes, const CtLog& log);

}  // namespace smartcert::ctlog

#endif  // SMARTCERT_CTLOG_HPP_
