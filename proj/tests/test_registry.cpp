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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "smartcert/registry.hpp"

using namespace smartcert;
using namespace smartcert::registry;

namespace {

constexpr std::uint64_t kNow = 1700000000;

struct Fixture {
  RegistryState state;
  crypto::KeyPair issuer_key;
  AccountId issuer;
  crypto::KeyPair stranger_key;
  AccountId stranger;
  crypto::KeyPair authority_key;
  AccountId authority;
  Digest doc_hash;
  Signature doc_sig;

  Fixture() {
    issuer_key = crypto::keygen_from_seed(Bytes(32, 0x01)).value();
    issuer = crypto::account_from_public_key(issuer_key.public_key);
    stranger_key = crypto::keygen_from_seed(Bytes(32, 0x02)).value();
    stranger = crypto::account_from_public_key(stranger_key.public_key);
    authority_key = crypto::keygen_from_seed(Bytes(32, 0x03)).value();
    authority = crypto::account_from_public_key(authority_key.public_key);
    state.authority = authority;
    state.model_endpoint = "http://127.0.0.1:0";
    doc_hash = crypto::hash_document(to_bytes("certificate document"));
    doc_sig = crypto::sign(issuer_key, doc_hash);
  }

  Result<std::uint64_t> issue(std::uint64_t amount = 1000,
                              std::uint64_t maturity = kNow + 86400) {
    return issue_certificate(state, issuer_key.public_key, amount, maturity,
                             {{"recipient", "alice"}, {"issuer", "acme bank"}},
                             doc_hash, doc_sig, kNow);
  }

  Digest state_fingerprint() const {
    Encoder enc;
    enc.put_u64(state.next_certificate_id);
    enc.put_u64(state.certificates.size());
    for (const auto& record : state.certificates) record.encode(enc);
    return crypto::sha256(enc.bytes());
  }
};

}  // namespace

TEST_CASE("issue assigns dense ids and emits CertificateIssued") {
  Fixture f;
  auto id0 = f.issue();
  REQUIRE(id0.ok());
  CHECK(id0.value() == 0);
  auto id1 = f.issue();
  REQUIRE(id1.ok());
  CHECK(id1.value() == 1);
  CHECK(f.state.next_certificate_id == 2);
  CHECK(f.state.certificates.size() == 2);

  REQUIRE(f.state.event_log.size() == 2);
  const auto& event = f.state.event_log[0];
  CHECK(event.kind == EventKind::CertificateIssued);
  CHECK(event.certificate_id == 0);
  CHECK(event.owner == f.issuer);
  CHECK(event.deposit_amount == 1000);
  CHECK(event.maturity_date == kNow + 86400);

  const auto& record = f.state.certificates[0];
  CHECK(record.owner == f.issuer);
  CHECK(record.issuer == f.issuer);
  CHECK(record.status == CertificateStatus::Active);
  CHECK(!record.is_anomaly);
}

TEST_CASE("issue rejects non-future maturity with the exact message") {
  Fixture f;
  auto before = f.state_fingerprint();

  auto at_now = f.issue(5, kNow);
  REQUIRE(!at_now.ok());
  CHECK(at_now.code() == ErrorCode::MaturityNotFuture);
  CHECK(at_now.message() == "Maturity date must be in the future.");

  auto past = f.issue(5, kNow - 1);
  REQUIRE(!past.ok());
  CHECK(past.code() == ErrorCode::MaturityNotFuture);

  // Maturity is checked before the deposit, mirroring the contract order.
  auto both_bad = f.issue(0, kNow);
  REQUIRE(!both_bad.ok());
  CHECK(both_bad.code() == ErrorCode::MaturityNotFuture);

  CHECK(f.state_fingerprint() == before);
  CHECK(f.state.event_log.empty());
}

TEST_CASE("issue rejects zero deposit with the exact message") {
  Fixture f;
  auto bad = f.issue(0);
  REQUIRE(!bad.ok());
  CHECK(bad.code() == ErrorCode::ZeroDeposit);
  CHECK(bad.message() == "Deposit amount must be greater than 0.");
  CHECK(f.state.certificates.empty());
}

TEST_CASE("issue rejects a signature that does not match the caller") {
  Fixture f;
  Signature forged = crypto::sign(f.stranger_key, f.doc_hash);
  auto bad = issue_certificate(f.state, f.issuer_key.public_key, 1000, kNow + 10,
                               {}, f.doc_hash, forged, kNow);
  REQUIRE(!bad.ok());
  CHECK(bad.code() == ErrorCode::InvalidIssuerSignature);
  CHECK(f.state.certificates.empty());
}

TEST_CASE("verify implements the literal maturity predicate") {
  Fixture f;
  f.issue(1000, kNow + 100);

  // Not yet matured: the contract returns false, not an error.
  CHECK(verify_certificate(f.state, 0, kNow).value() == false);
  CHECK(verify_certificate(f.state, 0, kNow + 99).value() == false);
  // Matured (maturity_date <= now): true while not revoked.
  CHECK(verify_certificate(f.state, 0, kNow + 100).value() == true);
  CHECK(verify_certificate(f.state, 0, kNow + 101).value() == true);

  REQUIRE(revoke_certificate(f.state, f.issuer, 0).ok());
  CHECK(verify_certificate(f.state, 0, kNow + 101).value() == false);
}

TEST_CASE("verify on a missing id reports the exact message") {
  Fixture f;
  auto missing = verify_certificate(f.state, 0, kNow);
  REQUIRE(!missing.ok());
  CHECK(missing.code() == ErrorCode::NotFound);
  CHECK(missing.message() == "Certificate does not exist.");

  f.issue();
  CHECK(!verify_certificate(f.state, 1, kNow).ok());
  CHECK(verify_certificate(f.state, 0, kNow).ok());
}

TEST_CASE("frozen status does not change the verify predicate") {
  Fixture f;
  f.issue(1000, kNow + 100);
  REQUIRE(freeze_certificate(f.state, f.authority, 0, "incident").ok());
  CHECK(f.state.certificates[0].status == CertificateStatus::Frozen);
  CHECK(verify_certificate(f.state, 0, kNow + 100).value() == true);
}

TEST_CASE("verify_document binds both hash and signature") {
  Fixture f;
  f.issue();
  CHECK(verify_document(f.state, 0, to_bytes("certificate document")).value());
  CHECK(!verify_document(f.state, 0, to_bytes("certificate documenT")).value());
  CHECK(!verify_document(f.state, 1, to_bytes("x")).ok());

  // A record carrying a forged signature never verifies, even with the
  // original bytes.
  f.state.certificates[0].issuer_signature.bytes[0] ^= 0x01;
  CHECK(!verify_document(f.state, 0, to_bytes("certificate document")).value());
}

TEST_CASE("revoke lifecycle and guards") {
  Fixture f;
  f.issue();

  auto not_owner = revoke_certificate(f.state, f.stranger, 0);
  REQUIRE(!not_owner.ok());
  CHECK(not_owner.code() == ErrorCode::NotOwner);
  CHECK(not_owner.message() == "Only the owner can revoke the certificate.");
  CHECK(f.state.certificates[0].status == CertificateStatus::Active);

  REQUIRE(revoke_certificate(f.state, f.issuer, 0).ok());
  CHECK(f.state.certificates[0].status == CertificateStatus::Revoked);
  CHECK(f.state.event_log.back().kind == EventKind::CertificateRevoked);

  auto again = revoke_certificate(f.state, f.issuer, 0);
  REQUIRE(!again.ok());
  CHECK(again.code() == ErrorCode::AlreadyRevoked);
  CHECK(again.message() == "Certificate is already revoked.");

  auto missing = revoke_certificate(f.state, f.issuer, 7);
  REQUIRE(!missing.ok());
  CHECK(missing.message() == "Certificate does not exist.");
}

TEST_CASE("detect_anomaly marks the certificate on a positive model answer") {
  Fixture f;
  f.issue();
  KeywordModelClient model("hijack");

  auto ok = detect_anomaly(f.state, f.issuer, 0, "session hijack on issuer portal", model);
  REQUIRE(ok.ok());
  CHECK(f.state.certificates[0].is_anomaly);
  const auto& event = f.state.event_log.back();
  CHECK(event.kind == EventKind::AnomalyDetected);
  CHECK(event.certificate_id == 0);
  CHECK(event.description == "session hijack on issuer portal");
}

TEST_CASE("detect_anomaly error paths reproduce the contract messages") {
  Fixture f;
  f.issue();
  KeywordModelClient model("hijack");

  auto missing = detect_anomaly(f.state, f.issuer, 9, "x", model);
  REQUIRE(!missing.ok());
  CHECK(missing.message() == "Certificate does not exist.");

  auto not_owner = detect_anomaly(f.state, f.stranger, 0, "x", model);
  REQUIRE(!not_owner.ok());
  CHECK(not_owner.code() == ErrorCode::NotOwner);
  CHECK(not_owner.message() == "Only the owner can detect anomalies.");

  auto benign = detect_anomaly(f.state, f.issuer, 0, "routine audit", model);
  REQUIRE(!benign.ok());
  CHECK(benign.code() == ErrorCode::NotAnomaly);
  CHECK(benign.message() == "Not detected as an anomaly");
  CHECK(!f.state.certificates[0].is_anomaly);

  struct FailingModel : ModelClient {
    int status;
    explicit FailingModel(int s) : status(s) {}
    Result<ModelResponse> detect_anomaly(const std::string&,
                                         const std::string&) override {
      if (status < 0) return Error{ErrorCode::IoError, "connection refused"};
      return ModelResponse{status, "Anomaly"};
    }
  };

  FailingModel server_error(500);
  auto broken = detect_anomaly(f.state, f.issuer, 0, "hijack", server_error);
  REQUIRE(!broken.ok());
  CHECK(broken.code() == ErrorCode::ModelError);
  CHECK(broken.message() == "Machine learning model error");

  FailingModel unreachable(-1);
  auto down = detect_anomaly(f.state, f.issuer, 0, "hijack", unreachable);
  REQUIRE(!down.ok());
  CHECK(down.message() == "Machine learning model error");

  REQUIRE(revoke_certificate(f.state, f.issuer, 0).ok());
  auto revoked = detect_anomaly(f.state, f.issuer, 0, "hijack", model);
  REQUIRE(!revoked.ok());
  CHECK(revoked.code() == ErrorCode::RevokedCertificate);
  CHECK(revoked.message() == "Certificate is revoked and cannot have anomalies.");
}

TEST_CASE("model request body joins description and decimal id with a comma") {
  Fixture f;
  for (int i = 0; i < 12; ++i) f.issue();

  struct CapturingModel : ModelClient {
    std::string seen_endpoint;
    std::string seen_body;
    Result<ModelResponse> detect_anomaly(const std::string& endpoint,
                                         const std::string& body) override {
      seen_endpoint = endpoint;
      seen_body = body;
      return ModelResponse{200, "Anomaly"};
    }
  };

  CapturingModel capture;
  REQUIRE(detect_anomaly(f.state, f.issuer, 11, "odd transfer burst", capture).ok());
  CHECK(capture.seen_body == "odd transfer burst,11");
  CHECK(capture.seen_endpoint == f.state.model_endpoint);
}

TEST_CASE("freeze toggles status and respects guards") {
  Fixture f;
  f.issue();

  auto not_authority = freeze_certificate(f.state, f.stranger, 0, "r");
  REQUIRE(!not_authority.ok());
  CHECK(not_authority.code() == ErrorCode::NotAuthority);

  REQUIRE(freeze_certificate(f.state, f.authority, 0, "wallet anomaly").ok());
  CHECK(f.state.certificates[0].status == CertificateStatus::Frozen);
  CHECK(f.state.event_log.back().kind == EventKind::CertificateFrozen);
  CHECK(f.state.event_log.back().description == "wallet anomaly");
  CHECK(owner_has_frozen_certificate(f.state, f.issuer));

  REQUIRE(freeze_certificate(f.state, f.authority, 0, "cleared").ok());
  CHECK(f.state.certificates[0].status == CertificateStatus::Active);
  CHECK(!owner_has_frozen_certificate(f.state, f.issuer));

  REQUIRE(revoke_certificate(f.state, f.issuer, 0).ok());
  auto on_revoked = freeze_certificate(f.state, f.authority, 0, "r");
  REQUIRE(!on_revoked.ok());
  CHECK(on_revoked.code() == ErrorCode::RevokedCertificate);
  CHECK(f.state.certificates[0].status == CertificateStatus::Revoked);
}

TEST_CASE("revoked is absorbing") {
  Fixture f;
  f.issue();
  REQUIRE(revoke_certificate(f.state, f.issuer, 0).ok());
  KeywordModelClient model("hijack");

  CHECK(!freeze_certificate(f.state, f.authority, 0, "r").ok());
  CHECK(!detect_anomaly(f.state, f.issuer, 0, "hijack", model).ok());
  CHECK(!revoke_certificate(f.state, f.issuer, 0).ok());
  CHECK(f.state.certificates[0].status == CertificateStatus::Revoked);
}

TEST_CASE("failed operations leave the state fingerprint unchanged") {
  Fixture f;
  f.issue();
  KeywordModelClient model("hijack");
  auto before = f.state_fingerprint();
  auto events_before = f.state.event_log.size();

  (void)f.issue(0);
  (void)f.issue(5, kNow);
  (void)revoke_certificate(f.state, f.stranger, 0);
  (void)revoke_certificate(f.state, f.issuer, 42);
  (void)detect_anomaly(f.state, f.stranger, 0, "hijack", model);
  (void)detect_anomaly(f.state, f.issuer, 0, "benign", model);
  (void)freeze_certificate(f.state, f.stranger, 0, "r");

  CHECK(f.state_fingerprint() == before);
  CHECK(f.state.event_log.size() == events_before);
}

TEST_CASE("replaying the same operation sequence reproduces the fingerprint") {
  auto run = [] {
    Fixture f;
    KeywordModelClient model("hijack");
    f.issue();
    f.issue(500, kNow + 10);
    (void)detect_anomaly(f.state, f.issuer, 1, "hijack attempt", model);
    (void)freeze_certificate(f.state, f.authority, 0, "incident");
    (void)revoke_certificate(f.state, f.issuer, 1);
    return f.state_fingerprint();
  };
  CHECK(run() == run());
}
