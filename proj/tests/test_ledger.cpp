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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "smartcert/ledger.hpp"

using namespace smartcert;
using namespace smartcert::ledger;

namespace {

constexpr std::uint64_t kGenesisTime = 1700000000;

struct Fixture {
  crypto::KeyPair alice = crypto::keygen_from_seed(Bytes(32, 0x11)).value();
  crypto::KeyPair bob = crypto::keygen_from_seed(Bytes(32, 0x22)).value();
  crypto::KeyPair authority = crypto::keygen_from_seed(Bytes(32, 0x33)).value();
  AccountId alice_id = crypto::account_from_public_key(alice.public_key);
  AccountId bob_id = crypto::account_from_public_key(bob.public_key);
  AccountId authority_id = crypto::account_from_public_key(authority.public_key);
  std::uint64_t alice_nonce = 0;
  std::uint64_t bob_nonce = 0;
  std::uint64_t authority_nonce = 0;

  GenesisConfig config() const {
    GenesisConfig cfg;
    cfg.authority = authority_id;
    cfg.model_endpoint = "http://127.0.0.1:0";
    cfg.balances = {{alice_id, 1000}, {bob_id, 500}};
    cfg.genesis_timestamp = kGenesisTime;
    return cfg;
  }

  Node node() const {
    return Node(config(), std::make_shared<registry::KeywordModelClient>("hijack"));
  }

  std::uint64_t& nonce_for(const crypto::KeyPair& key) {
    if (&key == &alice) return alice_nonce;
    if (&key == &bob) return bob_nonce;
    return authority_nonce;
  }

  LedgerTransaction issue_tx(const crypto::KeyPair& sender,
                             std::uint64_t amount = 100,
                             std::uint64_t maturity = kGenesisTime + 1000) {
    IssuePayload payload;
    payload.deposit_amount = amount;
    payload.maturity_date = maturity;
    payload.metadata = {{"recipient", "r"}};
    payload.document_hash = crypto::hash_document(to_bytes("doc"));
    payload.issuer_signature = crypto::sign(sender, payload.document_hash);
    return make_transaction(sender, ++nonce_for(sender), TxKind::IssueCertificate,
                            payload.encode());
  }

  LedgerTransaction transfer_tx(const crypto::KeyPair& sender,
                                const AccountId& recipient, std::uint64_t amount) {
    return make_transaction(sender, ++nonce_for(sender), TxKind::WalletTransfer,
                            TransferPayload{recipient, amount}.encode());
  }

  LedgerTransaction freeze_tx(const crypto::KeyPair& sender, std::uint64_t id,
                              const std::string& reason = "incident") {
    return make_transaction(sender, ++nonce_for(sender), TxKind::FreezeCertificate,
                            FreezePayload{id, reason}.encode());
  }

  LedgerTransaction revoke_tx(const crypto::KeyPair& sender, std::uint64_t id) {
    return make_transaction(sender, ++nonce_for(sender), TxKind::RevokeCertificate,
                            RevokePayload{id}.encode());
  }
};

std::string temp_chain_path(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() / "smartcert-ledger-tests";
  std::filesystem::create_directories(dir);
  auto path = dir / (std::string(tag) + ".chain");
  std::filesystem::remove(path);
  return path.string();
}

}  // namespace

TEST_CASE("transaction encoding roundtrips") {
  Fixture f;
  LedgerTransaction tx = f.issue_tx(f.alice);
  Encoder enc;
  tx.encode(enc);
  Decoder dec(enc.bytes());
  auto back = LedgerTransaction::decode(dec);
  REQUIRE(back.has_value());
  CHECK(dec.exhausted());
  CHECK(back->digest() == tx.digest());
  CHECK(back->signing_digest() == tx.signing_digest());
  CHECK(crypto::verify(back->sender_public_key, back->signing_digest(), back->signature));
}

TEST_CASE("submit_transaction validates signature, nonce, and kind") {
  Fixture f;
  Node node = f.node();

  LedgerTransaction tx = f.issue_tx(f.alice);
  REQUIRE(node.submit_transaction(tx).ok());
  CHECK(node.mempool_size() == 1);

  LedgerTransaction bad_sig = f.issue_tx(f.alice);
  bad_sig.signature.bytes[0] ^= 0x01;
  auto rejected = node.submit_transaction(bad_sig);
  REQUIRE(!rejected.ok());
  CHECK(rejected.code() == ErrorCode::InvalidSignature);

  LedgerTransaction duplicate = tx;
  auto stale = node.submit_transaction(duplicate);
  REQUIRE(!stale.ok());
  CHECK(stale.code() == ErrorCode::StaleNonce);

  LedgerTransaction lower = f.issue_tx(f.bob);
  lower.nonce = 0;
  LedgerTransaction resigned = make_transaction(f.bob, 1, lower.kind, lower.payload);
  REQUIRE(node.submit_transaction(resigned).ok());
  auto replay = node.submit_transaction(resigned);
  CHECK(replay.code() == ErrorCode::StaleNonce);

  LedgerTransaction unknown;
  unknown.nonce = 99;
  unknown.sender_public_key = f.alice.public_key;
  unknown.kind = static_cast<TxKind>(9);
  unknown.signature = crypto::sign(f.alice, unknown.signing_digest());
  auto bad_kind = node.submit_transaction(unknown);
  REQUIRE(!bad_kind.ok());
  CHECK(bad_kind.code() == ErrorCode::UnknownKind);

  CHECK(node.mempool_size() == 2);
}

TEST_CASE("empty block keeps the parent state digest") {
  Fixture f;
  Node node = f.node();
  Digest genesis_state = node.tip().state_digest;
  auto block = node.produce_block(kGenesisTime + 1);
  REQUIRE(block.ok());
  CHECK(block.value().transactions.empty());
  CHECK(block.value().state_digest == genesis_state);
  CHECK(block.value().height == 1);
  CHECK(block.value().parent_digest == node.chain()[0].digest());
}

TEST_CASE("produced issue transaction lands in the registry") {
  Fixture f;
  Node node = f.node();
  REQUIRE(node.submit_transaction(f.issue_tx(f.alice)).ok());
  auto block = node.produce_block(kGenesisTime + 5);
  REQUIRE(block.ok());
  REQUIRE(block.value().transactions.size() == 1);
  REQUIRE(block.value().receipts.size() == 1);
  CHECK(block.value().receipts[0].success);
  CHECK(block.value().receipts[0].message == "0");
  CHECK(node.registry().certificates.size() == 1);
  CHECK(node.registry().certificates[0].owner == f.alice_id);
  CHECK(node.mempool_size() == 0);
}

TEST_CASE("timestamp regression is rejected") {
  Fixture f;
  Node node = f.node();
  REQUIRE(node.produce_block(kGenesisTime + 10).ok());
  auto bad = node.produce_block(kGenesisTime + 9);
  REQUIRE(!bad.ok());
  CHECK(bad.code() == ErrorCode::TimestampRegression);
  // Equal timestamps are allowed (non-decreasing).
  CHECK(node.produce_block(kGenesisTime + 10).ok());
}

TEST_CASE("failed transactions are included with receipts and do not touch state") {
  Fixture f;
  Node node = f.node();
  REQUIRE(node.submit_transaction(f.issue_tx(f.alice)).ok());
  REQUIRE(node.produce_block(kGenesisTime + 1).ok());
  Digest before = node.current_state_digest();

  // Bob tries to revoke Alice's certificate: valid envelope, domain failure.
  REQUIRE(node.submit_transaction(f.revoke_tx(f.bob, 0)).ok());
  auto block = node.produce_block(kGenesisTime + 2);
  REQUIRE(block.ok());
  REQUIRE(block.value().receipts.size() == 1);
  CHECK(!block.value().receipts[0].success);
  CHECK(block.value().receipts[0].code == ErrorCode::NotOwner);
  CHECK(block.value().receipts[0].message == "Only the owner can revoke the certificate.");
  CHECK(node.current_state_digest() == before);
  CHECK(block.value().state_digest == before);
}

TEST_CASE("wallet transfers move balances and conserve the total") {
  Fixture f;
  Node node = f.node();
  REQUIRE(node.submit_transaction(f.transfer_tx(f.alice, f.bob_id, 40)).ok());
  REQUIRE(node.produce_block(kGenesisTime + 1).ok());
  CHECK(node.balances().at(f.alice_id) == 960);
  CHECK(node.balances().at(f.bob_id) == 540);

  AccountId fresh = crypto::account_from_bytes(Bytes(32, 0x77)).value();
  REQUIRE(node.submit_transaction(f.transfer_tx(f.alice, fresh, 960)).ok());
  REQUIRE(node.produce_block(kGenesisTime + 2).ok());
  CHECK(node.balances().at(f.alice_id) == 0);
  CHECK(node.balances().at(fresh) == 960);

  std::uint64_t total = 0;
  for (const auto& [account, amount] : node.balances()) total += amount;
  CHECK(total == 1500);

  REQUIRE(node.wallet_events().size() == 2);
  CHECK(node.wallet_events()[0].sender == f.alice_id);
  CHECK(node.wallet_events()[0].recipient == f.bob_id);
  CHECK(node.wallet_events()[0].amount == 40);
  CHECK(node.wallet_events()[0].block_height == 1);
}

TEST_CASE("wallet transfer failure receipts") {
  Fixture f;
  Node node = f.node();

  REQUIRE(node.submit_transaction(f.transfer_tx(f.bob, f.alice_id, 501)).ok());
  auto b1 = node.produce_block(kGenesisTime + 1);
  REQUIRE(b1.ok());
  CHECK(b1.value().receipts[0].code == ErrorCode::InsufficientFunds);

  REQUIRE(node.submit_transaction(f.transfer_tx(f.bob, f.alice_id, 0)).ok());
  auto b2 = node.produce_block(kGenesisTime + 2);
  REQUIRE(b2.ok());
  CHECK(b2.value().receipts[0].code == ErrorCode::ZeroAmount);
  CHECK(node.balances().at(f.bob_id) == 500);
}

TEST_CASE("frozen certificate owners cannot transfer until unfrozen") {
  Fixture f;
  Node node = f.node();
  REQUIRE(node.submit_transaction(f.issue_tx(f.alice)).ok());
  REQUIRE(node.submit_transaction(f.freeze_tx(f.authority, 0)).ok());
  REQUIRE(node.produce_block(kGenesisTime + 1).ok());
  CHECK(node.registry().certificates[0].status ==
        registry::CertificateStatus::Frozen);

  REQUIRE(node.submit_transaction(f.transfer_tx(f.alice, f.bob_id, 10)).ok());
  auto frozen_block = node.produce_block(kGenesisTime + 2);
  REQUIRE(frozen_block.ok());
  CHECK(!frozen_block.value().receipts[0].success);
  CHECK(frozen_block.value().receipts[0].code == ErrorCode::WalletFrozen);
  CHECK(node.balances().at(f.alice_id) == 1000);

  // Authority unfreezes (toggle); transfers work again.
  REQUIRE(node.submit_transaction(f.freeze_tx(f.authority, 0, "cleared")).ok());
  REQUIRE(node.produce_block(kGenesisTime + 3).ok());
  REQUIRE(node.submit_transaction(f.transfer_tx(f.alice, f.bob_id, 10)).ok());
  auto thawed_block = node.produce_block(kGenesisTime + 4);
  REQUIRE(thawed_block.ok());
  CHECK(thawed_block.value().receipts[0].success);
  CHECK(node.balances().at(f.alice_id) == 990);
}

TEST_CASE("anomaly transactions consult the model client") {
  Fixture f;
  Node node = f.node();
  REQUIRE(node.submit_transaction(f.issue_tx(f.alice)).ok());
  REQUIRE(node.produce_block(kGenesisTime + 1).ok());

  auto anomaly = make_transaction(
      f.alice, ++f.alice_nonce, TxKind::DetectAnomaly,
      AnomalyPayload{0, "wallet hijack attempt seen"}.encode());
  REQUIRE(node.submit_transaction(anomaly).ok());
  REQUIRE(node.produce_block(kGenesisTime + 2).ok());
  CHECK(node.registry().certificates[0].is_anomaly);

  auto benign = make_transaction(f.alice, ++f.alice_nonce, TxKind::DetectAnomaly,
                                 AnomalyPayload{0, "routine check"}.encode());
  REQUIRE(node.submit_transaction(benign).ok());
  auto block = node.produce_block(kGenesisTime + 3);
  REQUIRE(block.ok());
  CHECK(!block.value().receipts[0].success);
  CHECK(block.value().receipts[0].message == "Not detected as an anomaly");
}

TEST_CASE("replicas applying the same stream converge byte-for-byte") {
  Fixture f;
  Node producer = f.node();
  Node replica_b = f.node();
  Node replica_c = f.node();

  std::mt19937_64 rng(2024);
  for (int height = 1; height <= 50; ++height) {
    int txs = static_cast<int>(rng() % 4);
    for (int t = 0; t < txs; ++t) {
      switch (rng() % 4) {
        case 0:
          REQUIRE(producer.submit_transaction(f.issue_tx(f.alice)).ok());
          break;
        case 1:
          REQUIRE(producer.submit_transaction(
              f.transfer_tx(f.bob, f.alice_id, rng() % 30)).ok());
          break;
        case 2:
          REQUIRE(producer.submit_transaction(
              f.revoke_tx(f.bob, rng() % 5)).ok());
          break;
        case 3:
          REQUIRE(producer.submit_transaction(
              f.freeze_tx(f.authority, rng() % 5)).ok());
          break;
      }
    }
    auto block = producer.produce_block(kGenesisTime + 10 * height);
    REQUIRE(block.ok());
    REQUIRE(replica_b.apply_block(block.value()).ok());
    REQUIRE(replica_c.apply_block(block.value()).ok());
  }

  CHECK(producer.current_state_digest() == replica_b.current_state_digest());
  CHECK(producer.current_state_digest() == replica_c.current_state_digest());
  CHECK(producer.tip_digest() == replica_b.tip_digest());
  CHECK(producer.tip_digest() == replica_c.tip_digest());
  CHECK(replica_b.wallet_events().size() == producer.wallet_events().size());
}

TEST_CASE("apply_block rejects tampering, forks, and receipt lies") {
  Fixture f;
  Node producer = f.node();
  Node replica = f.node();

  REQUIRE(producer.submit_transaction(f.issue_tx(f.alice)).ok());
  auto b1 = producer.produce_block(kGenesisTime + 1);
  REQUIRE(b1.ok());

  Block tampered_payload = b1.value();
  tampered_payload.transactions[0].payload[3] ^= 0x01;
  auto r1 = replica.apply_block(tampered_payload);
  REQUIRE(!r1.ok());
  // Payload flips break the sender's signature first.
  CHECK(r1.code() == ErrorCode::InvalidSignature);

  Block tampered_root = b1.value();
  tampered_root.tx_root.bytes[0] ^= 0x01;
  CHECK(replica.apply_block(tampered_root).code() == ErrorCode::StateDivergence);

  Block tampered_state = b1.value();
  tampered_state.state_digest.bytes[0] ^= 0x01;
  CHECK(replica.apply_block(tampered_state).code() == ErrorCode::StateDivergence);

  Block lied_receipt = b1.value();
  lied_receipt.receipts[0].success = false;
  lied_receipt.receipts[0].code = ErrorCode::NotOwner;
  CHECK(replica.apply_block(lied_receipt).code() == ErrorCode::StateDivergence);

  Block wrong_height = b1.value();
  wrong_height.height = 5;
  CHECK(replica.apply_block(wrong_height).code() == ErrorCode::ForkDetected);

  // The untampered block still applies, and tampering attempts left no trace.
  REQUIRE(replica.apply_block(b1.value()).ok());
  CHECK(replica.current_state_digest() == producer.current_state_digest());

  Block replayed = b1.value();
  CHECK(replica.apply_block(replayed).code() == ErrorCode::ForkDetected);
}

TEST_CASE("chain file persists and reloads to the identical tip") {
  Fixture f;
  std::string path = temp_chain_path("persist");
  {
    auto node = Node::open(f.config(),
                           std::make_shared<registry::KeywordModelClient>("hijack"),
                           path);
    REQUIRE(node.ok());
    REQUIRE(node.value().submit_transaction(f.issue_tx(f.alice)).ok());
    REQUIRE(node.value().produce_block(kGenesisTime + 1).ok());
    REQUIRE(node.value().submit_transaction(
        f.transfer_tx(f.alice, f.bob_id, 25)).ok());
    REQUIRE(node.value().produce_block(kGenesisTime + 2).ok());
  }

  auto reloaded = Node::open(f.config(),
                             std::make_shared<registry::KeywordModelClient>("hijack"),
                             path);
  REQUIRE(reloaded.ok());
  CHECK(reloaded.value().chain().size() == 3);
  CHECK(reloaded.value().registry().certificates.size() == 1);
  CHECK(reloaded.value().balances().at(f.bob_id) == 525);
  CHECK(reloaded.value().wallet_events().size() == 1);

  Fixture g;
  Node in_memory = g.node();
  REQUIRE(in_memory.submit_transaction(g.issue_tx(g.alice)).ok());
  REQUIRE(in_memory.produce_block(kGenesisTime + 1).ok());
  REQUIRE(in_memory.submit_transaction(g.transfer_tx(g.alice, g.bob_id, 25)).ok());
  REQUIRE(in_memory.produce_block(kGenesisTime + 2).ok());
  CHECK(reloaded.value().tip_digest() == in_memory.tip_digest());
}

TEST_CASE("any single bit flip in the chain file is detected") {
  Fixture f;
  std::string path = temp_chain_path("bitflip");
  {
    auto node = Node::open(f.config(),
                           std::make_shared<registry::KeywordModelClient>("hijack"),
                           path);
    REQUIRE(node.ok());
    REQUIRE(node.value().submit_transaction(f.issue_tx(f.alice)).ok());
    REQUIRE(node.value().produce_block(kGenesisTime + 1).ok());
    REQUIRE(node.value().produce_block(kGenesisTime + 2).ok());
  }

  std::ifstream in(path, std::ios::binary);
  Bytes original((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  REQUIRE(!original.empty());

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 64; ++trial) {
    Bytes mutated = original;
    std::size_t bit = rng() % (mutated.size() * 8);
    mutated[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(mutated.data()),
              static_cast<std::streamsize>(mutated.size()));
    out.close();

    auto reopened = Node::open(
        f.config(), std::make_shared<registry::KeywordModelClient>("hijack"), path);
    CHECK(!reopened.ok());
  }
}

TEST_CASE("chain file with a mismatched genesis is rejected") {
  Fixture f;
  std::string path = temp_chain_path("genesis-mismatch");
  {
    auto node = Node::open(f.config(),
                           std::make_shared<registry::KeywordModelClient>("hijack"),
                           path);
    REQUIRE(node.ok());
  }
  GenesisConfig other = f.config();
  other.balances[0].second += 1;
  auto reopened = Node::open(
      other, std::make_shared<registry::KeywordModelClient>("hijack"), path);
  REQUIRE(!reopened.ok());
  CHECK(reopened.code() == ErrorCode::StateDivergence);
}
