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

#ifndef SMARTCERT_LEDGER_HPP_
#define SMARTCERT_LEDGER_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smartcert/crypto.hpp"
#include "smartcert/encoding.hpp"
#include "smartcert/errors.hpp"
#include "smartcert/registry.hpp"

namespace smartcert::ledger {

enum class TxKind : std::uint8_t {
  IssueCertificate = 0,
  RevokeCertificate = 1,
  DetectAnomaly = 2,
  FreezeCertificate = 3,
  WalletTransfer = 4,
};

const char* tx_kind_name(TxKind kind);
bool valid_tx_kind(std::uint8_t raw);

struct IssuePayload {
  std::uint64_t deposit_amount = 0;
  std::uint64_t maturity_date = 0;
  Metadata metadata;
  Digest document_hash;
  Signature issuer_signature;

  Bytes encode() const;
  static std::optional<IssuePayload> decode(BytesView bytes);
};

struct RevokePayload {
  std::uint64_t certificate_id = 0;

  Bytes encode() const;
  static std::optional<RevokePayload> decode(BytesView bytes);
};

struct AnomalyPayload {
  std::uint64_t certificate_id = 0;
  std::string description;

  Bytes encode() const;
  static std::optional<AnomalyPayload> decode(BytesView bytes);
};

struct FreezePayload {
  std::uint64_t certificate_id = 0;
  std::string reason;

  Bytes encode() const;
  static std::optional<FreezePayload> decode(BytesView bytes);
};

struct TransferPayload {
  AccountId recipient;
  std::uint64_t amount = 0;

  Bytes encode() const;
  static std::optional<TransferPayload> decode(BytesView bytes);
};

struct LedgerTransaction {
  std::uint64_t nonce = 0;
  PublicKey sender_public_key;
  TxKind kind = TxKind::IssueCertificate;
  Bytes payload;
  Signature signature;

  AccountId sender() const;
  // Digest signed by the sender: everything except the signature itself.
  Digest signing_digest() const;
  // Transaction id: digest of the full canonical encoding.
  Digest digest() const;
  void encode(Encoder& enc) const;
  static std::optional<LedgerTransaction> decode(Decoder& dec);
};

LedgerTransaction make_transaction(const crypto::KeyPair& sender,
                                   std::uint64_t nonce, TxKind kind,
                                   Bytes payload);

// Receipt code for successful transactions (no ErrorCode applies).
inline constexpr std::uint8_t kReceiptOk = 0xff;

struct TxReceipt {
  bool success = false;
  ErrorCode code = ErrorCode::BadRequest;
  std::string message;

  void encode(Encoder& enc) const;
  static std::optional<TxReceipt> decode(Decoder& dec);
  bool operator==(const TxReceipt&) const = default;
};

struct Block {
  std::uint64_t height = 0;
  Digest parent_digest;
  std::uint64_t timestamp = 0;
  std::vector<LedgerTransaction> transactions;
  std::vector<TxReceipt> receipts;
  Digest tx_root;
  Digest state_digest;

  Bytes encode() const;
  static std::optional<Block> decode(BytesView bytes);
  Digest digest() const;
};

Digest compute_tx_root(const std::vector<LedgerTransaction>& transactions);

// Canonical digest of (certificates, balances sorted by account).
Digest state_digest(const registry::RegistryState& registry,
                    const std::map<AccountId, std::uint64_t>& balances);

// Wallet activity emitted on successful WalletTransfer, consumed by the
// sentinel's monitoring rules.
struct WalletEvent {
  std::uint64_t timestamp = 0;
  AccountId sender;
  AccountId recipient;
  std::uint64_t amount = 0;
  std::uint64_t block_height = 0;
  std::uint32_t tx_index = 0;

  bool operator==(const WalletEvent&) const = default;
};

struct GenesisConfig {
  AccountId authority;
  std::string model_endpoint;
  std::vector<std::pair<AccountId, std::uint64_t>> balances;
  std::uint64_t genesis_timestamp = 0;
  std::uint32_t max_block_txs = 100;
};

// Append-only chain file: records of [u32 length][block bytes][block digest].
// The trailing digest makes any on-disk corruption detectable record-locally.
Status append_block_file(const std::string& path, const Block& block);
Result<std::vector<Block>> load_block_file(const std::string& path);

class Node {
 public:
  Node(GenesisConfig config, std::shared_ptr<registry::ModelClient> model);

  // Opens (or creates) a node persisted at chain_path: replays the existing
  // file against the genesis config, or writes a fresh genesis record.
  static Result<Node> open(GenesisConfig config,
                           std::shared_ptr<registry::ModelClient> model,
                           const std::string& chain_path);

  Status submit_transaction(const LedgerTransaction& tx);
  Result<Block> produce_block(std::uint64_t timestamp);
  Status apply_block(const Block& block);

  const std::vector<Block>& chain() const { return chain_; }
  const Block& tip() const { return chain_.back(); }
  Digest tip_digest() const { return chain_.back().digest(); }
  const registry::RegistryState& registry() const { return registry_; }
  const std::map<AccountId, std::uint64_t>& balances() const { return balances_; }
  const std::vector<WalletEvent>& wallet_events() const { return wallet_events_; }
  Digest current_state_digest() const { return state_digest(registry_, balances_); }
  std::size_t mempool_size() const { return mempool_.size(); }
  const GenesisConfig& genesis_config() const { return config_; }
  // Smallest nonce the account can use next (counts mempool and chain).
  std::uint64_t next_nonce(const AccountId& account) const;

 private:
  struct ApplyOutcome {
    std::vector<TxReceipt> receipts;
    std::vector<WalletEvent> events;
  };

  TxReceipt apply_transaction(const LedgerTransaction& tx,
                              std::uint64_t block_timestamp,
                              registry::RegistryState& registry,
                              std::map<AccountId, std::uint64_t>& balances,
                              std::uint64_t block_height, std::uint32_t tx_index,
                              std::vector<WalletEvent>& events);
  Status check_transaction_envelope(const LedgerTransaction& tx,
                                    const std::map<AccountId, std::uint64_t>& nonces) const;
  Status persist(const Block& block);

  GenesisConfig config_;
  std::shared_ptr<registry::ModelClient> model_;
  std::vector<Block> chain_;
  registry::RegistryState registry_;
  std::map<AccountId, std::uint64_t> balances_;
  std::map<AccountId, std::uint64_t> applied_nonce_;
  std::map<AccountId, std::uint64_t> pending_nonce_;
  std::vector<LedgerTransaction> mempool_;
  std::vector<WalletEvent> wallet_events_;
  std::string chain_path_;
};

}  // namespace smartcert::ledger

#endif  // SMARTCERT_LEDGER_HPP_
