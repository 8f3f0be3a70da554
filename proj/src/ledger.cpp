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

#include "smartcert/ledger.hpp"

#include <filesystem>
#include <fstream>
#include <utility>

#include "smartcert/merkle.hpp"

namespace smartcert::ledger {

const char* tx_kind_name(TxKind kind) {
  switch (kind) {
    case TxKind::IssueCertificate:
      return "IssueCertificate";
    case TxKind::RevokeCertificate:
      return "RevokeCertificate";
    case TxKind::DetectAnomaly:
      return "DetectAnomaly";
    case TxKind::FreezeCertificate:
      return "FreezeCertificate";
    case TxKind::WalletTransfer:
      return "WalletTransfer";
  }
  return "Unknown";
}

bool valid_tx_kind(std::uint8_t raw) {
  return raw <= static_cast<std::uint8_t>(TxKind::WalletTransfer);
}

Bytes IssuePayload::encode() const {
  Encoder enc;
  enc.put_u64(deposit_amount);
  enc.put_u64(maturity_date);
  enc.put_metadata(metadata);
  enc.put_fixed(document_hash);
  enc.put_fixed(issuer_signature);
  return enc.take();
}

std::optional<IssuePayload> IssuePayload::decode(BytesView bytes) {
  Decoder dec(bytes);
  IssuePayload out;
  auto deposit = dec.get_u64();
  auto maturity = dec.get_u64();
  auto metadata = dec.get_metadata();
  auto hash = dec.get_fixed<32, DigestTag>();
  auto sig = dec.get_fixed<64, SignatureTag>();
  if (!deposit || !maturity || !metadata || !hash || !sig || !dec.exhausted()) {
    return std::nullopt;
  }
  out.deposit_amount = *deposit;
  out.maturity_date = *maturity;
  out.metadata = std::move(*metadata);
  out.document_hash = *hash;
  out.issuer_signature = *sig;
  return out;
}

Bytes RevokePayload::encode() const {
  Encoder enc;
  enc.put_u64(certificate_id);
  return enc.take();
}

std::optional<RevokePayload> RevokePayload::decode(BytesView bytes) {
  Decoder dec(bytes);
  auto id = dec.get_u64();
  if (!id || !dec.exhausted()) return std::nullopt;
  return RevokePayload{*id};
}

Bytes AnomalyPayload::encode() const {
  Encoder enc;
  enc.put_u64(certificate_id);
  enc.put_string(description);
  return enc.take();
}

std::optional<AnomalyPayload> AnomalyPayload::decode(BytesView bytes) {
  Decoder dec(bytes);
  auto id = dec.get_u64();
  auto description = dec.get_string();
  if (!id || !description || !dec.exhausted()) return std::nullopt;
  return AnomalyPayload{*id, std::move(*description)};
}

Bytes FreezePayload::encode() const {
  Encoder enc;
  enc.put_u64(certificate_id);
  enc.put_string(reason);
  return enc.take();
}

std::optional<FreezePayload> FreezePayload::decode(BytesView bytes) {
  Decoder dec(bytes);
  auto id = dec.get_u64();
  auto reason = dec.get_string();
  if (!id || !reason || !dec.exhausted()) return std::nullopt;
  return FreezePayload{*id, std::move(*reason)};
}

Bytes TransferPayload::encode() const {
  Encoder enc;
  enc.put_fixed(recipient);
  enc.put_u64(amount);
  return enc.take();
}

std::optional<TransferPayload> TransferPayload::decode(BytesView bytes) {
  Decoder dec(bytes);
  auto recipient = dec.get_fixed<20, AccountIdTag>();
  auto amount = dec.get_u64();
  if (!recipient || !amount || !dec.exhausted()) return std::nullopt;
  return TransferPayload{*recipient, *amount};
}

AccountId LedgerTransaction::sender() const {
  return crypto::account_from_public_key(sender_public_key);
}

Digest LedgerTransaction::signing_digest() const {
  Encoder enc;
  enc.put_u64(nonce);
  enc.put_fixed(sender_public_key);
  enc.put_u8(static_cast<std::uint8_t>(kind));
  enc.put_bytes(payload);
  return crypto::sha256(enc.bytes());
}

Digest LedgerTransaction::digest() const {
  Encoder enc;
  encode(enc);
  return crypto::sha256(enc.bytes());
}

void LedgerTransaction::encode(Encoder& enc) const {
  enc.put_u64(nonce);
  enc.put_fixed(sender_public_key);
  enc.put_u8(static_cast<std::uint8_t>(kind));
  enc.put_bytes(payload);
  enc.put_fixed(signature);
}

std::optional<LedgerTransaction> LedgerTransaction::decode(Decoder& dec) {
  auto nonce = dec.get_u64();
  auto sender = dec.get_fixed<32, PublicKeyTag>();
  auto kind = dec.get_u8();
  auto payload = dec.get_bytes();
  auto signature = dec.get_fixed<64, SignatureTag>();
  if (!nonce || !sender || !kind || !payload || !signature || !valid_tx_kind(*kind)) {
    return std::nullopt;
  }
  LedgerTransaction tx;
  tx.nonce = *nonce;
  tx.sender_public_key = *sender;
  tx.kind = static_cast<TxKind>(*kind);
  tx.payload = std::move(*payload);
  tx.signature = *signature;
  return tx;
}

LedgerTransaction make_transaction(const crypto::KeyPair& sender,
                                   std::uint64_t nonce, TxKind kind,
                                   Bytes payload) {
  LedgerTransaction tx;
  tx.nonce = nonce;
  tx.sender_public_key = sender.public_key;
  tx.kind = kind;
  tx.payload = std::move(payload);
  tx.signature = crypto::sign(sender, tx.signing_digest());
  return tx;
}

void TxReceipt::encode(Encoder& enc) const {
  enc.put_u8(success ? 1 : 0);
  enc.put_u8(success ? kReceiptOk : static_cast<std::uint8_t>(code));
  enc.put_string(message);
}

std::optional<TxReceipt> TxReceipt::decode(Decoder& dec) {
  auto success = dec.get_u8();
  auto code = dec.get_u8();
  auto message = dec.get_string();
  if (!success || !code || !message || *success > 1) return std::nullopt;
  TxReceipt receipt;
  receipt.success = *success == 1;
  if (!receipt.success) receipt.code = static_cast<ErrorCode>(*code);
  receipt.message = std::move(*message);
  return receipt;
}

Bytes Block::encode() const {
  Encoder enc;
  enc.put_u64(height);
  enc.put_fixed(parent_digest);
  enc.put_u64(timestamp);
  enc.put_u32(static_cast<std::uint32_t>(transactions.size()));
  for (const auto& tx : transactions) tx.encode(enc);
  enc.put_u32(static_cast<std::uint32_t>(receipts.size()));
  for (const auto& receipt : receipts) receipt.encode(enc);
  enc.put_fixed(tx_root);
  enc.put_fixed(state_digest);
  return enc.take();
}

std::optional<Block> Block::decode(BytesView bytes) {
  Decoder dec(bytes);
  Block block;
  auto height = dec.get_u64();
  auto parent = dec.get_fixed<32, DigestTag>();
  auto timestamp = dec.get_u64();
  if (!height || !parent || !timestamp) return std::nullopt;
  block.height = *height;
  block.parent_digest = *parent;
  block.timestamp = *timestamp;

  auto tx_count = dec.get_u32();
  if (!tx_count) return std::nullopt;
  block.transactions.reserve(*tx_count);
  for (std::uint32_t i = 0; i < *tx_count; ++i) {
    auto tx = LedgerTransaction::decode(dec);
    if (!tx) return std::nullopt;
    block.transactions.push_back(std::move(*tx));
  }

  auto receipt_count = dec.get_u32();
  if (!receipt_count) return std::nullopt;
  block.receipts.reserve(*receipt_count);
  for (std::uint32_t i = 0; i < *receipt_count; ++i) {
    auto receipt = TxReceipt::decode(dec);
    if (!receipt) return std::nullopt;
    block.receipts.push_back(std::move(*receipt));
  }

  auto tx_root = dec.get_fixed<32, DigestTag>();
  auto state = dec.get_fixed<32, DigestTag>();
  if (!tx_root || !state || !dec.exhausted()) return std::nullopt;
  block.tx_root = *tx_root;
  block.state_digest = *state;
  return block;
}

Digest Block::digest() const { return crypto::sha256(encode()); }

Digest compute_tx_root(const std::vector<LedgerTransaction>& transactions) {
  merkle::MerkleTree tree;
  for (const auto& tx : transactions) tree.append(tx.digest().view());
  return tree.root();
}

Digest state_digest(const registry::RegistryState& registry,
                    const std::map<AccountId, std::uint64_t>& balances) {
  Encoder enc;
  enc.put_u64(registry.certificates.size());
  for (const auto& record : registry.certificates) record.encode(enc);
  enc.put_u64(balances.size());
  for (const auto& [account, amount] : balances) {
    enc.put_fixed(account);
    enc.put_u64(amount);
  }
  return crypto::sha256(enc.bytes());
}

Status append_block_file(const std::string& path, const Block& block) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) return Error{ErrorCode::IoError, "cannot open chain file: " + path};
  Bytes body = block.encode();
  Encoder enc;
  enc.put_u32(static_cast<std::uint32_t>(body.size()));
  enc.put_raw(body);
  enc.put_fixed(crypto::sha256(body));
  const Bytes& record = enc.bytes();
  out.write(reinterpret_cast<const char*>(record.data()),
            static_cast<std::streamsize>(record.size()));
  out.flush();
  if (!out) return Error{ErrorCode::IoError, "cannot write chain file: " + path};
  return ok_status();
}

Result<std::vector<Block>> load_block_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return Error{ErrorCode::IoError, "cannot open chain file: " + path};
  Bytes raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::vector<Block> blocks;
  Decoder dec(raw);
  while (!dec.exhausted()) {
    auto length = dec.get_u32();
    if (!length) {
      return Error{ErrorCode::ParseError, "chain file truncated at record " +
                                              std::to_string(blocks.size())};
    }
    auto body = dec.get_raw(*length);
    auto stored_digest = dec.get_fixed<32, DigestTag>();
    if (!body || !stored_digest) {
      return Error{ErrorCode::ParseError, "chain file truncated at record " +
                                              std::to_string(blocks.size())};
    }
    if (crypto::sha256(*body) != *stored_digest) {
      return Error{ErrorCode::StateDivergence,
                   "chain file corrupted at record " + std::to_string(blocks.size())};
    }
    auto block = Block::decode(*body);
    if (!block) {
      return Error{ErrorCode::ParseError,
                   "undecodable block at record " + std::to_string(blocks.size())};
    }
    blocks.push_back(std::move(*block));
  }
  return blocks;
}

Node::Node(GenesisConfig config, std::shared_ptr<registry::ModelClient> model)
    : config_(std::move(config)), model_(std::move(model)) {
  registry_.authority = config_.authority;
  registry_.model_endpoint = config_.model_endpoint;
  for (const auto& [account, amount] : config_.balances) {
    balances_[account] += amount;
  }
  Block genesis;
  genesis.height = 0;
  genesis.timestamp = config_.genesis_timestamp;
  genesis.tx_root = compute_tx_root({});
  genesis.state_digest = state_digest(registry_, balances_);
  chain_.push_back(std::move(genesis));
}

Result<Node> Node::open(GenesisConfig config,
                        std::shared_ptr<registry::ModelClient> model,
                        const std::string& chain_path) {
  Node node(std::move(config), std::move(model));
  std::error_code fs_error;
  bool exists = std::filesystem::exists(chain_path, fs_error) &&
                std::filesystem::file_size(chain_path, fs_error) > 0;
  if (exists) {
    auto blocks = load_block_file(chain_path);
    if (!blocks.ok()) return blocks.error();
    if (blocks.value().empty() ||
        blocks.value().front().digest() != node.tip_digest()) {
      return Error{ErrorCode::StateDivergence,
                   "chain file genesis does not match the configured genesis"};
    }
    for (std::size_t i = 1; i < blocks.value().size(); ++i) {
      auto applied = node.apply_block(blocks.value()[i]);
      if (!applied.ok()) return applied.error();
    }
    node.chain_path_ = chain_path;
    return node;
  }
  node.chain_path_ = chain_path;
  auto persisted = append_block_file(chain_path, node.tip());
  if (!persisted.ok()) return persisted.error();
  return node;
}

Status Node::check_transaction_envelope(
    const LedgerTransaction& tx,
    const std::map<AccountId, std::uint64_t>& nonces) const {
  if (!valid_tx_kind(static_cast<std::uint8_t>(tx.kind))) {
    return Error{ErrorCode::UnknownKind, "unknown transaction kind"};
  }
  if (!crypto::verify(tx.sender_public_key, tx.signing_digest(), tx.signature)) {
    return Error{ErrorCode::InvalidSignature, "transaction signature is invalid"};
  }
  auto it = nonces.find(tx.sender());
  if (it != nonces.end() && tx.nonce <= it->second) {
    return Error{ErrorCode::StaleNonce,
                 "nonce " + std::to_string(tx.nonce) + " not above " +
                     std::to_string(it->second)};
  }
  return ok_status();
}

std::uint64_t Node::next_nonce(const AccountId& account) const {
  std::uint64_t watermark = 0;
  auto applied = applied_nonce_.find(account);
  if (applied != applied_nonce_.end()) watermark = applied->second;
  auto pending = pending_nonce_.find(account);
  if (pending != pending_nonce_.end() && pending->second > watermark) {
    watermark = pending->second;
  }
  return watermark + 1;
}

Status Node::submit_transaction(const LedgerTransaction& tx) {
  std::map<AccountId, std::uint64_t> watermark = applied_nonce_;
  for (const auto& [account, nonce] : pending_nonce_) {
    auto it = watermark.find(account);
    if (it == watermark.end() || nonce > it->second) watermark[account] = nonce;
  }
  auto checked = check_transaction_envelope(tx, watermark);
  if (!checked.ok()) return checked;
  pending_nonce_[tx.sender()] = tx.nonce;
  mempool_.push_back(tx);
  return ok_status();
}

TxReceipt Node::apply_transaction(const LedgerTransaction& tx,
                                  std::uint64_t block_timestamp,
                                  registry::RegistryState& registry,
                                  std::map<AccountId, std::uint64_t>& balances,
                                  std::uint64_t block_height, std::uint32_t tx_index,
                                  std::vector<WalletEvent>& events) {
  auto failure = [](const Error& error) {
    return TxReceipt{false, error.code, error.message};
  };
  auto malformed = [&failure] {
    return failure({ErrorCode::ParseError, "Malformed transaction payload."});
  };
  TxReceipt ok{true, ErrorCode::BadRequest, ""};

  switch (tx.kind) {
    case TxKind::IssueCertificate: {
      auto payload = IssuePayload::decode(tx.payload);
      if (!payload) return malformed();
      auto issued = registry::issue_certificate(
          registry, tx.sender_public_key, payload->deposit_amount,
          payload->maturity_date, payload->metadata, payload->document_hash,
          payload->issuer_signature, block_timestamp);
      if (!issued.ok()) return failure(issued.error());
      ok.message = std::to_string(issued.value());
      return ok;
    }
    case TxKind::RevokeCertificate: {
      auto payload = RevokePayload::decode(tx.payload);
      if (!payload) return malformed();
      auto revoked =
          registry::revoke_certificate(registry, tx.sender(), payload->certificate_id);
      if (!revoked.ok()) return failure(revoked.error());
      return ok;
    }
    case TxKind::DetectAnomaly: {
      auto payload = AnomalyPayload::decode(tx.payload);
      if (!payload) return malformed();
      auto detected =
          registry::detect_anomaly(registry, tx.sender(), payload->certificate_id,
                                   payload->description, *model_);
      if (!detected.ok()) return failure(detected.error());
      return ok;
    }
    case TxKind::FreezeCertificate: {
      auto payload = FreezePayload::decode(tx.payload);
      if (!payload) return malformed();
      auto frozen = registry::freeze_certificate(registry, tx.sender(),
                                                 payload->certificate_id,
                                                 payload->reason);
      if (!frozen.ok()) return failure(frozen.error());
      return ok;
    }
    case TxKind::WalletTransfer: {
      auto payload = TransferPayload::decode(tx.payload);
      if (!payload) return malformed();
      if (payload->amount == 0) {
        return failure({ErrorCode::ZeroAmount, "Transfer amount must be greater than 0."});
      }
      AccountId sender = tx.sender();
      if (registry::owner_has_frozen_certificate(registry, sender)) {
        return failure({ErrorCode::WalletFrozen, "Wallet is frozen."});
      }
      auto it = balances.find(sender);
      std::uint64_t balance = it == balances.end() ? 0 : it->second;
      if (balance < payload->amount) {
        return failure({ErrorCode::InsufficientFunds, "Insufficient funds."});
      }
      balances[sender] = balance - payload->amount;
      balances[payload->recipient] += payload->amount;
      WalletEvent event;
      event.timestamp = block_timestamp;
      event.sender = sender;
      event.recipient = payload->recipient;
      event.amount = payload->amount;
      event.block_height = block_height;
      event.tx_index = tx_index;
      events.push_back(event);
      return ok;
    }
  }
  return failure({ErrorCode::UnknownKind, "unknown transaction kind"});
}

Result<Block> Node::produce_block(std::uint64_t timestamp) {
  if (timestamp < tip().timestamp) {
    return Error{ErrorCode::TimestampRegression,
                 "block timestamp precedes the tip timestamp"};
  }

  std::vector<LedgerTransaction> selected;
  std::size_t taken = 0;
  for (; taken < mempool_.size() && selected.size() < config_.max_block_txs; ++taken) {
    const LedgerTransaction& tx = mempool_[taken];
    // A transaction can go stale only if a conflicting block arrived after
    // submission; replicas would reject it, so the producer drops it here.
    if (check_transaction_envelope(tx, applied_nonce_).ok()) {
      selected.push_back(tx);
      applied_nonce_[tx.sender()] = tx.nonce;
    }
  }
  mempool_.erase(mempool_.begin(),
                 mempool_.begin() + static_cast<std::ptrdiff_t>(taken));

  Block block;
  block.height = tip().height + 1;
  block.parent_digest = tip_digest();
  block.timestamp = timestamp;
  block.transactions = std::move(selected);

  std::uint32_t index = 0;
  for (const auto& tx : block.transactions) {
    block.receipts.push_back(apply_transaction(tx, timestamp, registry_, balances_,
                                               block.height, index, wallet_events_));
    ++index;
  }
  block.tx_root = compute_tx_root(block.transactions);
  block.state_digest = state_digest(registry_, balances_);
  chain_.push_back(block);

  auto persisted = persist(block);
  if (!persisted.ok()) return persisted.error();
  return block;
}

Status Node::apply_block(const Block& block) {
  if (block.parent_digest != tip_digest() || block.height != tip().height + 1) {
    return Error{ErrorCode::ForkDetected,
                 "block does not extend the local tip"};
  }
  if (block.timestamp < tip().timestamp) {
    return Error{ErrorCode::TimestampRegression,
                 "block timestamp precedes the tip timestamp"};
  }
  if (block.transactions.size() > config_.max_block_txs) {
    return Error{ErrorCode::StateDivergence, "block exceeds max_block_txs"};
  }

  registry::RegistryState registry = registry_;
  std::map<AccountId, std::uint64_t> balances = balances_;
  std::map<AccountId, std::uint64_t> nonces = applied_nonce_;
  std::vector<WalletEvent> events;
  std::vector<TxReceipt> receipts;

  std::uint32_t index = 0;
  for (const auto& tx : block.transactions) {
    auto checked = check_transaction_envelope(tx, nonces);
    if (!checked.ok()) return checked;
    nonces[tx.sender()] = tx.nonce;
    receipts.push_back(apply_transaction(tx, block.timestamp, registry, balances,
                                         block.height, index, events));
    ++index;
  }

  if (compute_tx_root(block.transactions) != block.tx_root) {
    return Error{ErrorCode::StateDivergence, "tx_root mismatch"};
  }
  if (state_digest(registry, balances) != block.state_digest) {
    return Error{ErrorCode::StateDivergence, "state digest mismatch"};
  }
  if (receipts != block.receipts) {
    return Error{ErrorCode::StateDivergence, "receipt mismatch"};
  }

  registry_ = std::move(registry);
  balances_ = std::move(balances);
  applied_nonce_ = std::move(nonces);
  wallet_events_.insert(wallet_events_.end(), events.begin(), events.end());
  chain_.push_back(block);
  return persist(block);
}

Status Node::persist(const Block& block) {
  if (chain_path_.empty()) return ok_status();
  return append_block_file(chain_path_, block);
}

}  // namespace smartcert::ledger
