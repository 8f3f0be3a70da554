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

#ifndef SMARTCERT_SENTINEL_HPP_
#define SMARTCERT_SENTINEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "smartcert/crypto.hpp"
#include "smartcert/errors.hpp"
#include "smartcert/ledger.hpp"

namespace smartcert::sentinel {

enum class ThreatCategory : std::uint8_t {
  ClientVulnerability = 0,
  ConsensusMechanismVulnerability = 1,
  MiningPoolVulnerability = 2,
  NetworkVulnerability = 3,
  SmartContractVulnerability = 4,
};

inline constexpr std::size_t kThreatCategoryCount = 5;

const char* threat_category_name(ThreatCategory category);
std::optional<ThreatCategory> threat_category_from_name(const std::string& name);

enum class Layer : std::uint8_t {
  Media = 0,
  Wallet = 1,
  Application = 2,
  SmartContract = 3,
};

const char* layer_name(Layer layer);
std::optional<Layer> layer_from_name(const std::string& name);

// Known weakness fingerprint. A pattern containing '*' is an anchored
// wildcard over the whole text; otherwise it is a case-insensitive substring.
struct VulnerabilitySignature {
  std::string id;
  ThreatCategory category = ThreatCategory::ClientVulnerability;
  Layer layer = Layer::Media;
  std::string pattern;
  std::uint32_t severity = 1;

  bool operator==(const VulnerabilitySignature&) const = default;
};

// Case-insensitive match of a signature pattern against free text.
bool pattern_matches(const std::string& pattern, const std::string& text);

// Loads a JSON-lines signature repository (one object per line with fields
// id, category, layer, pattern, severity). Blank lines are skipped; any
// malformed line fails the load and names its line number.
Result<std::vector<VulnerabilitySignature>> load_repository(const std::string& path);

struct MonitoredEvent {
  Layer source = Layer::Media;
  std::uint64_t timestamp = 0;
  std::string subject;
  std::string description;
  Metadata attributes;

  bool operator==(const MonitoredEvent&) const = default;
};

// Loads a JSON-lines event feed (fields source, timestamp, subject,
// description, attributes) with the same error conventions as
// load_repository.
Result<std::vector<MonitoredEvent>> load_events(const std::string& path);

struct SignatureMatch {
  MonitoredEvent event;
  VulnerabilitySignature signature;

  bool operator==(const SignatureMatch&) const = default;
};

// Wallet-rule hit: the wallet sent at least wallet_threshold transfers to
// never-before-seen counterparties inside the trailing window.
struct AnomalyFinding {
  AccountId wallet;
  std::uint64_t fired_at = 0;
  std::vector<ledger::WalletEvent> transfers;

  bool operator==(const AnomalyFinding&) const = default;
};

enum class Action : std::uint8_t {
  None = 0,
  Alert = 1,
  Freeze = 2,
  Halt = 3,
};

const char* action_name(Action action);

struct RiskReport {
  std::string id;
  std::uint64_t window_start = 0;
  std::uint64_t window_end = 0;
  std::vector<SignatureMatch> matched;
  std::vector<AnomalyFinding> findings;
  std::optional<ThreatCategory> predicted_category;
  double score = 0.0;
  Action recommended_action = Action::None;
};

// Probability that at least one matched weakness is real, treating
// severity/10 as an independent per-match probability.
double risk_score(const std::vector<std::uint32_t>& severities);

// Reserved certificate id used by alert-anchor transactions. Freezing it
// never succeeds, so the transaction lands on chain with a not-found
// receipt and leaves state untouched.
inline constexpr std::uint64_t kAlertAnchorId = 0xffffffffffffffffULL;

struct ExecutedAction {
  Action action = Action::None;
  std::uint64_t certificate_id = 0;
  AccountId wallet;
  Digest tx_digest;
  bool success = true;
  std::string note;
};

struct AlertRecord {
  std::uint64_t timestamp = 0;
  std::string report_id;
  Action action = Action::None;
  double score = 0.0;
  std::optional<ThreatCategory> predicted_category;
  std::string detail;
};

struct ComplianceFlag {
  std::uint64_t block_height = 0;
  std::uint32_t tx_index = 0;
  std::uint64_t block_timestamp = 0;
  std::string metadata_key;
  std::string rule;

  bool operator==(const ComplianceFlag&) const = default;
};

struct SentinelConfig {
  std::uint64_t wallet_window_seconds = 60;
  std::uint32_t wallet_threshold = 3;
  std::uint64_t window_length = 300;
  double alert_threshold = 0.5;
};

class Sentinel {
 public:
  Sentinel(SentinelConfig config, std::vector<VulnerabilitySignature> repository);

  void set_authority(const crypto::KeyPair& key);

  // Runs the event through every repository signature. Matches are kept for
  // correlation and also returned to the caller.
  std::vector<VulnerabilitySignature> ingest_event(const MonitoredEvent& event);

  // Feeds one on-chain transfer into the wallet monitor. Returns a finding
  // when the transfer completes a burst of first-time counterparties.
  std::optional<AnomalyFinding> ingest_wallet_event(const ledger::WalletEvent& event);

  // Ingests any wallet events the node appended since the last sync and
  // returns the findings they produced.
  std::vector<AnomalyFinding> sync_wallet_events(const ledger::Node& node);

  // Evaluates the burst rule for one wallet over the window ending at now.
  std::optional<AnomalyFinding> wallet_rule(const AccountId& wallet,
                                            std::uint64_t now) const;

  RiskReport correlate(std::uint64_t window_end) const;
  RiskReport correlate(std::uint64_t window_end, std::uint64_t window_length) const;

  // Executes the report's recommended action against the ledger. Every
  // action submits exactly one signed transaction carrying the report id;
  // the caller produces the next block.
  Result<std::vector<ExecutedAction>> enforce(const RiskReport& report,
                                              ledger::Node& node);

  const SentinelConfig& config() const { return config_; }
  const std::vector<VulnerabilitySignature>& repository() const { return repository_; }
  const std::vector<SignatureMatch>& matches() const { return matches_; }
  const std::vector<AnomalyFinding>& findings() const { return findings_; }
  const std::vector<AlertRecord>& alerts() const { return alerts_; }

 private:
  SentinelConfig config_;
  std::vector<VulnerabilitySignature> repository_;
  std::optional<crypto::KeyPair> authority_;
  std::vector<SignatureMatch> matches_;
  std::vector<AnomalyFinding> findings_;
  std::vector<AlertRecord> alerts_;
  std::map<AccountId, std::set<AccountId>> counterparties_;
  std::map<AccountId, std::vector<ledger::WalletEvent>> first_time_transfers_;
  std::size_t synced_wallet_events_ = 0;
};

// Locates the enforcement transactions carrying a report id, as
// (block height, tx index) pairs in chain order.
std::vector<std::pair<std::uint64_t, std::uint32_t>> find_report_transactions(
    const std::vector<ledger::Block>& chain, const std::string& report_id);

// Scans issue-transaction metadata for keys matching any disallowed-key
// rule. Rules use the signature pattern format.
std::vector<ComplianceFlag> compliance_check(
    const std::vector<ledger::Block>& chain,
    const std::vector<std::string>& disallowed_keys);

// Application-layer event describing a compliance flag, suitable for
// ingest_event so flags flow through correlation and enforcement.
MonitoredEvent compliance_event(const ComplianceFlag& flag);

}  // namespace smartcert::sentinel

#endif  // SMARTCERT_SENTINEL_HPP_
