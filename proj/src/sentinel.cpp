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

#include "smartcert/sentinel.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace smartcert::sentinel {

namespace {

std::string lower(const std::string& text) {
  std::string out = text;
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

bool glob_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0;
  std::size_t t = 0;
  std::size_t star = std::string::npos;
  std::size_t mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && pattern[p] != '*' && pattern[p] == text[t]) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

Error line_error(std::size_t line, const std::string& what) {
  return Error{ErrorCode::ParseError,
               "line " + std::to_string(line) + ": " + what};
}

bool parse_certificate_id(const std::string& text, std::uint64_t& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::string format_score(double score) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", score);
  return buffer;
}

std::string derive_report_id(const RiskReport& report) {
  Encoder enc;
  enc.put_u64(report.window_start);
  enc.put_u64(report.window_end);
  enc.put_u32(static_cast<std::uint32_t>(report.matched.size()));
  for (const auto& match : report.matched) {
    enc.put_string(match.signature.id);
    enc.put_u8(static_cast<std::uint8_t>(match.event.source));
    enc.put_u64(match.event.timestamp);
    enc.put_string(match.event.subject);
    enc.put_string(match.event.description);
  }
  enc.put_u32(static_cast<std::uint32_t>(report.findings.size()));
  for (const auto& finding : report.findings) {
    enc.put_fixed(finding.wallet);
    enc.put_u64(finding.fired_at);
    enc.put_u32(static_cast<std::uint32_t>(finding.transfers.size()));
  }
  return crypto::sha256(enc.bytes()).hex().substr(0, 16);
}

const registry::CertificateRecord* find_certificate(
    const registry::RegistryState& state, std::uint64_t id) {
  for (const auto& record : state.certificates) {
    if (record.id == id) return &record;
  }
  return nullptr;
}

}  // namespace

const char* threat_category_name(ThreatCategory category) {
  switch (category) {
    case ThreatCategory::ClientVulnerability:
      return "ClientVulnerability";
    case ThreatCategory::ConsensusMechanismVulnerability:
      return "ConsensusMechanismVulnerability";
    case ThreatCategory::MiningPoolVulnerability:
      return "MiningPoolVulnerability";
    case ThreatCategory::NetworkVulnerability:
      return "NetworkVulnerability";
    case ThreatCategory::SmartContractVulnerability:
      return "SmartContractVulnerability";
  }
  return "ClientVulnerability";
}

std::optional<ThreatCategory> threat_category_from_name(const std::string& name) {
  for (std::size_t i = 0; i < kThreatCategoryCount; ++i) {
    auto category = static_cast<ThreatCategory>(i);
    if (name == threat_category_name(category)) return category;
  }
  return std::nullopt;
}

const char* layer_name(Layer layer) {
  switch (layer) {
    case Layer::Media:
      return "Media";
    case Layer::Wallet:
      return "Wallet";
    case Layer::Application:
      return "Application";
    case Layer::SmartContract:
      return "SmartContract";
  }
  return "Media";
}

std::optional<Layer> layer_from_name(const std::string& name) {
  for (std::uint8_t i = 0; i < 4; ++i) {
    auto layer = static_cast<Layer>(i);
    if (name == layer_name(layer)) return layer;
  }
  return std::nullopt;
}

const char* action_name(Action action) {
  switch (action) {
    case Action::None:
      return "None";
    case Action::Alert:
      return "Alert";
    case Action::Freeze:
      return "Freeze";
    case Action::Halt:
      return "Halt";
  }
  return "None";
}

bool pattern_matches(const std::string& pattern, const std::string& text) {
  std::string p = lower(pattern);
  std::string t = lower(text);
  if (p.find('*') != std::string::npos) return glob_match(p, t);
  return t.find(p) != std::string::npos;
}

Result<std::vector<VulnerabilitySignature>> load_repository(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    return Error{ErrorCode::RepoNotFound,
                 "vulnerability repository not found: " + path};
  }
  std::vector<VulnerabilitySignature> repository;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (blank(line)) continue;
    auto parsed = nlohmann::json::parse(line, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      return line_error(line_no, "not a JSON object");
    }
    VulnerabilitySignature signature;
    if (!parsed.contains("id") || !parsed["id"].is_string() ||
        parsed["id"].get<std::string>().empty()) {
      return line_error(line_no, "missing or empty \"id\"");
    }
    signature.id = parsed["id"].get<std::string>();
    if (!parsed.contains("category") || !parsed["category"].is_string()) {
      return line_error(line_no, "missing \"category\"");
    }
    auto category = threat_category_from_name(parsed["category"].get<std::string>());
    if (!category) {
      return line_error(line_no, "unknown category \"" +
                                     parsed["category"].get<std::string>() + "\"");
    }
    signature.category = *category;
    if (!parsed.contains("layer") || !parsed["layer"].is_string()) {
      return line_error(line_no, "missing \"layer\"");
    }
    auto layer = layer_from_name(parsed["layer"].get<std::string>());
    if (!layer) {
      return line_error(line_no,
                        "unknown layer \"" + parsed["layer"].get<std::string>() + "\"");
    }
    signature.layer = *layer;
    if (!parsed.contains("pattern") || !parsed["pattern"].is_string() ||
        parsed["pattern"].get<std::string>().empty()) {
      return line_error(line_no, "missing or empty \"pattern\"");
    }
    signature.pattern = parsed["pattern"].get<std::string>();
    if (!parsed.contains("severity") || !parsed["severity"].is_number_integer()) {
      return line_error(line_no, "missing integer \"severity\"");
    }
    auto severity = parsed["severity"].get<std::int64_t>();
    if (severity < 1 || severity > 10) {
      return line_error(line_no, "severity out of range");
    }
    signature.severity = static_cast<std::uint32_t>(severity);
    repository.push_back(std::move(signature));
  }
  return repository;
}

Result<std::vector<MonitoredEvent>> load_events(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    return Error{ErrorCode::RepoNotFound, "event feed not found: " + path};
  }
  std::vector<MonitoredEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (blank(line)) continue;
    auto parsed = nlohmann::json::parse(line, nullptr, false);
    if (parsed.is_discarded() || !parsed.is_object()) {
      return line_error(line_no, "not a JSON object");
    }
    MonitoredEvent event;
    if (!parsed.contains("source") || !parsed["source"].is_string()) {
      return line_error(line_no, "missing \"source\"");
    }
    auto source = layer_from_name(parsed["source"].get<std::string>());
    if (!source) {
      return line_error(line_no,
                        "unknown source \"" + parsed["source"].get<std::string>() + "\"");
    }
    event.source = *source;
    if (!parsed.contains("timestamp") || !parsed["timestamp"].is_number_unsigned()) {
      return line_error(line_no, "missing unsigned \"timestamp\"");
    }
    event.timestamp = parsed["timestamp"].get<std::uint64_t>();
    if (parsed.contains("subject")) {
      if (!parsed["subject"].is_string()) return line_error(line_no, "\"subject\" must be a string");
      event.subject = parsed["subject"].get<std::string>();
    }
    if (!parsed.contains("description") || !parsed["description"].is_string()) {
      return line_error(line_no, "missing \"description\"");
    }
    event.description = parsed["description"].get<std::string>();
    if (parsed.contains("attributes")) {
      if (!parsed["attributes"].is_object()) {
        return line_error(line_no, "\"attributes\" must be an object");
      }
      for (const auto& [key, value] : parsed["attributes"].items()) {
        if (!value.is_string()) {
          return line_error(line_no, "attribute \"" + key + "\" must be a string");
        }
        event.attributes.emplace_back(key, value.get<std::string>());
      }
    }
    events.push_back(std::move(event));
  }
  return events;
}

double risk_score(const std::vector<std::uint32_t>& severities) {
  double complement = 1.0;
  for (auto severity : severities) {
    complement *= 1.0 - static_cast<double>(severity) / 10.0;
  }
  return std::clamp(1.0 - complement, 0.0, 1.0);
}

Sentinel::Sentinel(SentinelConfig config, std::vector<VulnerabilitySignature> repository)
    : config_(config), repository_(std::move(repository)) {}

void Sentinel::set_authority(const crypto::KeyPair& key) { authority_ = key; }

std::vector<VulnerabilitySignature> Sentinel::ingest_event(const MonitoredEvent& event) {
  std::vector<VulnerabilitySignature> matched;
  for (const auto& signature : repository_) {
    if (signature.layer != event.source) continue;
    if (!pattern_matches(signature.pattern, event.description)) continue;
    matched.push_back(signature);
    matches_.push_back(SignatureMatch{event, signature});
  }
  return matched;
}

std::optional<AnomalyFinding> Sentinel::ingest_wallet_event(
    const ledger::WalletEvent& event) {
  bool first_time = counterparties_[event.sender].insert(event.recipient).second;
  if (!first_time) return std::nullopt;
  first_time_transfers_[event.sender].push_back(event);
  auto finding = wallet_rule(event.sender, event.timestamp);
  if (finding) findings_.push_back(*finding);
  return finding;
}

std::vector<AnomalyFinding> Sentinel::sync_wallet_events(const ledger::Node& node) {
  std::vector<AnomalyFinding> fired;
  const auto& events = node.wallet_events();
  for (; synced_wallet_events_ < events.size(); ++synced_wallet_events_) {
    if (auto finding = ingest_wallet_event(events[synced_wallet_events_])) {
      fired.push_back(*finding);
    }
  }
  return fired;
}

std::optional<AnomalyFinding> Sentinel::wallet_rule(const AccountId& wallet,
                                                    std::uint64_t now) const {
  auto it = first_time_transfers_.find(wallet);
  if (it == first_time_transfers_.end()) return std::nullopt;
  AnomalyFinding finding;
  finding.wallet = wallet;
  finding.fired_at = now;
  for (const auto& transfer : it->second) {
    if (transfer.timestamp <= now &&
        transfer.timestamp + config_.wallet_window_seconds > now) {
      finding.transfers.push_back(transfer);
    }
  }
  if (finding.transfers.size() < config_.wallet_threshold) return std::nullopt;
  return finding;
}

RiskReport Sentinel::correlate(std::uint64_t window_end) const {
  return correlate(window_end, config_.window_length);
}

RiskReport Sentinel::correlate(std::uint64_t window_end,
                               std::uint64_t window_length) const {
  RiskReport report;
  report.window_end = window_end;
  report.window_start =
      window_end >= window_length ? window_end - window_length : 0;
  auto in_window = [&](std::uint64_t t) {
    return t <= window_end && t + window_length > window_end;
  };

  std::vector<std::uint32_t> severities;
  std::array<std::uint64_t, kThreatCategoryCount> summed{};
  bool smart_contract_halt = false;
  for (const auto& match : matches_) {
    if (!in_window(match.event.timestamp)) continue;
    report.matched.push_back(match);
    severities.push_back(match.signature.severity);
    summed[static_cast<std::size_t>(match.signature.category)] +=
        match.signature.severity;
    if (match.signature.layer == Layer::SmartContract &&
        match.signature.severity >= 8) {
      smart_contract_halt = true;
    }
  }
  for (const auto& finding : findings_) {
    if (in_window(finding.fired_at)) report.findings.push_back(finding);
  }

  report.score = risk_score(severities);
  if (!report.matched.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kThreatCategoryCount; ++i) {
      if (summed[i] > summed[best]) best = i;
    }
    report.predicted_category = static_cast<ThreatCategory>(best);
  }

  if (smart_contract_halt) {
    report.recommended_action = Action::Halt;
  } else if (!report.findings.empty()) {
    report.recommended_action = Action::Freeze;
  } else if (report.score >= config_.alert_threshold) {
    report.recommended_action = Action::Alert;
  } else {
    report.recommended_action = Action::None;
  }
  report.id = derive_report_id(report);
  return report;
}

Result<std::vector<ExecutedAction>> Sentinel::enforce(const RiskReport& report,
                                                      ledger::Node& node) {
  std::vector<ExecutedAction> executed;
  if (report.recommended_action == Action::None) return executed;
  if (!authority_) {
    return Error{ErrorCode::EnforcementFailed,
                 "NotAuthority: no authority key configured"};
  }
  AccountId account = crypto::account_from_public_key(authority_->public_key);
  if (account != node.registry().authority) {
    return Error{ErrorCode::EnforcementFailed,
                 "NotAuthority: sentinel key does not match the registry authority"};
  }

  const std::string tag = "sentinel report " + report.id;
  auto submit_freeze = [&](std::uint64_t certificate_id, const std::string& reason,
                           Action action, const AccountId& wallet) {
    ledger::FreezePayload payload{certificate_id, reason};
    auto tx = ledger::make_transaction(*authority_, node.next_nonce(account),
                                       ledger::TxKind::FreezeCertificate,
                                       payload.encode());
    ExecutedAction act;
    act.action = action;
    act.certificate_id = certificate_id;
    act.wallet = wallet;
    act.tx_digest = tx.digest();
    act.note = reason;
    auto accepted = node.submit_transaction(tx);
    if (!accepted.ok()) {
      act.success = false;
      act.note = "EnforcementFailed: " + accepted.message();
    }
    executed.push_back(std::move(act));
  };

  submit_freeze(kAlertAnchorId,
                tag + ": " + action_name(report.recommended_action) + " score " +
                    format_score(report.score),
                Action::Alert, AccountId{});

  if (report.recommended_action == Action::Freeze) {
    std::vector<AccountId> wallets;
    for (const auto& finding : report.findings) {
      if (std::find(wallets.begin(), wallets.end(), finding.wallet) == wallets.end()) {
        wallets.push_back(finding.wallet);
      }
    }
    for (const auto& wallet : wallets) {
      for (const auto& record : node.registry().certificates) {
        if (record.owner != wallet ||
            record.status != registry::CertificateStatus::Active) {
          continue;
        }
        submit_freeze(record.id,
                      tag + ": freeze certificate " + std::to_string(record.id),
                      Action::Freeze, wallet);
      }
    }
  } else if (report.recommended_action == Action::Halt) {
    std::vector<std::uint64_t> targets;
    for (const auto& match : report.matched) {
      if (match.signature.layer != Layer::SmartContract ||
          match.signature.severity < 8) {
        continue;
      }
      std::uint64_t certificate_id = 0;
      if (!parse_certificate_id(match.event.subject, certificate_id)) continue;
      if (std::find(targets.begin(), targets.end(), certificate_id) ==
          targets.end()) {
        targets.push_back(certificate_id);
      }
    }
    for (auto certificate_id : targets) {
      const auto* record = find_certificate(node.registry(), certificate_id);
      if (record == nullptr ||
          record->status != registry::CertificateStatus::Active) {
        continue;
      }
      submit_freeze(certificate_id,
                    tag + ": halt certificate " + std::to_string(certificate_id),
                    Action::Halt, record->owner);
    }
  }

  AlertRecord alert;
  alert.timestamp = report.window_end;
  alert.report_id = report.id;
  alert.action = report.recommended_action;
  alert.score = report.score;
  alert.predicted_category = report.predicted_category;
  switch (report.recommended_action) {
    case Action::Halt:
      alert.detail = "developers: smart contract activity halted";
      break;
    case Action::Freeze:
      alert.detail = "wallet transfers frozen";
      break;
    default:
      alert.detail = "risk threshold exceeded";
      break;
  }
  alerts_.push_back(std::move(alert));
  return executed;
}

std::vector<std::pair<std::uint64_t, std::uint32_t>> find_report_transactions(
    const std::vector<ledger::Block>& chain, const std::string& report_id) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> located;
  const std::string tag = "sentinel report " + report_id;
  for (const auto& block : chain) {
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
      const auto& tx = block.transactions[i];
      if (tx.kind != ledger::TxKind::FreezeCertificate) continue;
      auto payload = ledger::FreezePayload::decode(tx.payload);
      if (!payload) continue;
      if (payload->reason.find(tag) == std::string::npos) continue;
      located.emplace_back(block.height, static_cast<std::uint32_t>(i));
    }
  }
  return located;
}

std::vector<ComplianceFlag> compliance_check(
    const std::vector<ledger::Block>& chain,
    const std::vector<std::string>& disallowed_keys) {
  std::vector<ComplianceFlag> flags;
  for (const auto& block : chain) {
    for (std::size_t i = 0; i < block.transactions.size(); ++i) {
      const auto& tx = block.transactions[i];
      if (tx.kind != ledger::TxKind::IssueCertificate) continue;
      auto payload = ledger::IssuePayload::decode(tx.payload);
      if (!payload) continue;
      for (const auto& [key, value] : payload->metadata) {
        for (const auto& rule : disallowed_keys) {
          if (!pattern_matches(rule, key)) continue;
          flags.push_back(ComplianceFlag{block.height,
                                         static_cast<std::uint32_t>(i),
                                         block.timestamp, key, rule});
          break;
        }
      }
    }
  }
  return flags;
}

MonitoredEvent compliance_event(const ComplianceFlag& flag) {
  MonitoredEvent event;
  event.source = Layer::Application;
  event.timestamp = flag.block_timestamp;
  event.subject =
      std::to_string(flag.block_height) + ":" + std::to_string(flag.tx_index);
  event.description = "non-compliant transaction metadata key " +
                      flag.metadata_key + " at block " +
                      std::to_string(flag.block_height) + " tx " +
                      std::to_string(flag.tx_index);
  event.attributes = {{"metadata_key", flag.metadata_key}, {"rule", flag.rule}};
  return event;
}

}  // namespace smartcert::sentinel
