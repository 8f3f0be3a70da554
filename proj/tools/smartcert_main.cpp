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

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "httplib.h"
#include "smartcert/api.hpp"
#include "smartcert/wire.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

using smartcert::AccountId;
using smartcert::Bytes;
using smartcert::Digest;
using smartcert::Error;
using smartcert::ErrorCode;
using smartcert::Metadata;
using smartcert::Result;
using Json = smartcert::wire::Json;

int fail(const Error& error) {
  std::cerr << "error: " << smartcert::error_code_name(error.code) << ": "
            << error.message << "\n";
  return kDomainError;
}

struct HttpReply {
  int status = 0;
  Json body;
};

Result<HttpReply> request_json(const std::string& server, const std::string& method,
                               const std::string& path, const Json* payload) {
  httplib::Client client(server);
  client.set_connection_timeout(5, 0);
  client.set_read_timeout(30, 0);
  httplib::Result res;
  if (method == "GET") {
    res = client.Get(path);
  } else {
    res = client.Post(path, payload ? payload->dump() : std::string(),
                      "application/json");
  }
  if (!res) {
    return Error{ErrorCode::IoError, "cannot reach server " + server};
  }
  auto body = Json::parse(res->body, nullptr, false);
  if (body.is_discarded()) {
    return Error{ErrorCode::ParseError, "server returned a non-JSON body"};
  }
  return HttpReply{res->status, std::move(body)};
}

Result<HttpReply> get_json(const std::string& server, const std::string& path) {
  return request_json(server, "GET", path, nullptr);
}

Result<HttpReply> post_json(const std::string& server, const std::string& path,
                            const Json& payload) {
  return request_json(server, "POST", path, &payload);
}

// Server error bodies carry {"error":{"code","message"}}.
int fail_reply(const HttpReply& reply) {
  if (reply.body.is_object() && reply.body.contains("error")) {
    const auto& error = reply.body["error"];
    std::cerr << "error: " << error.value("code", std::string("UNKNOWN")) << ": "
              << error.value("message", std::string()) << "\n";
  } else {
    std::cerr << "error: server returned status " << reply.status << "\n";
  }
  return kDomainError;
}

Result<smartcert::crypto::KeyPair> load_key(const std::string& path) {
  if (path.empty()) {
    return Error{ErrorCode::BadRequest, "--key <path> is required"};
  }
  return smartcert::config::load_key_file(path);
}

Result<std::uint64_t> fetch_next_nonce(const std::string& server,
                                       const AccountId& account) {
  auto reply = get_json(server, "/accounts/" + account.hex());
  if (!reply.ok()) return reply.error();
  if (reply.value().status != 200 || !reply.value().body.contains("next_nonce")) {
    return Error{ErrorCode::IoError, "account query failed"};
  }
  return reply.value().body["next_nonce"].get<std::uint64_t>();
}

Result<Metadata> parse_metadata(const std::vector<std::string>& pairs) {
  Metadata metadata;
  for (const auto& raw : pairs) {
    auto eq = raw.find('=');
    if (eq == std::string::npos || eq == 0) {
      return Error{ErrorCode::BadRequest, "--meta expects key=value, got \"" + raw + "\""};
    }
    metadata.emplace_back(raw.substr(0, eq), raw.substr(eq + 1));
  }
  return metadata;
}

// The SMARTCERT_CONFIG environment variable wins over --config.
std::string resolve_config_path(const std::string& flag_value) {
  const char* env = std::getenv("SMARTCERT_CONFIG");
  if (env != nullptr && *env != '\0') return env;
  return flag_value;
}

Result<smartcert::config::ServiceConfig> load_config(const std::string& flag_value,
                                                     const std::string& data_dir,
                                                     const std::string& listen) {
  auto path = resolve_config_path(flag_value);
  if (path.empty()) {
    return Error{ErrorCode::BadRequest,
                 "a config file is required (--config or SMARTCERT_CONFIG)"};
  }
  auto config = smartcert::config::load_service_config(path);
  if (!config.ok()) return config;
  if (!data_dir.empty()) config.value().data_dir = data_dir;
  if (!listen.empty()) config.value().listen = listen;
  return config;
}

std::shared_ptr<smartcert::registry::ModelClient> model_for(
    const smartcert::config::ServiceConfig& config) {
  if (!config.model_keyword.empty()) {
    return std::make_shared<smartcert::registry::KeywordModelClient>(
        config.model_keyword);
  }
  return std::make_shared<smartcert::api::HttpModelClient>();
}

int submit_transaction(const std::string& server, const std::string& key_path,
                       const std::string& path, smartcert::ledger::TxKind kind,
                       Bytes payload) {
  auto key = load_key(key_path);
  if (!key.ok()) return fail(key.error());
  auto account = smartcert::crypto::account_from_public_key(key.value().public_key);
  auto nonce = fetch_next_nonce(server, account);
  if (!nonce.ok()) return fail(nonce.error());
  auto tx = smartcert::ledger::make_transaction(key.value(), nonce.value(), kind,
                                                std::move(payload));
  auto reply = post_json(server, path, smartcert::wire::to_json(tx));
  if (!reply.ok()) return fail(reply.error());
  if (reply.value().status >= 400) return fail_reply(reply.value());
  std::cout << reply.value().body.dump(2) << "\n";
  return kOk;
}

int run_keygen(const std::string& seed_hex, const std::string& out_path) {
  smartcert::crypto::KeyPair key;
  if (!seed_hex.empty()) {
    auto seed = smartcert::from_hex(seed_hex);
    if (!seed) return fail(Error{ErrorCode::InvalidSeed, "seed must be hex"});
    auto derived = smartcert::crypto::keygen_from_seed(*seed);
    if (!derived.ok()) return fail(derived.error());
    key = derived.value();
  } else {
    key = smartcert::crypto::keygen();
  }
  if (!out_path.empty()) {
    auto saved = smartcert::config::save_key_file(out_path, key);
    if (!saved.ok()) return fail(saved.error());
  }
  std::cout << "public_key: " << key.public_key.hex() << "\n";
  std::cout << "account: "
            << smartcert::crypto::account_from_public_key(key.public_key).hex()
            << "\n";
  if (!out_path.empty()) std::cout << "key file: " << out_path << "\n";
  return kOk;
}

Result<Digest> resolve_document_hash(const std::string& document_path,
                                     const std::string& document_hash_hex) {
  if (!document_path.empty()) {
    std::ifstream in(document_path, std::ios::binary);
    if (!in) {
      return Error{ErrorCode::IoError, "cannot open document: " + document_path};
    }
    Bytes bytes((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
    return smartcert::crypto::sha256(bytes);
  }
  auto digest = Digest::from_hex(document_hash_hex);
  if (!digest) {
    return Error{ErrorCode::BadRequest, "--document-hash must be 32-byte hex"};
  }
  return *digest;
}

int run_issue(const std::string& server, const std::string& key_path,
              std::uint64_t deposit, std::uint64_t maturity,
              const std::vector<std::string>& meta_pairs,
              const std::string& document_path, const std::string& document_hash) {
  auto key = load_key(key_path);
  if (!key.ok()) return fail(key.error());
  auto metadata = parse_metadata(meta_pairs);
  if (!metadata.ok()) return fail(metadata.error());
  auto digest = resolve_document_hash(document_path, document_hash);
  if (!digest.ok()) return fail(digest.error());

  smartcert::ledger::IssuePayload payload;
  payload.deposit_amount = deposit;
  payload.maturity_date = maturity;
  payload.metadata = metadata.value();
  payload.document_hash = digest.value();
  payload.issuer_signature = smartcert::crypto::sign(key.value(), digest.value());
  return submit_transaction(server, key_path, "/certificates",
                            smartcert::ledger::TxKind::IssueCertificate,
                            payload.encode());
}

struct TransparencyCheck {
  bool pass = false;
  std::string detail;
};

// Client-side SCT + inclusion audit against the serving log.
TransparencyCheck audit_certificate(const std::string& server, const Json& cert_body) {
  if (cert_body["sct"].is_null() || cert_body["log_entry"].is_null()) {
    return {false, "certificate is not logged"};
  }
  auto sct = smartcert::wire::sct_from_json(cert_body["sct"]);
  if (!sct.ok()) return {false, sct.error().message};
  auto entry = smartcert::wire::log_entry_from_json(cert_body["log_entry"]);
  if (!entry.ok()) return {false, entry.error().message};

  auto status = get_json(server, "/status");
  if (!status.ok() || status.value().status != 200) {
    return {false, "cannot fetch node status"};
  }
  auto log_key = smartcert::PublicKey::from_hex(
      status.value().body.value("public_key", std::string()));
  if (!log_key) return {false, "node status lacks a public key"};

  if (!smartcert::ctlog::verify_sct_signature(*log_key, sct.value())) {
    return {false, "SCT signature is invalid"};
  }
  auto leaf = smartcert::merkle::leaf_hash(entry.value().leaf_bytes());
  if (leaf != sct.value().leaf_hash) {
    return {false, "SCT leaf hash does not match the log entry"};
  }

  auto sth_reply = get_json(server, "/ct/sth");
  if (!sth_reply.ok() || sth_reply.value().status != 200) {
    return {false, "cannot fetch signed tree head"};
  }
  auto sth = smartcert::wire::sth_from_json(sth_reply.value().body);
  if (!sth.ok()) return {false, sth.error().message};
  if (!smartcert::ctlog::verify_sth_signature(*log_key, sth.value())) {
    return {false, "STH signature is invalid"};
  }

  auto proof_reply = get_json(server, "/ct/proof?leaf=" + leaf.hex() + "&size=" +
                                          std::to_string(sth.value().tree_size));
  if (!proof_reply.ok() || proof_reply.value().status != 200) {
    return {false, "log has no inclusion proof for the leaf"};
  }
  auto proof = smartcert::wire::inclusion_proof_from_json(proof_reply.value().body);
  if (!proof.ok()) return {false, proof.error().message};
  if (!smartcert::merkle::verify_inclusion_hash(sth.value().root, leaf,
                                                proof.value())) {
    return {false, "inclusion proof does not reach the signed root"};
  }
  return {true, ""};
}

int run_verify(const std::string& server, std::uint64_t id,
               std::optional<std::uint64_t> at) {
  auto cert = get_json(server, "/certificates/" + std::to_string(id));
  if (!cert.ok()) return fail(cert.error());
  if (cert.value().status != 200) return fail_reply(cert.value());

  std::string verify_path = "/certificates/" + std::to_string(id) + "/verify";
  if (at) verify_path += "?at=" + std::to_string(*at);
  auto registry_reply = get_json(server, verify_path);
  if (!registry_reply.ok()) return fail(registry_reply.error());
  bool registry_pass = registry_reply.value().status == 200 &&
                       registry_reply.value().body.value("valid", false);

  auto transparency = audit_certificate(server, cert.value().body);

  bool overall = registry_pass && transparency.pass;
  std::cout << "registry: " << (registry_pass ? "PASS" : "FAIL") << "\n";
  std::cout << "transparency: " << (transparency.pass ? "PASS" : "FAIL");
  if (!transparency.pass && !transparency.detail.empty()) {
    std::cout << " (" << transparency.detail << ")";
  }
  std::cout << "\n";
  std::cout << "overall: " << (overall ? "PASS" : "FAIL") << "\n";
  return overall ? kOk : kDomainError;
}

int run_ct_prove(const std::string& server, const std::string& leaf_hex,
                 std::optional<std::uint64_t> id, std::optional<std::uint64_t> size) {
  std::string leaf = leaf_hex;
  if (leaf.empty()) {
    if (!id) return fail(Error{ErrorCode::BadRequest, "need --leaf or --id"});
    auto cert = get_json(server, "/certificates/" + std::to_string(*id));
    if (!cert.ok()) return fail(cert.error());
    if (cert.value().status != 200) return fail_reply(cert.value());
    if (cert.value().body["sct"].is_null()) {
      return fail(Error{ErrorCode::NotFound, "certificate is not logged"});
    }
    leaf = cert.value().body["sct"].value("leaf_hash", std::string());
  }
  std::string path = "/ct/proof?leaf=" + leaf;
  if (size) path += "&size=" + std::to_string(*size);
  auto reply = get_json(server, path);
  if (!reply.ok()) return fail(reply.error());
  if (reply.value().status != 200) return fail_reply(reply.value());
  std::cout << reply.value().body.dump(2) << "\n";
  return kOk;
}

int run_ct_audit(const std::string& server, std::uint64_t id) {
  auto cert = get_json(server, "/certificates/" + std::to_string(id));
  if (!cert.ok()) return fail(cert.error());
  if (cert.value().status != 200) return fail_reply(cert.value());
  auto check = audit_certificate(server, cert.value().body);
  std::cout << "sct audit: " << (check.pass ? "PASS" : "FAIL");
  if (!check.pass && !check.detail.empty()) std::cout << " (" << check.detail << ")";
  std::cout << "\n";
  return check.pass ? kOk : kDomainError;
}

int run_sentinel_report(const std::string& repository_path,
                        const std::string& events_path,
                        std::optional<std::uint64_t> end,
                        std::optional<std::uint64_t> length) {
  auto repository = smartcert::sentinel::load_repository(repository_path);
  if (!repository.ok()) return fail(repository.error());
  auto events = smartcert::sentinel::load_events(events_path);
  if (!events.ok()) return fail(events.error());

  smartcert::sentinel::SentinelConfig config;
  if (length) config.window_length = *length;
  smartcert::sentinel::Sentinel sentinel(config, repository.value());
  std::uint64_t window_end = end.value_or(0);
  for (const auto& event : events.value()) {
    sentinel.ingest_event(event);
    if (!end && event.timestamp > window_end) window_end = event.timestamp;
  }
  auto report = sentinel.correlate(window_end);
  std::cout << smartcert::wire::to_json(report).dump(2) << "\n";
  return kOk;
}

int run_replay(const std::string& config_flag, const std::string& data_dir) {
  auto config = load_config(config_flag, data_dir, "");
  if (!config.ok()) return fail(config.error());
  auto chain_path =
      (std::filesystem::path(config.value().data_dir) / "chain.bin").string();
  if (!std::filesystem::exists(chain_path)) {
    return fail(Error{ErrorCode::IoError, "no chain file at " + chain_path});
  }
  auto node = smartcert::ledger::Node::open(
      smartcert::config::genesis_config(config.value()), model_for(config.value()),
      chain_path);
  if (!node.ok()) return fail(node.error());
  std::cout << "height: " << node.value().tip().height << "\n";
  std::cout << "state digest: " << node.value().current_state_digest().hex() << "\n";
  return kOk;
}

int run_serve(const std::string& config_flag, const std::string& data_dir,
              const std::string& listen, const std::string& key_flag) {
  auto config = load_config(config_flag, data_dir, listen);
  if (!config.ok()) return fail(config.error());
  std::string key_path = !key_flag.empty() ? key_flag : config.value().key_path;
  if (key_path.empty()) {
    return fail(Error{ErrorCode::BadRequest,
                      "a node key is required (--key or key= in the config)"});
  }
  auto key = smartcert::config::load_key_file(key_path);
  if (!key.ok()) return fail(key.error());

  auto service = smartcert::api::Service::open(config.value(), key.value());
  if (!service.ok()) return fail(service.error());
  std::cout << "listening on " << config.value().listen << std::endl;
  auto served = service.value()->serve_blocking();
  if (!served.ok()) return fail(served.error());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smart certificate toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_flag;
  std::string data_dir;
  std::string listen;
  std::string key_path;
  std::string server = "http://127.0.0.1:8545";
  app.add_option("--config", config_flag, "service config file");
  app.add_option("--data-dir", data_dir, "override the config data_dir");
  app.add_option("--listen", listen, "override the config listen address");
  app.add_option("--key", key_path, "signing key file");
  app.add_option("--server", server, "server base URL for client commands");

  auto* keygen = app.add_subcommand("keygen", "generate an Ed25519 signing key");
  std::string seed_hex;
  std::string out_path;
  keygen->add_option("--seed", seed_hex, "32-byte hex seed for deterministic keys");
  keygen->add_option("--out", out_path, "write the key file here");

  auto* issue = app.add_subcommand("issue", "issue a certificate");
  std::uint64_t deposit = 0;
  std::uint64_t maturity = 0;
  std::vector<std::string> meta_pairs;
  std::string document_path;
  std::string document_hash;
  issue->add_option("--deposit", deposit, "deposit amount")->required();
  issue->add_option("--maturity", maturity, "maturity date (unix seconds)")->required();
  issue->add_option("--meta", meta_pairs, "metadata key=value (repeatable)");
  issue->add_option("--document", document_path, "document file to hash");
  issue->add_option("--document-hash", document_hash, "precomputed 32-byte hex hash");

  auto* verify = app.add_subcommand("verify", "full client-side certificate check");
  std::uint64_t verify_id = 0;
  std::optional<std::uint64_t> verify_at;
  verify->add_option("--id", verify_id, "certificate id")->required();
  verify->add_option("--at", verify_at, "verification timestamp");

  auto* revoke = app.add_subcommand("revoke", "revoke a certificate");
  std::uint64_t revoke_id = 0;
  revoke->add_option("--id", revoke_id, "certificate id")->required();

  auto* anomaly = app.add_subcommand("anomaly", "report an anomaly on a certificate");
  std::uint64_t anomaly_id = 0;
  std::string description;
  anomaly->add_option("--id", anomaly_id, "certificate id")->required();
  anomaly->add_option("--description", description, "anomaly description")->required();

  auto* transfer = app.add_subcommand("transfer", "transfer wallet funds");
  std::string recipient_hex;
  std::uint64_t amount = 0;
  transfer->add_option("--to", recipient_hex, "recipient account (20-byte hex)")
      ->required();
  transfer->add_option("--amount", amount, "amount to transfer")->required();

  auto* ct_prove = app.add_subcommand("ct-prove", "fetch a Merkle inclusion proof");
  std::string leaf_hex;
  std::optional<std::uint64_t> prove_id;
  std::optional<std::uint64_t> prove_size;
  ct_prove->add_option("--leaf", leaf_hex, "leaf hash (32-byte hex)");
  ct_prove->add_option("--id", prove_id, "certificate id to prove");
  ct_prove->add_option("--size", prove_size, "tree size to prove against");

  auto* ct_audit = app.add_subcommand("ct-audit", "audit a certificate's SCT");
  std::uint64_t audit_id = 0;
  ct_audit->add_option("--id", audit_id, "certificate id")->required();

  auto* sentinel_report =
      app.add_subcommand("sentinel-report", "correlate an event feed offline");
  std::string repository_path;
  std::string events_path;
  std::optional<std::uint64_t> report_end;
  std::optional<std::uint64_t> report_length;
  sentinel_report->add_option("--repository", repository_path,
                              "vulnerability signature file (JSON lines)")
      ->required();
  sentinel_report->add_option("--events", events_path, "event feed file (JSON lines)")
      ->required();
  sentinel_report->add_option("--end", report_end, "window end (default: last event)");
  sentinel_report->add_option("--length", report_length, "window length in seconds");

  auto* replay = app.add_subcommand("replay", "rebuild state from the chain file");
  auto* serve = app.add_subcommand("serve", "run the HTTP service");

  (void)replay;
  (void)serve;

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  if (keygen->parsed()) return run_keygen(seed_hex, out_path);
  if (issue->parsed()) {
    return run_issue(server, key_path, deposit, maturity, meta_pairs, document_path,
                     document_hash);
  }
  if (verify->parsed()) return run_verify(server, verify_id, verify_at);
  if (revoke->parsed()) {
    smartcert::ledger::RevokePayload payload{revoke_id};
    return submit_transaction(server, key_path,
                              "/certificates/" + std::to_string(revoke_id) + "/revoke",
                              smartcert::ledger::TxKind::RevokeCertificate,
                              payload.encode());
  }
  if (anomaly->parsed()) {
    smartcert::ledger::AnomalyPayload payload{anomaly_id, description};
    return submit_transaction(
        server, key_path, "/certificates/" + std::to_string(anomaly_id) + "/anomaly",
        smartcert::ledger::TxKind::DetectAnomaly, payload.encode());
  }
  if (transfer->parsed()) {
    auto recipient = AccountId::from_hex(recipient_hex);
    if (!recipient) {
      return fail(Error{ErrorCode::BadRequest, "--to must be 20-byte hex"});
    }
    smartcert::ledger::TransferPayload payload{*recipient, amount};
    return submit_transaction(server, key_path, "/wallet/transfer",
                              smartcert::ledger::TxKind::WalletTransfer,
                              payload.encode());
  }
  if (ct_prove->parsed()) return run_ct_prove(server, leaf_hex, prove_id, prove_size);
  if (ct_audit->parsed()) return run_ct_audit(server, audit_id);
  if (sentinel_report->parsed()) {
    return run_sentinel_report(repository_path, events_path, report_end, report_length);
  }
  if (replay->parsed()) return run_replay(config_flag, data_dir);
  if (serve->parsed()) return run_serve(config_flag, data_dir, listen, key_path);
  return kUsageError;
}
