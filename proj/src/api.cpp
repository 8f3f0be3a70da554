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

#include "smartcert/api.hpp"

#include <charconv>
#include <ctime>
#include <filesystem>
#include <mutex>
#include <set>
#include <thread>

#include "httplib.h"
#include "smartcert/wire.hpp"

namespace smartcert::api {

namespace {

using wire::Json;

std::optional<std::uint64_t> parse_u64(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::uint64_t out = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return out;
}

std::pair<std::string, int> split_listen(const std::string& listen) {
  auto colon = listen.rfind(':');
  if (colon == std::string::npos) return {listen, 0};
  auto port = parse_u64(listen.substr(colon + 1));
  return {listen.substr(0, colon), port ? static_cast<int>(*port) : 0};
}

std::optional<ctlog::LogEntry> find_log_entry(const ctlog::CtLog& log,
                                              const Digest& certificate_hash) {
  auto entries = log.entries(0, log.size());
  if (!entries.ok()) return std::nullopt;
  for (const auto& entry : entries.value()) {
    if (entry.certificate_hash == certificate_hash) return entry;
  }
  return std::nullopt;
}

}  // namespace

Result<registry::ModelResponse> HttpModelClient::detect_anomaly(
    const std::string& endpoint, const std::string& request_body) {
  httplib::Client client(endpoint);
  client.set_connection_timeout(2, 0);
  client.set_read_timeout(5, 0);
  auto response = client.Post("/detect_anomaly", request_body, "text/plain");
  if (!response) {
    return Error{ErrorCode::ModelError, "model endpoint unreachable: " + endpoint};
  }
  return registry::ModelResponse{response->status, response->body};
}

struct Service::Impl {
  config::ServiceConfig config;
  crypto::KeyPair key;
  AccountId account;
  Clock clock;
  std::unique_ptr<ledger::Node> node;
  std::unique_ptr<ctlog::CtLog> log;
  std::unique_ptr<sentinel::Sentinel> watch;
  std::set<std::string> enforced_reports;
  std::mutex mutex;
  httplib::Server server;
  std::thread thread;

  std::uint64_t now() const {
    std::uint64_t t = clock ? clock() : static_cast<std::uint64_t>(std::time(nullptr));
    return std::max(t, node->tip().timestamp);
  }

  void send(httplib::Response& res, int status, const Json& body) {
    std::string text = body.dump();
    auto signature = crypto::sign(key, crypto::sha256(to_bytes(text)));
    res.set_header("X-Node-Signature", signature.hex());
    res.status = status;
    res.set_content(text, "application/json");
  }

  void fail(httplib::Response& res, const Error& error) {
    auto mapped = wire::api_error(error);
    Json body;
    body["error"] = Json{{"code", mapped.code}, {"message", mapped.message}};
    send(res, mapped.http_status, body);
  }

  // Submits one signed transaction and produces the block that carries it.
  Result<std::pair<ledger::Block, ledger::TxReceipt>> apply_transaction(
      const ledger::LedgerTransaction& tx) {
    auto submitted = node->submit_transaction(tx);
    if (!submitted.ok()) return submitted.error();
    auto block = node->produce_block(now());
    if (!block.ok()) return block.error();
    for (std::size_t i = 0; i < block.value().transactions.size(); ++i) {
      if (block.value().transactions[i].digest() == tx.digest()) {
        return std::make_pair(block.value(), block.value().receipts[i]);
      }
    }
    return Error{ErrorCode::StateDivergence, "produced block lost the transaction"};
  }

  // Wallet sync + correlation; enforces each report id at most once.
  void run_sentinel_cycle(Json* out_report, Json* out_executed) {
    watch->sync_wallet_events(*node);
    auto report = watch->correlate(now());
    if (out_report != nullptr) *out_report = wire::to_json(report);
    if (report.recommended_action == sentinel::Action::None) return;
    if (enforced_reports.count(report.id) > 0) return;
    auto executed = watch->enforce(report, *node);
    if (!executed.ok()) return;
    enforced_reports.insert(report.id);
    if (out_executed != nullptr) {
      *out_executed = Json::array();
      for (const auto& action : executed.value()) {
        out_executed->push_back(wire::to_json(action));
      }
    }
    if (node->mempool_size() > 0) node->produce_block(now());
  }

  void rebuild_enforced_reports() {
    static const std::string tag = "sentinel report ";
    for (const auto& block : node->chain()) {
      for (const auto& tx : block.transactions) {
        if (tx.kind != ledger::TxKind::FreezeCertificate) continue;
        auto payload = ledger::FreezePayload::decode(tx.payload);
        if (!payload) continue;
        auto at = payload->reason.find(tag);
        if (at == std::string::npos) continue;
        auto id = payload->reason.substr(at + tag.size(), 16);
        if (id.size() == 16) enforced_reports.insert(id);
      }
    }
  }

  Result<ledger::LedgerTransaction> parse_body_transaction(
      const std::string& body, ledger::TxKind expected) {
    auto json = Json::parse(body, nullptr, false);
    if (json.is_discarded()) {
      return Error{ErrorCode::ParseError, "request body is not valid JSON"};
    }
    auto tx = wire::transaction_from_json(json);
    if (!tx.ok()) return tx;
    if (tx.value().kind != expected) {
      return Error{ErrorCode::BadRequest,
                   std::string("transaction kind must be ") +
                       ledger::tx_kind_name(expected)};
    }
    return tx;
  }

  void route() {
    server.Post("/certificates", [this](const httplib::Request& req,
                                        httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      auto tx = parse_body_transaction(req.body, ledger::TxKind::IssueCertificate);
      if (!tx.ok()) return fail(res, tx.error());
      auto applied = apply_transaction(tx.value());
      if (!applied.ok()) return fail(res, applied.error());
      const auto& [block, receipt] = applied.value();
      if (!receipt.success) return fail(res, Error{receipt.code, receipt.message});
      auto id = parse_u64(receipt.message);
      if (!id || *id >= node->registry().certificates.size()) {
        return fail(res, Error{ErrorCode::StateDivergence, "issue receipt is invalid"});
      }
      const auto& record = node->registry().certificates[*id];
      auto entry = ctlog::entry_for_certificate(record, block.timestamp);
      auto sct = log->submit_entry(entry);
      if (!sct.ok()) return fail(res, sct.error());
      run_sentinel_cycle(nullptr, nullptr);
      Json body;
      body["certificate_id"] = *id;
      body["block_height"] = block.height;
      body["sct"] = wire::to_json(sct.value());
      send(res, 201, body);
    });

    server.Get(R"(/certificates/(\d+))", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      auto id = parse_u64(req.matches[1]);
      if (!id || *id >= node->registry().certificates.size()) {
        return fail(res, Error{ErrorCode::NotFound, "Certificate does not exist."});
      }
      const auto& record = node->registry().certificates[*id];
      Json body;
      body["certificate"] = wire::to_json(record);
      auto sct = log->sct_for(record.document_hash);
      body["sct"] = sct ? wire::to_json(*sct) : Json(nullptr);
      auto entry = find_log_entry(*log, record.document_hash);
      body["log_entry"] = entry ? wire::to_json(*entry) : Json(nullptr);
      send(res, 200, body);
    });

    server.Get(R"(/certificates/(\d+)/verify)", [this](const httplib::Request& req,
                                                       httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      auto id = parse_u64(req.matches[1]);
      std::uint64_t at = now();
      if (req.has_param("at")) {
        auto parsed = parse_u64(req.get_param_value("at"));
        if (!parsed) {
          return fail(res, Error{ErrorCode::BadRequest,
                                 "query parameter \"at\" must be an unsigned integer"});
        }
        at = *parsed;
      }
      if (!id) return fail(res, Error{ErrorCode::NotFound, "Certificate does not exist."});
      auto valid = registry::verify_certificate(node->registry(), *id, at);
      if (!valid.ok()) return fail(res, valid.error());
      Json body;
      body["certificate_id"] = *id;
      body["at"] = at;
      body["valid"] = valid.value();
      send(res, 200, body);
    });

    server.Post(R"(/certificates/(\d+)/revoke)", [this](const httplib::Request& req,
                                                        httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      auto tx = parse_body_transaction(req.body, ledger::TxKind::RevokeCertificate);
      if (!tx.ok()) return fail(res, tx.error());
      auto id = parse_u64(req.matches[1]);
      auto payload = ledger::RevokePayload::decode(tx.value().payload);
      if (!id || !payload || payload->certificate_id != *id) {
        return fail(res, Error{ErrorCode::BadRequest,
                               "payload certificate id does not match the path"});
      }
      auto applied = apply_transaction(tx.value());
      if (!applied.ok()) return fail(res, applied.error());
      const auto& [block, receipt] = applied.value();
      if (!receipt.success) return fail(res, Error{receipt.code, receipt.message});
      run_sentinel_cycle(nullptr, nullptr);
      Json body;
      body["certificate_id"] = *id;
      body["status"] = "Revoked";
      body["block_height"] = block.height;
      send(res, 200, body);
    });

    server.Post(R"(/certificates/(\d+)/anomaly)", [this](const httplib::Request& req,
                                                         httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      auto tx = parse_body_transaction(req.body, ledger::TxKind::DetectAnomaly);
      if (!tx.ok()) return fail(res, tx.error());
      auto id = parse_u64(req.matches[1]);
      auto payload = ledger::AnomalyPayload::decode(tx.value().payload);
      if (!id || !payload || payload->certificate_id != *id) {
        return fail(res, Error{ErrorCode::BadRequest,
                               "payload certificate id does not match the path"});
      }
      auto applied = apply_transaction(tx.value());
      if (!applied.ok()) return fail(res, applied.error());
      const auto& [block, receipt] = applied.value();
      if (!receipt.success) return fail(res, Error{receipt.code, receipt.message});
      run_sentinel_cycle(nullptr, nullptr);
      Json body;
      body["certificate_id"] = *id;
      body["is_anomaly"] = true;
      body["description"] = payload->description;
      body["block_height"] = block.height;
      send(res, 200, body);
    });

    server.Post("/wallet/transfer", [this](const httplib::Request& req,
                                           httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      auto tx = parse_body_transaction(req.body, ledger::TxKind::WalletTransfer);
      if (!tx.ok()) return fail(res, tx.error());
      auto applied = apply_transaction(tx.value());
      if (!applied.ok()) return fail(res, applied.error());
      const auto& [block, receipt] = applied.value();
      if (!receipt.success) return fail(res, Error{receipt.code, receipt.message});
      run_sentinel_cycle(nullptr, nullptr);
      Json body;
      body["block_height"] = block.height;
      body["receipt"] = wire::to_json(receipt);
      send(res, 200, body);
    });

    server.Get("/chain/head", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      const auto& tip = node->tip();
      Json body;
      body["height"] = tip.height;
      body["digest"] = node->tip_digest().hex();
      body["timestamp"] = tip.timestamp;
      body["state_digest"] = tip.state_digest.hex();
      send(res, 200, body);
    });

    server.Get(R"(/chain/blocks/(\d+))", [this](const httplib::Request& req,
                                                httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      auto height = parse_u64(req.matches[1]);
      if (!height || *height >= node->chain().size()) {
        return fail(res, Error{ErrorCode::NotFound, "block height out of range"});
      }
      send(res, 200, wire::to_json(node->chain()[*height]));
    });

    server.Get(R"(/accounts/([0-9a-fA-F]{40}))", [this](const httplib::Request& req,
                                                        httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      auto account = AccountId::from_hex(std::string(req.matches[1]));
      if (!account) {
        return fail(res, Error{ErrorCode::BadRequest, "account must be 20-byte hex"});
      }
      Json body;
      body["account"] = account->hex();
      auto balance = node->balances().find(*account);
      body["balance"] = balance == node->balances().end() ? 0 : balance->second;
      body["next_nonce"] = node->next_nonce(*account);
      send(res, 200, body);
    });

    server.Post("/ct/submit", [this](const httplib::Request& req,
                                     httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      auto json = Json::parse(req.body, nullptr, false);
      if (json.is_discarded() || !json.is_object() ||
          !json.contains("certificate_id") ||
          !json["certificate_id"].is_number_unsigned()) {
        return fail(res, Error{ErrorCode::BadRequest,
                               "body must carry an unsigned certificate_id"});
      }
      std::uint64_t id = json["certificate_id"].get<std::uint64_t>();
      if (id >= node->registry().certificates.size()) {
        return fail(res, Error{ErrorCode::NotFound, "Certificate does not exist."});
      }
      const auto& record = node->registry().certificates[id];
      auto sct = log->submit_entry(ctlog::entry_for_certificate(record, now()));
      if (!sct.ok()) return fail(res, sct.error());
      Json body;
      body["certificate_id"] = id;
      body["sct"] = wire::to_json(sct.value());
      send(res, 200, body);
    });

    server.Get("/ct/sth", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      send(res, 200, wire::to_json(log->latest_sth()));
    });

    server.Get("/ct/proof", [this](const httplib::Request& req,
                                   httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      if (!req.has_param("leaf")) {
        return fail(res, Error{ErrorCode::BadRequest,
                               "query parameter \"leaf\" is required"});
      }
      auto leaf = Digest::from_hex(req.get_param_value("leaf"));
      if (!leaf) {
        return fail(res, Error{ErrorCode::BadRequest,
                               "query parameter \"leaf\" must be 32-byte hex"});
      }
      std::uint64_t size = log->size();
      if (req.has_param("size")) {
        auto parsed = parse_u64(req.get_param_value("size"));
        if (!parsed) {
          return fail(res, Error{ErrorCode::BadRequest,
                                 "query parameter \"size\" must be an unsigned integer"});
        }
        size = *parsed;
      }
      auto proof = log->prove_entry(*leaf, size);
      if (!proof.ok()) return fail(res, proof.error());
      Json body = wire::to_json(proof.value());
      body["leaf_hash"] = leaf->hex();
      send(res, 200, body);
    });

    server.Get("/ct/entries", [this](const httplib::Request& req,
                                     httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      std::uint64_t from = 0;
      std::uint64_t to = log->size();
      if (req.has_param("from")) {
        auto parsed = parse_u64(req.get_param_value("from"));
        if (!parsed) {
          return fail(res, Error{ErrorCode::BadRequest,
                                 "query parameter \"from\" must be an unsigned integer"});
        }
        from = *parsed;
      }
      if (req.has_param("to")) {
        auto parsed = parse_u64(req.get_param_value("to"));
        if (!parsed) {
          return fail(res, Error{ErrorCode::BadRequest,
                                 "query parameter \"to\" must be an unsigned integer"});
        }
        to = *parsed;
      }
      auto entries = log->entries(from, to);
      if (!entries.ok()) return fail(res, entries.error());
      Json body;
      body["tree_size"] = log->size();
      Json list = Json::array();
      for (const auto& entry : entries.value()) list.push_back(wire::to_json(entry));
      body["entries"] = std::move(list);
      send(res, 200, body);
    });

    server.Get("/status", [this](const httplib::Request&, httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      Json body;
      body["public_key"] = key.public_key.hex();
      body["account"] = account.hex();
      body["log_id"] = log->log_id().hex();
      body["tree_size"] = log->size();
      body["chain_height"] = node->tip().height;
      body["state_digest"] = node->current_state_digest().hex();
      send(res, 200, body);
    });

    server.Post("/sentinel/events", [this](const httplib::Request& req,
                                           httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      auto json = Json::parse(req.body, nullptr, false);
      if (json.is_discarded()) {
        return fail(res, Error{ErrorCode::ParseError, "request body is not valid JSON"});
      }
      auto event = wire::event_from_json(json, now());
      if (!event.ok()) return fail(res, event.error());
      auto matched = watch->ingest_event(event.value());
      Json report;
      Json executed = Json::array();
      run_sentinel_cycle(&report, &executed);
      Json body;
      Json matches = Json::array();
      for (const auto& signature : matched) matches.push_back(wire::to_json(signature));
      body["matched"] = std::move(matches);
      body["report"] = std::move(report);
      body["executed"] = std::move(executed);
      send(res, 200, body);
    });

    server.Get("/sentinel/alerts", [this](const httplib::Request&,
                                          httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      Json body;
      Json alerts = Json::array();
      for (const auto& alert : watch->alerts()) alerts.push_back(wire::to_json(alert));
      body["alerts"] = std::move(alerts);
      send(res, 200, body);
    });

    server.Get("/sentinel/report", [this](const httplib::Request& req,
                                          httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      watch->sync_wallet_events(*node);
      std::uint64_t end = now();
      std::uint64_t length = watch->config().window_length;
      if (req.has_param("end")) {
        auto parsed = parse_u64(req.get_param_value("end"));
        if (!parsed) {
          return fail(res, Error{ErrorCode::BadRequest,
                                 "query parameter \"end\" must be an unsigned integer"});
        }
        end = *parsed;
      }
      if (req.has_param("length")) {
        auto parsed = parse_u64(req.get_param_value("length"));
        if (!parsed || *parsed == 0) {
          return fail(res, Error{ErrorCode::BadRequest,
                                 "query parameter \"length\" must be a positive integer"});
        }
        length = *parsed;
      }
      send(res, 200, wire::to_json(watch->correlate(end, length)));
    });

    server.Get("/sentinel/compliance", [this](const httplib::Request& req,
                                              httplib::Response& res) {
      std::lock_guard<std::mutex> guard(mutex);
      std::vector<std::string> keys = config.disallowed_keys;
      if (req.has_param("keys")) {
        keys.clear();
        std::string raw = req.get_param_value("keys");
        std::size_t start = 0;
        while (start <= raw.size()) {
          auto comma = raw.find(',', start);
          if (comma == std::string::npos) comma = raw.size();
          auto item = raw.substr(start, comma - start);
          if (!item.empty()) keys.push_back(item);
          start = comma + 1;
        }
      }
      auto flags = sentinel::compliance_check(node->chain(), keys);
      Json body;
      Json list = Json::array();
      for (const auto& flag : flags) list.push_back(wire::to_json(flag));
      body["flags"] = std::move(list);
      send(res, 200, body);
    });
  }
};

Service::Service(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Service::~Service() { stop(); }
Service::Service(Service&&) noexcept = default;
Service& Service::operator=(Service&&) noexcept = default;

Result<std::unique_ptr<Service>> Service::open(
    config::ServiceConfig config, crypto::KeyPair node_key, Clock clock,
    std::shared_ptr<registry::ModelClient> model) {
  std::error_code ec;
  std::filesystem::create_directories(config.data_dir, ec);
  if (ec) {
    return Error{ErrorCode::IoError,
                 "cannot create data dir: " + config.data_dir};
  }
  if (!model) {
    if (!config.model_keyword.empty()) {
      model = std::make_shared<registry::KeywordModelClient>(config.model_keyword);
    } else {
      model = std::make_shared<HttpModelClient>();
    }
  }

  auto impl = std::make_unique<Impl>();
  impl->config = config;
  impl->key = node_key;
  impl->account = crypto::account_from_public_key(node_key.public_key);
  impl->clock = std::move(clock);

  auto chain_path = (std::filesystem::path(config.data_dir) / "chain.bin").string();
  auto node = ledger::Node::open(config::genesis_config(config), model, chain_path);
  if (!node.ok()) return node.error();
  impl->node = std::make_unique<ledger::Node>(node.value());

  auto log_path = (std::filesystem::path(config.data_dir) / "ctlog.bin").string();
  auto log = ctlog::CtLog::open(node_key, log_path);
  if (!log.ok()) return log.error();
  impl->log = std::make_unique<ctlog::CtLog>(log.value());

  std::vector<sentinel::VulnerabilitySignature> repository;
  if (!config.repository_path.empty()) {
    auto loaded = sentinel::load_repository(config.repository_path);
    if (!loaded.ok()) return loaded.error();
    repository = loaded.value();
  }
  impl->watch = std::make_unique<sentinel::Sentinel>(config.sentinel,
                                                     std::move(repository));
  impl->watch->set_authority(node_key);
  impl->watch->sync_wallet_events(*impl->node);
  impl->rebuild_enforced_reports();
  impl->route();
  return std::unique_ptr<Service>(new Service(std::move(impl)));
}

Status Service::serve_blocking() {
  auto [host, port] = split_listen(impl_->config.listen);
  if (host.empty() || port == 0) {
    return Error{ErrorCode::BadRequest,
                 "listen address must be host:port, got \"" +
                     impl_->config.listen + "\""};
  }
  if (!impl_->server.bind_to_port(host, port)) {
    return Error{ErrorCode::IoError,
                 "cannot bind " + impl_->config.listen};
  }
  if (!impl_->server.listen_after_bind()) {
    return Error{ErrorCode::IoError, "server terminated abnormally"};
  }
  return ok_status();
}

Result<int> Service::start_background() {
  auto [host, port] = split_listen(impl_->config.listen);
  if (host.empty()) host = "127.0.0.1";
  int bound = impl_->server.bind_to_any_port(host);
  if (bound <= 0) {
    return Error{ErrorCode::IoError, "cannot bind a port on " + host};
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

ledger::Node& Service::node() { return *impl_->node; }
ctlog::CtLog& Service::log() { return *impl_->log; }
sentinel::Sentinel& Service::sentinel() { return *impl_->watch; }
const crypto::KeyPair& Service::node_key() const { return impl_->key; }
const config::ServiceConfig& Service::service_config() const {
  return impl_->config;
}

}  // namespace smartcert::api
