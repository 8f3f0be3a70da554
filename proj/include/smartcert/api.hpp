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

#ifndef SMARTCERT_API_HPP_
#define SMARTCERT_API_HPP_

#include <functional>
#include <memory>
#include <string>

#include "smartcert/config.hpp"
#include "smartcert/ctlog.hpp"
#include "smartcert/errors.hpp"
#include "smartcert/ledger.hpp"
#include "smartcert/sentinel.hpp"

namespace smartcert::api {

using Clock = std::function<std::uint64_t()>;

// Posts the anomaly request body to <endpoint>/detect_anomaly over HTTP.
class HttpModelClient : public registry::ModelClient {
 public:
  Result<registry::ModelResponse> detect_anomaly(
      const std::string& endpoint, const std::string& request_body) override;
};

// HTTP front end over one node, its transparency log, and the sentinel.
// Every response body is signed with the node key; the hex signature rides
// in the X-Node-Signature header. Mutating requests carry signed ledger
// transactions and each produces one block. Callers are authenticated by
// transaction signature only.
class Service {
 public:
  ~Service();
  Service(Service&&) noexcept;
  Service& operator=(Service&&) noexcept;

  // Replays any persisted chain and log from config.data_dir. When `model`
  // is null, a keyword model is used if config.model_keyword is set and the
  // HTTP client otherwise. A null clock means system time.
  static Result<std::unique_ptr<Service>> open(
      config::ServiceConfig config, crypto::KeyPair node_key, Clock clock = {},
      std::shared_ptr<registry::ModelClient> model = nullptr);

  // Serves the configured listen address until stop().
  Status serve_blocking();

  // Binds an OS-assigned port on the configured host and serves from a
  // background thread. Returns the bound port.
  Result<int> start_background();
  void stop();

  ledger::Node& node();
  ctlog::CtLog& log();
  sentinel::Sentinel& sentinel();
  const crypto::KeyPair& node_key() const;
  const config::ServiceConfig& service_config() const;

 private:
  struct Impl;
  explicit Service(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

}  // namespace smartcert::api

#endif  // SMARTCERT_API_HPP_
