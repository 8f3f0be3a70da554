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

#ifndef SMARTCERT_CONFIG_HPP_
#define SMARTCERT_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "smartcert/crypto.hpp"
#include "smartcert/errors.hpp"
#include "smartcert/ledger.hpp"
#include "smartcert/sentinel.hpp"

namespace smartcert::config {

// Service settings in a key = value file. Lines starting with '#' and blank
// lines are ignored; initial balances use `balance.<account hex> = amount`.
struct ServiceConfig {
  std::string listen = "127.0.0.1:8545";
  std::string data_dir = ".";
  std::string key_path;
  std::string repository_path;
  std::string model_endpoint = "http://127.0.0.1:9090";
  std::string model_keyword;
  AccountId authority;
  std::vector<std::pair<AccountId, std::uint64_t>> balances;
  std::uint64_t genesis_timestamp = 0;
  std::uint32_t max_block_txs = 100;
  sentinel::SentinelConfig sentinel;
  std::vector<std::string> disallowed_keys;
};

Result<ServiceConfig> load_service_config(const std::string& path);

ledger::GenesisConfig genesis_config(const ServiceConfig& config);

// Key files hold `seed = <32-byte hex>`; the public key and account lines
// written by save_key_file are informational.
Result<crypto::KeyPair> load_key_file(const std::string& path);
Status save_key_file(const std::string& path, const crypto::KeyPair& key);

}  // namespace smartcert::config

#endif  // SMARTCERT_CONFIG_HPP_
