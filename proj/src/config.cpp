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

#include "smartcert/config.hpp"

#include <charconv>
#include <fstream>

namespace smartcert::config {

namespace {

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  auto end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

Error line_error(std::size_t line, const std::string& what) {
  return Error{ErrorCode::ParseError,
               "line " + std::to_string(line) + ": " + what};
}

bool parse_u64(const std::string& text, std::uint64_t& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

bool parse_u32(const std::string& text, std::uint32_t& out) {
  std::uint64_t wide = 0;
  if (!parse_u64(text, wide) || wide > 0xffffffffULL) return false;
  out = static_cast<std::uint32_t>(wide);
  return true;
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

std::vector<std::string> split_csv(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    auto item = trim(text.substr(start, comma - start));
    if (!item.empty()) out.push_back(item);
    start = comma + 1;
  }
  return out;
}

}  // namespace

Result<ServiceConfig> load_service_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    return Error{ErrorCode::IoError, "cannot open config file: " + path};
  }
  ServiceConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    auto eq = entry.find('=');
    if (eq == std::string::npos) {
      return line_error(line_no, "expected key = value");
    }
    std::string key = trim(entry.substr(0, eq));
    std::string value = trim(entry.substr(eq + 1));
    if (key.empty()) return line_error(line_no, "empty key");

    if (key == "listen") {
      config.listen = value;
    } else if (key == "data_dir") {
      config.data_dir = value;
    } else if (key == "key") {
      config.key_path = value;
    } else if (key == "repository") {
      config.repository_path = value;
    } else if (key == "model_endpoint") {
      config.model_endpoint = value;
    } else if (key == "model_keyword") {
      config.model_keyword = value;
    } else if (key == "authority") {
      auto account = AccountId::from_hex(value);
      if (!account) return line_error(line_no, "authority must be 20-byte hex");
      config.authority = *account;
    } else if (key == "genesis_timestamp") {
      if (!parse_u64(value, config.genesis_timestamp)) {
        return line_error(line_no, "genesis_timestamp must be an unsigned integer");
      }
    } else if (key == "max_block_txs") {
      if (!parse_u32(value, config.max_block_txs) || config.max_block_txs == 0) {
        return line_error(line_no, "max_block_txs must be a positive integer");
      }
    } else if (key == "wallet_window_seconds") {
      if (!parse_u64(value, config.sentinel.wallet_window_seconds) ||
          config.sentinel.wallet_window_seconds == 0) {
        return line_error(line_no, "wallet_window_seconds must be a positive integer");
      }
    } else if (key == "wallet_threshold") {
      if (!parse_u32(value, config.sentinel.wallet_threshold) ||
          config.sentinel.wallet_threshold == 0) {
        return line_error(line_no, "wallet_threshold must be a positive integer");
      }
    } else if (key == "window_length") {
      if (!parse_u64(value, config.sentinel.window_length) ||
          config.sentinel.window_length == 0) {
        return line_error(line_no, "window_length must be a positive integer");
      }
    } else if (key == "alert_threshold") {
      if (!parse_double(value, config.sentinel.alert_threshold) ||
          config.sentinel.alert_threshold < 0.0 ||
          config.sentinel.alert_threshold > 1.0) {
        return line_error(line_no, "alert_threshold must be in [0, 1]");
      }
    } else if (key == "disallowed_keys") {
      config.disallowed_keys = split_csv(value);
    } else if (key.rfind("balance.", 0) == 0) {
      auto account = AccountId::from_hex(key.substr(8));
      if (!account) return line_error(line_no, "balance account must be 20-byte hex");
      std::uint64_t amount = 0;
      if (!parse_u64(value, amount)) {
        return line_error(line_no, "balance must be an unsigned integer");
      }
      config.balances.emplace_back(*account, amount);
    } else {
      return line_error(line_no, "unknown key \"" + key + "\"");
    }
  }
  return config;
}

ledger::GenesisConfig genesis_config(const ServiceConfig& config) {
  ledger::GenesisConfig genesis;
  genesis.authority = config.authority;
  genesis.model_endpoint = config.model_endpoint;
  genesis.balances = config.balances;
  genesis.genesis_timestamp = config.genesis_timestamp;
  genesis.max_block_txs = config.max_block_txs;
  return genesis;
}

Result<crypto::KeyPair> load_key_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) {
    return Error{ErrorCode::IoError, "cannot open key file: " + path};
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;
    auto eq = entry.find('=');
    if (eq == std::string::npos) {
      return line_error(line_no, "expected key = value");
    }
    std::string key = trim(entry.substr(0, eq));
    std::string value = trim(entry.substr(eq + 1));
    if (key != "seed") continue;
    auto seed = from_hex(value);
    if (!seed) return line_error(line_no, "seed must be hex");
    return crypto::keygen_from_seed(*seed);
  }
  return Error{ErrorCode::InvalidSeed, "key file has no seed entry: " + path};
}

Status save_key_file(const std::string& path, const crypto::KeyPair& key) {
  std::ofstream file(path, std::ios::trunc);
  if (!file) {
    return Error{ErrorCode::IoError, "cannot write key file: " + path};
  }
  file << "seed = " << to_hex(key.seed()) << "\n";
  file << "public_key = " << key.public_key.hex() << "\n";
  file << "account = " << crypto::account_from_public_key(key.public_key).hex()
       << "\n";
  if (!file.good()) {
    return Error{ErrorCode::IoError, "cannot write key file: " + path};
  }
  return ok_status();
}

}  // namespace smartcert::config
