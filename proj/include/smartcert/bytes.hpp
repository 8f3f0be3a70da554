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

#ifndef SMARTCERT_BYTES_HPP_
#define SMARTCERT_BYTES_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smartcert {

using Bytes = std::vector<std::uint8_t>;
using BytesView = std::span<const std::uint8_t>;

// All binary values cross file, CLI, and HTTP boundaries as lowercase hex.
std::string to_hex(BytesView data);
std::optional<Bytes> from_hex(std::string_view hex);

Bytes to_bytes(std::string_view s);
std::string to_string(BytesView data);

// Fixed-width byte value with hex accessors. Digests, keys, signatures and
// account ids are all instances of this with distinct tags, so a Signature
// cannot be passed where a Digest is expected.
template <std::size_t N, typename Tag>
struct FixedBytes {
  std::array<std::uint8_t, N> bytes{};

  static constexpr std::size_t size() { return N; }

  static std::optional<FixedBytes> from_bytes(BytesView data) {
    if (data.size() != N) return std::nullopt;
    FixedBytes out;
    std::copy(data.begin(), data.end(), out.bytes.begin());
    return out;
  }

  static std::optional<FixedBytes> from_hex(std::string_view hex) {
    auto raw = smartcert::from_hex(hex);
    if (!raw) return std::nullopt;
    return from_bytes(*raw);
  }

  std::string hex() const { return to_hex(bytes); }
  BytesView view() const { return BytesView(bytes.data(), N); }
  const std::uint8_t* data() const { return bytes.data(); }
  std::uint8_t* data() { return bytes.data(); }

  bool is_zero() const {
    for (auto b : bytes)
      if (b != 0) return false;
    return true;
  }

  auto operator<=>(const FixedBytes&) const = default;
};

using Digest = FixedBytes<32, struct DigestTag>;
using AccountId = FixedBytes<20, struct AccountIdTag>;
using PublicKey = FixedBytes<32, struct PublicKeyTag>;
using Signature = FixedBytes<64, struct SignatureTag>;

}  // namespace smartcert

#endif  // SMARTCERT_BYTES_HPP_
