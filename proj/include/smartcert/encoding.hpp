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

#ifndef SMARTCERT_ENCODING_HPP_
#define SMARTCERT_ENCODING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smartcert/bytes.hpp"

namespace smartcert {

// Insertion-ordered string map; the canonical encoding and the wire format
// both preserve the stored order.
using Metadata = std::vector<std::pair<std::string, std::string>>;

// Canonical binary encoding: fixed field order, big-endian fixed-width
// integers, u32-length-prefixed byte strings, fixed-width values raw. This is
// the byte layout that every digest and signature in the system commits to,
// so any change here is consensus-breaking.
class Encoder {
 public:
  void put_u8(std::uint8_t v) { out_.push_back(v); }
  void put_u32(std::uint32_t v);
  void put_u64(std::uint64_t v);
  void put_raw(BytesView data) { out_.insert(out_.end(), data.begin(), data.end()); }
  void put_bytes(BytesView data);
  void put_string(std::string_view s);
  void put_metadata(const Metadata& m);

  template <std::size_t N, typename Tag>
  void put_fixed(const FixedBytes<N, Tag>& v) {
    put_raw(v.view());
  }

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Bounds-checked reader for the canonical encoding. Every getter returns
// nullopt on truncation; decode helpers treat that as corruption.
class Decoder {
 public:
  explicit Decoder(BytesView data) : data_(data) {}

  std::optional<std::uint8_t> get_u8();
  std::optional<std::uint32_t> get_u32();
  std::optional<std::uint64_t> get_u64();
  std::optional<Bytes> get_raw(std::size_t n);
  std::optional<Bytes> get_bytes();
  std::optional<std::string> get_string();
  std::optional<Metadata> get_metadata();

  template <std::size_t N, typename Tag>
  std::optional<FixedBytes<N, Tag>> get_fixed() {
    auto raw = get_raw(N);
    if (!raw) return std::nullopt;
    return FixedBytes<N, Tag>::from_bytes(*raw);
  }

  bool exhausted() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  BytesView data_;
  std::size_t pos_ = 0;
};

}  // namespace smartcert

#endif  // SMARTCERT_ENCODING_HPP_
