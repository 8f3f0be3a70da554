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

#include "smartcert/encoding.hpp"

namespace smartcert {

void Encoder::put_u32(std::uint32_t v) {
  out_.push_back(static_cast<std::uint8_t>(v >> 24));
  out_.push_back(static_cast<std::uint8_t>(v >> 16));
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
  out_.push_back(static_cast<std::uint8_t>(v));
}

void Encoder::put_u64(std::uint64_t v) {
  put_u32(static_cast<std::uint32_t>(v >> 32));
  put_u32(static_cast<std::uint32_t>(v));
}

void Encoder::put_bytes(BytesView data) {
  put_u32(static_cast<std::uint32_t>(data.size()));
  put_raw(data);
}

void Encoder::put_string(std::string_view s) {
  put_u32(static_cast<std::uint32_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
}

void Encoder::put_metadata(const Metadata& m) {
  put_u32(static_cast<std::uint32_t>(m.size()));
  for (const auto& [key, value] : m) {
    put_string(key);
    put_string(value);
  }
}

std::optional<std::uint8_t> Decoder::get_u8() {
  if (remaining() < 1) return std::nullopt;
  return data_[pos_++];
}

std::optional<std::uint32_t> Decoder::get_u32() {
  if (remaining() < 4) return std::nullopt;
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v = (v << 8) | data_[pos_++];
  return v;
}

std::optional<std::uint64_t> Decoder::get_u64() {
  auto hi = get_u32();
  auto lo = get_u32();
  if (!hi || !lo) return std::nullopt;
  return (static_cast<std::uint64_t>(*hi) << 32) | *lo;
}

std::optional<Bytes> Decoder::get_raw(std::size_t n) {
  if (remaining() < n) return std::nullopt;
  Bytes out(data_.begin() + pos_, data_.begin() + pos_ + n);
  pos_ += n;
  return out;
}

std::optional<Bytes> Decoder::get_bytes() {
  auto len = get_u32();
  if (!len) return std::nullopt;
  return get_raw(*len);
}

std::optional<std::string> Decoder::get_string() {
  auto raw = get_bytes();
  if (!raw) return std::nullopt;
  return std::string(raw->begin(), raw->end());
}

std::optional<Metadata> Decoder::get_metadata() {
  auto count = get_u32();
  if (!count) return std::nullopt;
  Metadata m;
  m.reserve(*count);
  for (std::uint32_t i = 0; i < *count; ++i) {
    auto key = get_string();
    auto value = get_string();
    if (!key || !value) return std::nullopt;
    m.emplace_back(std::move(*key), std::move(*value));
  }
  return m;
}

}  // namespace smartcert
