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

#ifndef SMARTCERT_CRYPTO_HPP_
#define SMARTCERT_CRYPTO_HPP_

#include <array>
#include <cstdint>

#include "smartcert/bytes.hpp"
#include "smartcert/errors.hpp"

namespace smartcert::crypto {

// Point on the edwards25519 curve (compressed) and a scalar mod the group
// order. Used by the Schnorr proof of possession.
using GroupElement = FixedBytes<32, struct GroupElementTag>;
using Scalar = FixedBytes<32, struct ScalarTag>;

inline constexpr std::size_t kSeedSize = 32;
inline constexpr std::size_t kSecretKeySize = 64;  // Ed25519: seed || public

// Ed25519 key pair. The secret key never leaves this struct through any
// serialization path; the CLI key file stores the seed explicitly and is the
// only place secret material is written.
struct KeyPair {
  PublicKey public_key;
  std::array<std::uint8_t, kSecretKeySize> secret_key{};

  BytesView seed() const { return BytesView(secret_key.data(), kSeedSize); }
};

// Streaming SHA-256.
class Sha256 {
 public:
  Sha256();
  Sha256& update(BytesView data);
  Sha256& update(std::uint8_t byte);
  Digest finish();

 private:
  std::array<std::uint8_t, 128> state_;  // opaque crypto_hash_sha256_state
};

Digest sha256(BytesView data);

// SHA-256 of the exact document bytes (empty input allowed).
Digest hash_document(BytesView document);

// Fresh key pair from the system CSPRNG.
KeyPair keygen();

// Deterministic key pair from a 32-byte seed.
Result<KeyPair> keygen_from_seed(BytesView seed);

// Detached Ed25519 signature over the 32-byte digest. Deterministic: equal
// (key, digest) pairs produce byte-identical signatures.
Signature sign(const KeyPair& key, const Digest& digest);

// True iff |signature| is valid for (public_key, digest). Malformed input
// yields false, never an exception.
bool verify(const PublicKey& public_key, const Digest& digest,
            const Signature& signature);

// First 20 bytes of SHA-256 over the serialized public key. Same width as a
// contract address but derived from SHA-256, so not interoperable with
// Ethereum addresses.
AccountId account_from_public_key(const PublicKey& public_key);
Result<AccountId> account_from_bytes(BytesView public_key_bytes);

// Non-interactive Schnorr proof of knowledge of the secret key, Fiat-Shamir
// over SHA-256. The challenge binds the commitment, the public key and a
// caller-supplied context, so a proof cannot be replayed elsewhere.
struct PossessionProof {
  GroupElement commitment;  // R = r*B
  Digest challenge;         // SHA-256(R || public_key || context)
  Scalar response;          // r + challenge*secret mod L
  Bytes context;
};

PossessionProof prove_possession(const KeyPair& key, BytesView context);
bool verify_possession(const PublicKey& public_key, BytesView context,
                       const PossessionProof& proof);

}  // namespace smartcert::crypto

#endif  // SMARTCERT_CRYPTO_HPP_
