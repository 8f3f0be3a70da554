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

#include "smartcert/crypto.hpp"

#include <sodium.h>

#include <cstring>
#include <stdexcept>

namespace smartcert::crypto {

namespace {

void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw std::runtime_error("libsodium initialization failed");
}

// Canonical secret scalar of an Ed25519 key: clamped SHA-512 prefix of the
// seed, reduced mod the group order L.
Scalar secret_scalar(const KeyPair& key) {
  std::uint8_t h[64];
  crypto_hash_sha512(h, key.secret_key.data(), kSeedSize);
  h[0] &= 248;
  h[31] &= 127;
  h[31] |= 64;
  std::uint8_t wide[64] = {0};
  std::memcpy(wide, h, 32);
  Scalar out;
  crypto_core_ed25519_scalar_reduce(out.data(), wide);
  sodium_memzero(h, sizeof h);
  sodium_memzero(wide, sizeof wide);
  return out;
}

Scalar reduce_digest(const Digest& d) {
  std::uint8_t wide[64] = {0};
  std::memcpy(wide, d.data(), 32);
  Scalar out;
  crypto_core_ed25519_scalar_reduce(out.data(), wide);
  return out;
}

Digest possession_challenge(const GroupElement& commitment,
                            const PublicKey& public_key, BytesView context) {
  Sha256 h;
  h.update(commitment.view());
  h.update(public_key.view());
  h.update(context);
  return h.finish();
}

}  // namespace

Sha256::Sha256() {
  static_assert(sizeof(crypto_hash_sha256_state) <= sizeof(state_));
  ensure_sodium();
  crypto_hash_sha256_init(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()));
}

Sha256& Sha256::update(BytesView data) {
  crypto_hash_sha256_update(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()),
                            data.data(), data.size());
  return *this;
}

Sha256& Sha256::update(std::uint8_t byte) {
  return update(BytesView(&byte, 1));
}

Digest Sha256::finish() {
  Digest out;
  crypto_hash_sha256_final(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()),
                           out.data());
  return out;
}

Digest sha256(BytesView data) {
  return Sha256().update(data).finish();
}

Digest hash_document(BytesView document) {
  return sha256(document);
}

KeyPair keygen() {
  ensure_sodium();
  std::uint8_t seed[kSeedSize];
  randombytes_buf(seed, sizeof seed);
  auto key = keygen_from_seed(BytesView(seed, sizeof seed));
  sodium_memzero(seed, sizeof seed);
  return key.value();
}

Result<KeyPair> keygen_from_seed(BytesView seed) {
  ensure_sodium();
  if (seed.size() != kSeedSize) {
    return Error{ErrorCode::InvalidSeed, "seed must be exactly 32 bytes"};
  }
  KeyPair key;
  crypto_sign_seed_keypair(key.public_key.data(), key.secret_key.data(),
                           seed.data());
  return key;
}

Signature sign(const KeyPair& key, const Digest& digest) {
  ensure_sodium();
  Signature sig;
  crypto_sign_detached(sig.data(), nullptr, digest.data(), Digest::size(),
                       key.secret_key.data());
  return sig;
}

bool verify(const PublicKey& public_key, const Digest& digest,
            const Signature& signature) {
  ensure_sodium();
  return crypto_sign_verify_detached(signature.data(), digest.data(),
                                     Digest::size(), public_key.data()) == 0;
}

AccountId account_from_public_key(const PublicKey& public_key) {
  Digest d = sha256(public_key.view());
  AccountId id;
  std::memcpy(id.data(), d.data(), AccountId::size());
  return id;
}

Result<AccountId> account_from_bytes(BytesView public_key_bytes) {
  auto pk = PublicKey::from_bytes(public_key_bytes);
  if (!pk) {
    return Error{ErrorCode::InvalidKey, "public key must be exactly 32 bytes"};
  }
  return account_from_public_key(*pk);
}

PossessionProof prove_possession(const KeyPair& key, BytesView context) {
  ensure_sodium();
  Scalar secret = secret_scalar(key);

  // Deterministic nonce from the secret key and context; the counter only
  // advances in the negligible case that the derived scalar is zero.
  Scalar nonce;
  GroupElement commitment;
  for (std::uint8_t counter = 0;; ++counter) {
    crypto_hash_sha512_state st;
    crypto_hash_sha512_init(&st);
    crypto_hash_sha512_update(&st, key.secret_key.data(), kSecretKeySize);
    crypto_hash_sha512_update(&st, context.data(), context.size());
    crypto_hash_sha512_update(&st, &counter, 1);
    std::uint8_t wide[64];
    crypto_hash_sha512_final(&st, wide);
    crypto_core_ed25519_scalar_reduce(nonce.data(), wide);
    sodium_memzero(wide, sizeof wide);
    if (crypto_scalarmult_ed25519_base_noclamp(commitment.data(),
                                               nonce.data()) == 0) {
      break;
    }
  }

  PossessionProof proof;
  proof.commitment = commitment;
  proof.context.assign(context.begin(), context.end());
  proof.challenge = possession_challenge(commitment, key.public_key, context);
  Scalar c = reduce_digest(proof.challenge);
  Scalar ca;
  crypto_core_ed25519_scalar_mul(ca.data(), c.data(), secret.data());
  crypto_core_ed25519_scalar_add(proof.response.data(), nonce.data(), ca.data());
  return proof;
}

bool verify_possession(const PublicKey& public_key, BytesView context,
                       const PossessionProof& proof) {
  ensure_sodium();
  if (proof.context.size() != context.size() ||
      !std::equal(context.begin(), context.end(), proof.context.begin())) {
    return false;
  }
  if (!crypto_core_ed25519_is_valid_point(proof.commitment.data()) ||
      !crypto_core_ed25519_is_valid_point(public_key.data())) {
    return false;
  }
  Digest expected = possession_challenge(proof.commitment, public_key, context);
  if (expected != proof.challenge) return false;

  // Reject non-canonical response scalars.
  std::uint8_t wide[64] = {0};
  std::memcpy(wide, proof.response.data(), 32);
  Scalar canonical;
  crypto_core_ed25519_scalar_reduce(canonical.data(), wide);
  if (canonical != proof.response) return false;

  // z*B == R + c*A
  Scalar c = reduce_digest(expected);
  GroupElement lhs, ca, rhs;
  if (crypto_scalarmult_ed25519_base_noclamp(lhs.data(),
                                             proof.response.data()) != 0) {
    return false;
  }
  if (crypto_scalarmult_ed25519_noclamp(ca.data(), c.data(),
                                        public_key.data()) != 0) {
    return false;
  }
  if (crypto_core_ed25519_add(rhs.data(), proof.commitment.data(),
                              ca.data()) != 0) {
    return false;
  }
  return lhs == rhs;
}

}  // namespace smartcert::crypto
