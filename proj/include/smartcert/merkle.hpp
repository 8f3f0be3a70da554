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

#ifndef SMARTCERT_MERKLE_HPP_
#define SMARTCERT_MERKLE_HPP_

#include <cstdint>
#include <vector>

#include "smartcert/bytes.hpp"
#include "smartcert/errors.hpp"

namespace smartcert::merkle {

// RFC 6962 tree hashing: leaves are hashed with a 0x00 prefix, interior
// nodes with 0x01, trees split at the largest power of two smaller than the
// leaf count, and the empty tree hashes to SHA-256 of the empty string.
Digest leaf_hash(BytesView leaf);
Digest node_hash(const Digest& left, const Digest& right);
Digest empty_tree_root();

struct InclusionProof {
  std::uint64_t leaf_index = 0;
  std::uint64_t tree_size = 0;
  std::vector<Digest> audit_path;  // siblings, leaf level first
};

struct ConsistencyProof {
  std::uint64_t old_size = 0;
  std::uint64_t new_size = 0;
  std::vector<Digest> path;
};

// Append-only Merkle tree over raw leaf byte strings. Proofs and roots can
// be taken at any historical prefix size. Appends are single-writer; reads
// may run concurrently with each other but not with an append.
class MerkleTree {
 public:
  std::uint64_t size() const { return leaves_.size(); }
  const Bytes& leaf(std::uint64_t index) const { return leaves_[index]; }

  void append(BytesView leaf);

  Digest root() const;
  // Root of the tree over the first |size| leaves.
  Result<Digest> root_at(std::uint64_t size) const;

  Result<InclusionProof> inclusion_proof(std::uint64_t leaf_index) const;
  Result<InclusionProof> inclusion_proof(std::uint64_t leaf_index,
                                         std::uint64_t tree_size) const;

  // Proof that the first |old_size| leaves are a prefix of the current tree
  // (or of the first |new_size| leaves). old_size of 0 is rejected.
  Result<ConsistencyProof> consistency_proof(std::uint64_t old_size) const;
  Result<ConsistencyProof> consistency_proof(std::uint64_t old_size,
                                             std::uint64_t new_size) const;

 private:
  Digest subtree_hash(std::uint64_t lo, std::uint64_t hi) const;
  void subproof(std::uint64_t m, std::uint64_t lo, std::uint64_t hi,
                bool complete, std::vector<Digest>& out) const;

  std::vector<Bytes> leaves_;
  // levels_[0] holds leaf hashes; levels_[k][i] the hash of the complete
  // subtree covering leaves [i*2^k, (i+1)*2^k). Partial right edges are
  // recomputed on demand.
  std::vector<std::vector<Digest>> levels_;
};

// Recompute the root from leaf_hash(leaf) and the audit path; true iff it
// equals |expected_root|. Malformed proofs return false.
bool verify_inclusion(const Digest& expected_root, BytesView leaf,
                      const InclusionProof& proof);
bool verify_inclusion_hash(const Digest& expected_root, const Digest& leaf_hash,
                           const InclusionProof& proof);

// True iff |proof| links old_root at old_size to new_root at new_size under
// the append-only hashing rules. Proofs from old_size 0 are rejected.
bool verify_consistency(const Digest& old_root, const Digest& new_root,
                        const ConsistencyProof& proof);

}  // namespace smartcert::merkle

#endif  // SMARTCERT_MERKLE_HPP_
