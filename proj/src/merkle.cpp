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

#include "smartcert/merkle.hpp"

#include <bit>

#include "smartcert/crypto.hpp"

namespace smartcert::merkle {

namespace {

constexpr std::uint8_t kLeafPrefix = 0x00;
constexpr std::uint8_t kNodePrefix = 0x01;

// Largest power of two strictly less than n (n >= 2).
std::uint64_t split_point(std::uint64_t n) {
  return std::uint64_t{1} << (std::bit_width(n - 1) - 1);
}

// Audit path shape for a leaf at |index| in a tree of |size| leaves: |inner|
// levels below the last left-turn of the path, then |border| right-edge
// nodes above it.
struct PathShape {
  std::size_t inner;
  std::size_t border;
};

PathShape path_shape(std::uint64_t index, std::uint64_t size) {
  auto inner = static_cast<std::size_t>(std::bit_width(index ^ (size - 1)));
  auto border = static_cast<std::size_t>(std::popcount(index >> inner));
  return {inner, border};
}

Digest chain_inner(Digest seed, std::span<const Digest> path,
                   std::uint64_t index) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    seed = (index >> i) & 1 ? node_hash(path[i], seed) : node_hash(seed, path[i]);
  }
  return seed;
}

Digest chain_inner_right(Digest seed, std::span<const Digest> path,
                         std::uint64_t index) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    if ((index >> i) & 1) seed = node_hash(path[i], seed);
  }
  return seed;
}

Digest chain_border_right(Digest seed, std::span<const Digest> path) {
  for (const Digest& d : path) seed = node_hash(d, seed);
  return seed;
}

}  // namespace

Digest leaf_hash(BytesView leaf) {
  return crypto::Sha256().update(kLeafPrefix).update(leaf).finish();
}

Digest node_hash(const Digest& left, const Digest& right) {
  return crypto::Sha256()
      .update(kNodePrefix)
      .update(left.view())
      .update(right.view())
      .finish();
}

Digest empty_tree_root() {
  return crypto::sha256(BytesView{});
}

void MerkleTree::append(BytesView leaf) {
  leaves_.emplace_back(leaf.begin(), leaf.end());
  if (levels_.empty()) levels_.emplace_back();
  levels_[0].push_back(leaf_hash(leaf));
  // Complete any node pairs the new leaf closed.
  for (std::size_t level = 1, pairs = levels_[0].size() / 2; pairs != 0;
       ++level, pairs /= 2) {
    if (level == levels_.size()) levels_.emplace_back();
    while (levels_[level].size() < pairs) {
      std::size_t i = levels_[level].size();
      levels_[level].push_back(
          node_hash(levels_[level - 1][2 * i], levels_[level - 1][2 * i + 1]));
    }
  }
}

Digest MerkleTree::subtree_hash(std::uint64_t lo, std::uint64_t hi) const {
  std::uint64_t n = hi - lo;
  if (n == 1) return levels_[0][lo];
  if (std::has_single_bit(n) && lo % n == 0) {
    auto level = static_cast<std::size_t>(std::countr_zero(n));
    std::uint64_t idx = lo >> level;
    if (level < levels_.size() && idx < levels_[level].size()) {
      return levels_[level][idx];
    }
  }
  std::uint64_t k = split_point(n);
  return node_hash(subtree_hash(lo, lo + k), subtree_hash(lo + k, hi));
}

Digest MerkleTree::root() const {
  return size() == 0 ? empty_tree_root() : subtree_hash(0, size());
}

Result<Digest> MerkleTree::root_at(std::uint64_t at) const {
  if (at > size()) {
    return Error{ErrorCode::IndexOutOfRange, "tree size exceeds leaf count"};
  }
  return at == 0 ? empty_tree_root() : subtree_hash(0, at);
}

Result<InclusionProof> MerkleTree::inclusion_proof(std::uint64_t leaf_index) const {
  return inclusion_proof(leaf_index, size());
}

Result<InclusionProof> MerkleTree::inclusion_proof(std::uint64_t leaf_index,
                                                   std::uint64_t tree_size) const {
  if (tree_size > size() || leaf_index >= tree_size) {
    return Error{ErrorCode::IndexOutOfRange, "leaf index outside the tree"};
  }
  InclusionProof proof;
  proof.leaf_index = leaf_index;
  proof.tree_size = tree_size;
  std::uint64_t node = leaf_index;
  std::uint64_t last = tree_size - 1;
  std::size_t level = 0;
  while (last > 0) {
    std::uint64_t sibling = node ^ 1;
    if (sibling < last) {
      proof.audit_path.push_back(
          subtree_hash(sibling << level, (sibling + 1) << level));
    } else if (sibling == last) {
      // Right edge sibling may cover a partial range.
      proof.audit_path.push_back(subtree_hash(sibling << level, tree_size));
    }
    node >>= 1;
    last >>= 1;
    ++level;
  }
  return proof;
}

void MerkleTree::subproof(std::uint64_t m, std::uint64_t lo, std::uint64_t hi,
                          bool complete, std::vector<Digest>& out) const {
  // RFC 6962 SUBPROOF over the absolute leaf range [lo, hi).
  std::uint64_t n = hi - lo;
  if (m == n) {
    if (!complete) out.push_back(subtree_hash(lo, hi));
    return;
  }
  std::uint64_t k = split_point(n);
  if (m <= k) {
    subproof(m, lo, lo + k, complete, out);
    out.push_back(subtree_hash(lo + k, hi));
  } else {
    subproof(m - k, lo + k, hi, false, out);
    out.push_back(subtree_hash(lo, lo + k));
  }
}

Result<ConsistencyProof> MerkleTree::consistency_proof(std::uint64_t old_size) const {
  return consistency_proof(old_size, size());
}

Result<ConsistencyProof> MerkleTree::consistency_proof(std::uint64_t old_size,
                                                       std::uint64_t new_size) const {
  if (old_size == 0 || old_size > new_size || new_size > size()) {
    return Error{ErrorCode::IndexOutOfRange, "consistency sizes out of range"};
  }
  ConsistencyProof proof;
  proof.old_size = old_size;
  proof.new_size = new_size;
  if (old_size < new_size) {
    subproof(old_size, 0, new_size, true, proof.path);
  }
  return proof;
}

bool verify_inclusion(const Digest& expected_root, BytesView leaf,
                      const InclusionProof& proof) {
  return verify_inclusion_hash(expected_root, leaf_hash(leaf), proof);
}

bool verify_inclusion_hash(const Digest& expected_root, const Digest& leaf_hash,
                           const InclusionProof& proof) {
  if (proof.tree_size == 0 || proof.leaf_index >= proof.tree_size) return false;
  auto [inner, border] = path_shape(proof.leaf_index, proof.tree_size);
  if (proof.audit_path.size() != inner + border) return false;
  std::span<const Digest> path(proof.audit_path);
  Digest h = chain_inner(leaf_hash, path.first(inner), proof.leaf_index);
  h = chain_border_right(h, path.subspan(inner));
  return h == expected_root;
}

bool verify_consistency(const Digest& old_root, const Digest& new_root,
                        const ConsistencyProof& proof) {
  const std::uint64_t m = proof.old_size;
  const std::uint64_t n = proof.new_size;
  if (m == 0 || m > n) return false;
  if (m == n) return proof.path.empty() && old_root == new_root;
  if (proof.path.empty()) return false;

  auto [inner_full, border] = path_shape(m - 1, n);
  auto shift = static_cast<std::size_t>(std::countr_zero(m));
  std::size_t inner = inner_full - shift;

  // When the old tree is a complete subtree its root seeds the chain
  // directly; otherwise the first proof node does.
  std::span<const Digest> path(proof.path);
  Digest seed;
  if (m == std::uint64_t{1} << shift) {
    seed = old_root;
  } else {
    seed = path[0];
    path = path.subspan(1);
  }
  if (path.size() != inner + border) return false;

  const std::uint64_t mask = (m - 1) >> shift;
  Digest h1 = chain_inner_right(seed, path.first(inner), mask);
  h1 = chain_border_right(h1, path.subspan(inner));
  if (h1 != old_root) return false;

  Digest h2 = chain_inner(seed, path.first(inner), mask);
  h2 = chain_border_right(h2, path.subspan(inner));
  return h2 == new_root;
}

}  // namespace smartcert::merkle
