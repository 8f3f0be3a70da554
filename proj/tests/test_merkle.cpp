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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "merkle_oracle.hpp"
#include "smartcert/merkle.hpp"

using namespace smartcert;
using namespace smartcert::merkle;

namespace {

// Known-answer inputs used across certificate transparency test suites.
const std::vector<std::string> kKatInputsHex = {
    "",
    "00",
    "10",
    "2021",
    "3031",
    "40414243",
    "5051525354555657",
    "606162636465666768696a6b6c6d6e6f",
};

const std::vector<std::string> kKatRootsHex = {
    "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d",
    "fac54203e7cc696cf0dfcb42c92a1d9dbaf70ad9e621f4bd8d98662f00e3c125",
    "aeb6bcfe274b70a14fb067a5e5578264db0fa9b51af5e0ba159158f329e06e77",
    "d37ee418976dd95753c1c73862b9398fa2a2cf9b4ff0fdfe8b30cd95209614b7",
    "4e3bbb1f7b478dcfe71fb631631519a3bca12c9aefca1612bfce4c13a86264d4",
    "76e67dadbcdf1e10e1b74ddc608abd2f98dfb16fbce75277b5232a127f2087ef",
    "ddb89be403809e325750d3d263cd78929c2942b7942a34b77e122c9594a74c8c",
    "5dc9da79a70659a9ad559cb701ded9a2ab9d823aad2f4960cfe370eff4604328",
};

std::vector<Bytes> kat_leaves() {
  std::vector<Bytes> out;
  for (const auto& hex : kKatInputsHex) out.push_back(from_hex(hex).value());
  return out;
}

std::vector<Bytes> synthetic_leaves(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Bytes> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> len(0, 48);
    Bytes leaf(len(rng));
    for (auto& b : leaf) b = static_cast<std::uint8_t>(rng());
    out.push_back(std::move(leaf));
  }
  return out;
}

MerkleTree build_tree(const std::vector<Bytes>& leaves) {
  MerkleTree tree;
  for (const auto& leaf : leaves) tree.append(leaf);
  return tree;
}

}  // namespace

TEST_CASE("empty tree root is the hash of the empty string") {
  MerkleTree tree;
  CHECK(tree.root().hex() ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(empty_tree_root() == tree.root());
}

TEST_CASE("leaf hash uses the 0x00 domain prefix") {
  CHECK(leaf_hash(to_bytes("")).hex() ==
        "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d");
  CHECK(leaf_hash(to_bytes("a")).hex() ==
        "022a6979e6dab7aa5ae4c3e5e45f7e977112a7e63593820dbec1ec738a24f93c");
  // Distinct from a plain hash and from the node prefix.
  CHECK(leaf_hash(to_bytes("a")) != crypto::sha256(to_bytes("a")));
  Digest l = leaf_hash(to_bytes("x"));
  CHECK(node_hash(l, l) != leaf_hash(to_bytes("x")));
}

TEST_CASE("three leaf tree matches the reference root") {
  MerkleTree tree;
  tree.append(to_bytes("a"));
  tree.append(to_bytes("b"));
  tree.append(to_bytes("c"));
  CHECK(tree.root().hex() ==
        "36642e73c2540ab121e3a6bf9545b0a24982cd830eb13d3cd19de3ce6c021ec1");
}

TEST_CASE("incremental known-answer roots") {
  MerkleTree tree;
  auto leaves = kat_leaves();
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    tree.append(leaves[i]);
    CHECK(tree.root().hex() == kKatRootsHex[i]);
  }
  // root_at replays every prefix of the final tree.
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    CHECK(tree.root_at(i + 1).value().hex() == kKatRootsHex[i]);
  }
  CHECK(tree.root_at(0).value() == empty_tree_root());
  CHECK(!tree.root_at(leaves.size() + 1).ok());
}

TEST_CASE("tree root equals brute force oracle for sizes 0..256") {
  auto leaves = synthetic_leaves(256, 0xC0FFEE);
  MerkleTree tree;
  CHECK(tree.root() == oracle::root({}));
  for (std::size_t n = 1; n <= leaves.size(); ++n) {
    tree.append(leaves[n - 1]);
    CHECK(tree.root() == oracle::prefix_root(leaves, n));
  }
}

TEST_CASE("inclusion proofs verify for every leaf and size up to 256") {
  auto leaves = synthetic_leaves(256, 0xBEEF);
  MerkleTree tree = build_tree(leaves);
  std::mt19937_64 rng(99);
  for (std::size_t n = 1; n <= leaves.size(); ++n) {
    Digest root = tree.root_at(n).value();
    // Exhaustive up to 64 leaves, sampled beyond that to keep runtime flat.
    std::size_t step = n <= 64 ? 1 : (n / 17 + 1);
    for (std::size_t i = 0; i < n; i += step) {
      auto proof = tree.inclusion_proof(i, n).value();
      CHECK(proof.leaf_index == i);
      CHECK(proof.tree_size == n);
      CHECK(verify_inclusion(root, leaves[i], proof));
    }
    std::size_t i = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    auto proof = tree.inclusion_proof(i, n).value();
    CHECK(verify_inclusion(root, leaves[i], proof));
  }
}

TEST_CASE("inclusion proof rejects out of range queries") {
  auto leaves = synthetic_leaves(8, 3);
  MerkleTree tree = build_tree(leaves);
  CHECK(!tree.inclusion_proof(8).ok());
  CHECK(!tree.inclusion_proof(0, 9).ok());
  CHECK(!tree.inclusion_proof(5, 5).ok());
  CHECK(tree.inclusion_proof(8).code() == ErrorCode::IndexOutOfRange);
}

TEST_CASE("inclusion proof mutations are rejected") {
  auto leaves = synthetic_leaves(64, 0xDADA);
  MerkleTree tree = build_tree(leaves);
  Digest root = tree.root();
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::size_t> pick_leaf(0, leaves.size() - 1);

  int checked = 0;
  while (checked < 1000) {
    std::size_t i = pick_leaf(rng);
    auto proof = tree.inclusion_proof(i).value();
    switch (checked % 5) {
      case 0: {
        // Flip one bit somewhere on the audit path.
        auto mutated = proof;
        std::size_t node =
            std::uniform_int_distribution<std::size_t>(0, mutated.audit_path.size() - 1)(rng);
        std::size_t bit = std::uniform_int_distribution<std::size_t>(0, 255)(rng);
        mutated.audit_path[node].bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        CHECK(!verify_inclusion(root, leaves[i], mutated));
        break;
      }
      case 1: {
        auto mutated = proof;
        mutated.leaf_index = (mutated.leaf_index + 1) % mutated.tree_size;
        CHECK(!verify_inclusion(root, leaves[i], mutated));
        break;
      }
      case 2: {
        auto mutated = proof;
        mutated.audit_path.pop_back();
        CHECK(!verify_inclusion(root, leaves[i], mutated));
        break;
      }
      case 3: {
        auto mutated = proof;
        mutated.audit_path.push_back(leaf_hash(to_bytes("extra")));
        CHECK(!verify_inclusion(root, leaves[i], mutated));
        break;
      }
      case 4: {
        // Proof for leaf i must not authenticate a different leaf.
        std::size_t j = (i + 1) % leaves.size();
        CHECK(!verify_inclusion(root, leaves[j], proof));
        break;
      }
    }
    ++checked;
  }
}

TEST_CASE("consistency proofs verify for every size pair up to 64") {
  auto leaves = synthetic_leaves(64, 0xFEED);
  MerkleTree tree = build_tree(leaves);
  for (std::size_t m = 1; m <= leaves.size(); ++m) {
    Digest old_root = tree.root_at(m).value();
    for (std::size_t n = m; n <= leaves.size(); ++n) {
      Digest new_root = tree.root_at(n).value();
      auto proof = tree.consistency_proof(m, n).value();
      CHECK(proof.old_size == m);
      CHECK(proof.new_size == n);
      CHECK(verify_consistency(old_root, new_root, proof));
    }
  }
}

TEST_CASE("consistency proof rejects invalid ranges") {
  auto leaves = synthetic_leaves(8, 5);
  MerkleTree tree = build_tree(leaves);
  CHECK(!tree.consistency_proof(0, 4).ok());
  CHECK(!tree.consistency_proof(5, 4).ok());
  CHECK(!tree.consistency_proof(4, 9).ok());
  CHECK(tree.consistency_proof(0, 4).code() == ErrorCode::IndexOutOfRange);
}

TEST_CASE("consistency proof mutations are rejected") {
  auto leaves = synthetic_leaves(64, 0xACED);
  MerkleTree tree = build_tree(leaves);
  std::mt19937_64 rng(4321);
  std::uniform_int_distribution<std::size_t> pick(1, leaves.size());

  int checked = 0;
  while (checked < 1000) {
    std::size_t m = pick(rng);
    std::size_t n = pick(rng);
    if (m > n) std::swap(m, n);
    Digest old_root = tree.root_at(m).value();
    Digest new_root = tree.root_at(n).value();
    auto proof = tree.consistency_proof(m, n).value();

    switch (checked % 4) {
      case 0: {
        if (proof.path.empty()) {
          // m == n or m is a complete prefix; mutate a root instead.
          Digest bad = new_root;
          bad.bytes[0] ^= 0x01;
          CHECK(!verify_consistency(old_root, bad, proof));
        } else {
          auto mutated = proof;
          std::size_t node =
              std::uniform_int_distribution<std::size_t>(0, mutated.path.size() - 1)(rng);
          std::size_t bit = std::uniform_int_distribution<std::size_t>(0, 255)(rng);
          mutated.path[node].bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
          CHECK(!verify_consistency(old_root, new_root, mutated));
        }
        break;
      }
      case 1: {
        Digest bad_old = old_root;
        bad_old.bytes[31] ^= 0x80;
        CHECK(!verify_consistency(bad_old, new_root, proof));
        break;
      }
      case 2: {
        auto mutated = proof;
        mutated.path.push_back(empty_tree_root());
        CHECK(!verify_consistency(old_root, new_root, mutated));
        break;
      }
      case 3: {
        if (proof.path.empty()) {
          Digest bad = old_root;
          bad.bytes[7] ^= 0x10;
          CHECK(!verify_consistency(bad, new_root, proof));
        } else {
          auto mutated = proof;
          mutated.path.pop_back();
          CHECK(!verify_consistency(old_root, new_root, mutated));
        }
        break;
      }
    }
    ++checked;
  }
}

TEST_CASE("identical sizes need an empty path and equal roots") {
  auto leaves = synthetic_leaves(9, 11);
  MerkleTree tree = build_tree(leaves);
  auto proof = tree.consistency_proof(9, 9).value();
  CHECK(proof.path.empty());
  CHECK(verify_consistency(tree.root(), tree.root(), proof));
  Digest other = tree.root_at(8).value();
  CHECK(!verify_consistency(other, tree.root(), proof));
}

TEST_CASE("verify_inclusion_hash accepts precomputed leaf hashes") {
  auto leaves = synthetic_leaves(33, 21);
  MerkleTree tree = build_tree(leaves);
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    auto proof = tree.inclusion_proof(i).value();
    CHECK(verify_inclusion_hash(tree.root(), leaf_hash(leaves[i]), proof));
    CHECK(!verify_inclusion_hash(tree.root(), crypto::sha256(leaves[i]), proof));
  }
}
