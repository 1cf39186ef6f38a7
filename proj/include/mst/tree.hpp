#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

#include "mst/rng.hpp"

namespace mst {

// m-ary search tree. Every node stores 1..m-1 keys in increasing order; a
// node obtains its m children (initially all empty) at the moment it fills
// to m-1 keys. Empty slots count as nodes: the space requirement is the
// total of nonempty nodes and empty slots, and the empty tree counts as 1.
class SearchTree {
 public:
  struct Node {
    std::vector<std::int64_t> keys;
    std::vector<std::unique_ptr<Node>> children;  // size m once full, else empty
    bool full(int m) const { return static_cast<int>(keys.size()) == m - 1; }
  };

  explicit SearchTree(int m);

  /// Inserts per the top-down rules; throws DuplicateKey.
  void insert(std::int64_t key);

  int branching() const { return m_; }
  long total_nodes() const { return total_; }          // empty + nonempty
  long nonempty_nodes() const { return nonempty_; }
  long key_count() const { return keys_; }
  const Node* root() const { return root_.get(); }

  /// Recounts total nodes by traversal (bookkeeping cross-check).
  long recount() const;

  /// Stored keys in symmetric order (sorted if the invariants hold).
  std::vector<std::int64_t> inorder_keys() const;

  /// One node per line: depth-indented key list, '()' for empty slots.
  void dump(std::ostream& os) const;

 private:
  int m_;
  std::unique_ptr<Node> root_;
  long total_ = 1;  // the empty tree is a single external node
  long nonempty_ = 0;
  long keys_ = 0;
};

SearchTree build_tree(int m, std::span<const std::int64_t> keys);

long space_requirement(const SearchTree& tree);

/// Space requirement of the tree built from a uniformly random permutation
/// of [n]. Pure function of (m, n, stream state).
long sample_space(int m, long n, RngStream rng);

/// N independent draws of sample_space with per-draw substreams derived from
/// seed. Identical output regardless of thread count.
std::vector<long> sample_space_batch(int m, long n, int count, std::uint64_t seed);

/// Serial reference for sample_space_batch (same substreams, same output).
std::vector<long> sample_space_batch_serial(int m, long n, int count,
                                            std::uint64_t seed);

/// Direct simulation of the subtree-size recursion: split n-(m-1) keys by a
/// uniform composition and recurse. Same law as sample_space.
long sample_space_recursive(int m, long n, RngStream& rng);

/// Exact law of the space requirement by enumerating all n! insertion
/// orders. Throws TooLarge for n > 10.
std::map<long, double> exact_distribution(int m, int n);

}  // namespace mst
