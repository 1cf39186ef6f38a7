#include "mst/tree.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mst/errors.hpp"
#include "mst/spacings.hpp"

namespace mst {

SearchTree::SearchTree(int m) : m_(m) {
  if (m < 2) throw DomainError("SearchTree: m must be >= 2");
}

void SearchTree::insert(std::int64_t key) {
  if (!root_) {
    root_ = std::make_unique<Node>();
    root_->keys.push_back(key);
    nonempty_ = 1;  // the external root becomes a 1-key node; total unchanged
    ++keys_;
    if (root_->full(m_)) {
      root_->children.resize(m_);
      total_ += m_;
    }
    return;
  }

  Node* node = root_.get();
  for (;;) {
    auto it = std::lower_bound(node->keys.begin(), node->keys.end(), key);
    if (it != node->keys.end() && *it == key) {
      throw DuplicateKey("insert: duplicate key " + std::to_string(key));
    }
    if (!node->full(m_)) {
      node->keys.insert(it, key);
      ++keys_;
      if (node->full(m_)) {
        node->children.resize(m_);
        total_ += m_;
      }
      return;
    }
    // Full node: descend into the gap the key falls in.
    auto idx = static_cast<std::size_t>(it - node->keys.begin());
    auto& child = node->children[idx];
    if (!child) {
      child = std::make_unique<Node>();
      child->keys.push_back(key);
      ++nonempty_;  // empty slot turns into a 1-key node; total unchanged
      ++keys_;
      if (child->full(m_)) {
        child->children.resize(m_);
        total_ += m_;
      }
      return;
    }
    node = child.get();
  }
}

namespace {

long recount_node(const SearchTree::Node* node, int m) {
  if (node == nullptr) return 1;  // empty slot
  long total = 1;
  if (!node->children.empty()) {
    for (const auto& c : node->children) total += recount_node(c.get(), m);
  }
  return total;
}

void inorder_node(const SearchTree::Node* node, std::vector<std::int64_t>& out) {
  if (node == nullptr) return;
  const std::size_t nk = node->keys.size();
  for (std::size_t i = 0; i <= nk; ++i) {
    if (!node->children.empty()) inorder_node(node->children[i].get(), out);
    if (i < nk) out.push_back(node->keys[i]);
  }
}

void dump_node(const SearchTree::Node* node, int depth, std::ostream& os) {
  for (int i = 0; i < depth; ++i) os << "  ";
  if (node == nullptr) {
    os << "()\n";
    return;
  }
  os << "[";
  for (std::size_t i = 0; i < node->keys.size(); ++i) {
    if (i) os << " ";
    os << node->keys[i];
  }
  os << "]\n";
  for (const auto& c : node->children) dump_node(c.get(), depth + 1, os);
}

}  // namespace

long SearchTree::recount() const { return recount_node(root_.get(), m_); }

std::vector<std::int64_t> SearchTree::inorder_keys() const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(keys_));
  inorder_node(root_.get(), out);
  return out;
}

void SearchTree::dump(std::ostream& os) const { dump_node(root_.get(), 0, os); }

SearchTree build_tree(int m, std::span<const std::int64_t> keys) {
  SearchTree t(m);
  for (std::int64_t k : keys) t.insert(k);
  return t;
}

long space_requirement(const SearchTree& tree) { return tree.total_nodes(); }

long sample_space(int m, long n, RngStream rng) {
  if (n < 0) throw DomainError("sample_space: n must be >= 0");
  std::vector<std::int64_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  rng.shuffle(perm);
  SearchTree t(m);
  for (std::int64_t k : perm) t.insert(k);
  return t.total_nodes();
}

std::vector<long> sample_space_batch_serial(int m, long n, int count,
                                            std::uint64_t seed) {
  std::vector<long> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        sample_space(m, n, RngStream(derive_stream_key(seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

std::vector<long> sample_space_batch(int m, long n, int count, std::uint64_t seed) {
  std::vector<long> out(static_cast<std::size_t>(count));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        sample_space(m, n, RngStream(derive_stream_key(seed, static_cast<std::uint64_t>(i))));
  }
  return out;
}

long sample_space_recursive(int m, long n, RngStream& rng) {
  if (m < 2) throw DomainError("sample_space_recursive: m must be >= 2");
  if (n < 0) throw DomainError("sample_space_recursive: n must be >= 0");
  long nodes = 0;
  std::vector<long> pending{n};
  while (!pending.empty()) {
    long v = pending.back();
    pending.pop_back();
    nodes += 1;
    if (v >= m - 1) {
      std::vector<long> parts = sample_composition(m, v - (m - 1), rng);
      pending.insert(pending.end(), parts.begin(), parts.end());
    }
  }
  return nodes;
}

std::map<long, double> exact_distribution(int m, int n) {
  if (n < 0) throw DomainError("exact_distribution: n must be >= 0");
  if (n > 10) throw TooLarge("exact_distribution: n! enumeration capped at n = 10");
  std::vector<std::int64_t> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 1);
  std::map<long, long> counts;
  double total = 0.0;
  do {
    SearchTree t(m);
    for (std::int64_t k : perm) t.insert(k);
    counts[t.total_nodes()] += 1;
    total += 1.0;
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::map<long, double> pmf;
  for (auto [value, c] : counts) pmf[value] = static_cast<double>(c) / total;
  return pmf;
}

}  // namespace mst
