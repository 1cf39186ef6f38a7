#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "mst/errors.hpp"
#include "mst/rng.hpp"
#include "mst/tree.hpp"
#include "support/oracles.hpp"

namespace {

const std::vector<std::int64_t> kFigureKeys = {10, 7, 12, 4, 1, 8, 5, 6,
                                               9, 14, 11, 2, 15, 13, 3};

}  // namespace

TEST_CASE("15-key sequence has space requirement 13 exactly for m=4") {
  mst::SearchTree t = mst::build_tree(4, kFigureKeys);
  CHECK(mst::space_requirement(t) == 13);
  CHECK(t.recount() == 13);
  for (int m : {3, 5, 6, 7, 8}) {
    mst::SearchTree other = mst::build_tree(m, kFigureKeys);
    CHECK(mst::space_requirement(other) != 13);
  }
}

TEST_CASE("boundary laws") {
  // X_j = 1 for j <= m-2 and X_{m-1} = m+1
  for (int m = 3; m <= 30; ++m) {
    std::vector<std::int64_t> keys(static_cast<std::size_t>(m - 1));
    std::iota(keys.begin(), keys.end(), 1);
    for (int j = 0; j <= m - 2; ++j) {
      mst::SearchTree t = mst::build_tree(
          m, std::span<const std::int64_t>(keys.data(), static_cast<std::size_t>(j)));
      CHECK(mst::space_requirement(t) == 1);
    }
    mst::SearchTree full = mst::build_tree(m, keys);
    CHECK(mst::space_requirement(full) == m + 1);
  }
}

TEST_CASE("duplicate keys are rejected") {
  std::vector<std::int64_t> dup = {5, 2, 8, 2};
  CHECK_THROWS_AS((void)mst::build_tree(3, dup), mst::DuplicateKey);
  // duplicate already sitting in an ancestor node
  std::vector<std::int64_t> dup2 = {2, 1, 5, 9, 2};
  CHECK_THROWS_AS((void)mst::build_tree(3, dup2), mst::DuplicateKey);
}

TEST_CASE("inorder traversal is sorted; bookkeeping recount matches") {
  mst::RngStream rng = mst::RngStream::from_seed(7);
  for (int rep = 0; rep < 40; ++rep) {
    const int m = 2 + static_cast<int>(rng.next_below(7));
    const long n = static_cast<long>(rng.next_below(200));
    std::vector<std::int64_t> keys(static_cast<std::size_t>(n));
    std::iota(keys.begin(), keys.end(), 1);
    rng.shuffle(keys);
    mst::SearchTree t = mst::build_tree(m, keys);

    std::vector<std::int64_t> inorder = t.inorder_keys();
    CHECK(static_cast<long>(inorder.size()) == n);
    CHECK(std::is_sorted(inorder.begin(), inorder.end()));
    CHECK(t.recount() == t.total_nodes());
    CHECK(t.key_count() == n);
  }
}

TEST_CASE("insertion order matters for the space requirement") {
  // two orders of the same key set with different node counts (m = 4)
  std::vector<std::int64_t> base(9);
  std::iota(base.begin(), base.end(), 1);
  mst::RngStream rng = mst::RngStream::from_seed(99);
  const long first = mst::space_requirement(mst::build_tree(4, base));
  bool found_different = false;
  std::vector<std::int64_t> perm = base;
  for (int rep = 0; rep < 200 && !found_different; ++rep) {
    rng.shuffle(perm);
    found_different = mst::space_requirement(mst::build_tree(4, perm)) != first;
  }
  CHECK(found_different);
}

TEST_CASE("sample_space basic laws and determinism") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 12345ull}) {
    CHECK(mst::sample_space(5, 0, mst::RngStream::from_seed(seed)) == 1);
    CHECK(mst::sample_space(3, 2, mst::RngStream::from_seed(seed)) == 4);
    // n = 3, m = 3: every permutation gives the full root plus one split
    CHECK(mst::sample_space(3, 3, mst::RngStream::from_seed(seed)) == 4);
  }
  const long a = mst::sample_space(27, 500, mst::RngStream::from_seed(42));
  const long b = mst::sample_space(27, 500, mst::RngStream::from_seed(42));
  const long c = mst::sample_space(27, 500, mst::RngStream::from_seed(43));
  CHECK(a == b);
  CHECK(a != c);  // almost surely
}

TEST_CASE("parallel batch kernel equals the serial reference") {
  std::vector<long> par = mst::sample_space_batch(7, 300, 500, 2024);
  std::vector<long> ser = mst::sample_space_batch_serial(7, 300, 500, 2024);
  CHECK(par == ser);
}

TEST_CASE("exact_distribution small laws") {
  std::map<long, double> d33 = mst::exact_distribution(3, 3);
  REQUIRE(d33.size() == 1);
  CHECK(d33.at(4) == doctest::Approx(1.0));

  std::map<long, double> d42 = mst::exact_distribution(4, 2);
  REQUIRE(d42.size() == 1);
  CHECK(d42.at(1) == doctest::Approx(1.0));

  double total = 0.0;
  for (auto [v, p] : mst::exact_distribution(3, 7)) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS((void)mst::exact_distribution(3, 11), mst::TooLarge);
}

TEST_CASE("permutation law equals the composition-split law (small n)") {
  // the two constructions of the space requirement agree in distribution
  for (int m : {3, 4, 5}) {
    for (int n = m - 1; n <= 8; ++n) {
      std::map<long, double> perm_law = mst::exact_distribution(m, n);
      std::map<long, double> rec_law = testoracle::law_by_recursion(m, n);
      REQUIRE(perm_law.size() == rec_law.size());
      for (const auto& [value, p] : perm_law) {
        REQUIRE(rec_law.count(value) == 1);
        CHECK(rec_law.at(value) == doctest::Approx(p).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("recursive-splitting sampler hits the exact law on a point mass") {
  mst::RngStream rng = mst::RngStream::from_seed(5);
  for (int rep = 0; rep < 50; ++rep) {
    CHECK(mst::sample_space_recursive(3, 3, rng) == 4);
    CHECK(mst::sample_space_recursive(5, 2, rng) == 1);
  }
}
