#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "mst/errors.hpp"
#include "mst/rng.hpp"
#include "support/stats.hpp"

TEST_CASE("streams are deterministic and split streams differ") {
  mst::RngStream a = mst::RngStream::from_seed(123);
  mst::RngStream b = mst::RngStream::from_seed(123);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  mst::RngStream base = mst::RngStream::from_seed(5);
  mst::RngStream s1 = base.split(1);
  mst::RngStream s2 = base.split(2);
  CHECK(s1.key() != s2.key());
  CHECK(s1.next_u64() != s2.next_u64());
  // splitting is pure
  CHECK(base.counter() == 0);
}

TEST_CASE("uniform doubles look uniform") {
  mst::RngStream rng = mst::RngStream::from_seed(77);
  std::vector<double> xs(20000);
  for (double& x : xs) x = rng.next_double();
  for (double x : xs) {
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  CHECK(teststat::ks_pvalue(xs, [](double x) { return x; }) > 0.01);

  // open variant never returns the endpoints
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.next_open_double();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("bounded draws are unbiased across the range") {
  mst::RngStream rng = mst::RngStream::from_seed(99);
  std::map<long, long> counts;
  const int reps = 60000;
  for (int i = 0; i < reps; ++i) counts[static_cast<long>(rng.next_below(7))] += 1;
  std::map<long, double> pmf;
  for (long v = 0; v < 7; ++v) pmf[v] = 1.0 / 7.0;
  CHECK(teststat::chi2_pmf_pvalue(counts, pmf, reps) > 0.01);
  CHECK_THROWS_AS((void)rng.next_below(0), mst::DomainError);
}

namespace {

std::map<long, double> binomial_pmf(long n, double p) {
  std::map<long, double> pmf;
  double term = std::pow(1.0 - p, static_cast<double>(n));
  for (long k = 0; k <= n; ++k) {
    pmf[k] = term;
    term *= (static_cast<double>(n - k) / (k + 1)) * (p / (1.0 - p));
  }
  return pmf;
}

}  // namespace

TEST_CASE("binomial sampler matches the exact pmf (both code paths)") {
  mst::RngStream rng = mst::RngStream::from_seed(2718);
  const int reps = 50000;

  // inversion path (n < 64)
  {
    std::map<long, long> counts;
    for (int i = 0; i < reps; ++i) counts[rng.binomial(40, 0.3)] += 1;
    CHECK(teststat::chi2_pmf_pvalue(counts, binomial_pmf(40, 0.3), reps) > 0.01);
  }
  // BTRS path (n >= 64, n*p >= 10)
  {
    std::map<long, long> counts;
    for (int i = 0; i < reps; ++i) counts[rng.binomial(200, 0.37)] += 1;
    CHECK(teststat::chi2_pmf_pvalue(counts, binomial_pmf(200, 0.37), reps) > 0.01);
  }
  // flipped branch p > 1/2
  {
    std::map<long, long> counts;
    for (int i = 0; i < reps; ++i) counts[rng.binomial(100, 0.82)] += 1;
    CHECK(teststat::chi2_pmf_pvalue(counts, binomial_pmf(100, 0.82), reps) > 0.01);
  }

  CHECK(rng.binomial(10, 0.0) == 0);
  CHECK(rng.binomial(10, 1.0) == 10);
  CHECK(rng.binomial(0, 0.4) == 0);
  CHECK_THROWS_AS((void)rng.binomial(-1, 0.5), mst::DomainError);
  CHECK_THROWS_AS((void)rng.binomial(5, 1.5), mst::DomainError);
}

TEST_CASE("shuffle produces uniform permutations") {
  mst::RngStream rng = mst::RngStream::from_seed(31415);
  std::map<long, long> counts;  // encode permutation of {0,1,2} as digits
  const int reps = 60000;
  for (int i = 0; i < reps; ++i) {
    std::vector<int> v{0, 1, 2};
    rng.shuffle(v);
    counts[v[0] * 100 + v[1] * 10 + v[2]] += 1;
  }
  std::map<long, double> pmf;
  for (long code : {12L, 21L, 102L, 120L, 201L, 210L}) pmf[code] = 1.0 / 6.0;
  CHECK(teststat::chi2_pmf_pvalue(counts, pmf, reps) > 0.01);
}
