#include "mst/rng.hpp"

#include <cmath>

#include "mst/errors.hpp"

namespace mst {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// Stafford mix13 finalizer (the splitmix64 output function).
std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

RngStream RngStream::from_seed(std::uint64_t seed) {
  return RngStream(mix64(seed + kGamma));
}

std::uint64_t derive_stream_key(std::uint64_t key, std::uint64_t stream_id) {
  std::uint64_t x = key ^ mix64(stream_id + 0x6A09E667F3BCC909ull);
  return mix64(x + kGamma);
}

RngStream RngStream::split(std::uint64_t stream_id) const {
  return RngStream(derive_stream_key(key_, stream_id));
}

std::uint64_t RngStream::next_u64() {
  counter_ += 1;
  return mix64(key_ + counter_ * kGamma);
}

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_open_double() {
  return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw DomainError("next_below: bound must be positive");
  // Lemire's multiply-shift with rejection.
  std::uint64_t x = next_u64();
  __uint128_t m = static_cast<__uint128_t>(x) * bound;
  std::uint64_t l = static_cast<std::uint64_t>(m);
  if (l < bound) {
    std::uint64_t t = (0 - bound) % bound;
    while (l < t) {
      x = next_u64();
      m = static_cast<__uint128_t>(x) * bound;
      l = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

namespace {

long binomial_inversion(long n, double p, RngStream& rng) {
  const double q = 1.0 - p;
  double pmf = std::pow(q, static_cast<double>(n));
  double cdf = pmf;
  double u = rng.next_double();
  long k = 0;
  while (u > cdf && k < n) {
    ++k;
    pmf *= (static_cast<double>(n - k + 1) / k) * (p / q);
    cdf += pmf;
  }
  return k;
}

// BTRS (Hormann): transformed rejection with squeeze, valid for n*p >= 10.
long binomial_btrs(long n, double p, RngStream& rng) {
  const double q = 1.0 - p;
  const double spq = std::sqrt(n * p * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double vr = 0.92 - 4.2 / b;
  const double urvr = 0.86 * vr;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double lpq = std::log(p / q);
  const long mode = static_cast<long>(std::floor((n + 1) * p));
  const double h = std::lgamma(mode + 1.0) + std::lgamma(n - mode + 1.0);

  for (;;) {
    double v = rng.next_double();
    double u;
    if (v <= urvr) {
      u = v / vr - 0.43;
      return static_cast<long>(
          std::floor((2.0 * a / (0.5 - std::fabs(u)) + b) * u + c));
    }
    if (v >= vr) {
      u = rng.next_double() - 0.5;
    } else {
      u = v / vr - 0.93;
      u = (u < 0 ? -0.5 : 0.5) - u;
      v = rng.next_double() * vr;
    }
    const double us = 0.5 - std::fabs(u);
    const long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + c));
    if (k < 0 || k > n) continue;
    v = v * alpha / (a / (us * us) + b);
    if (std::log(v) <=
        h - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + (k - mode) * lpq) {
      return k;
    }
  }
}

}  // namespace

long RngStream::binomial(long n, double p) {
  if (n < 0) throw DomainError("binomial: n must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial: p must lie in [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;

  const bool flip = p > 0.5;
  const double ps = flip ? 1.0 - p : p;
  long k;
  if (n < 64 || n * ps < 10.0) {
    k = binomial_inversion(n, ps, *this);
  } else {
    k = binomial_btrs(n, ps, *this);
  }
  return flip ? n - k : k;
}

}  // namespace mst
