#pragma once

#include <cstdint>
#include <vector>

namespace mst {

// Counter-based random stream (splitmix64 output function over a keyed
// counter). Identical (key, counter) pairs produce identical output on
// every platform; substreams are derived by rekeying, so parallel workers
// can draw from disjoint streams without coordination.
class RngStream {
 public:
  RngStream() : RngStream(0) {}
  explicit RngStream(std::uint64_t key) : key_(key) {}

  static RngStream from_seed(std::uint64_t seed);

  /// Derives an independent substream. Pure: does not advance this stream.
  RngStream split(std::uint64_t stream_id) const;

  std::uint64_t next_u64();

  /// Uniform on [0,1), 53-bit resolution.
  double next_double();

  /// Uniform on (0,1), strictly positive (safe under log).
  double next_open_double();

  /// Uniform integer in [0, bound), unbiased. bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

  /// Binomial(n, p) draw. Inverse-CDF walk for small n or small n*p,
  /// otherwise the BTRS transformed-rejection sampler.
  long binomial(long n, double p);

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// Substream key derivation as a free function (used by parallel kernels).
std::uint64_t derive_stream_key(std::uint64_t key, std::uint64_t stream_id);

}  // namespace mst
