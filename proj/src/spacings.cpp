#include "mst/spacings.hpp"

#include <algorithm>
#include <cmath>

#include "mst/errors.hpp"

namespace mst {

std::vector<double> sample_spacings(int m, RngStream& rng) {
  if (m < 2) throw DomainError("sample_spacings: m must be >= 2");
  std::vector<double> u(m - 1);
  for (double& x : u) x = rng.next_open_double();
  std::sort(u.begin(), u.end());
  std::vector<double> s(m);
  double prev = 0.0;
  for (int j = 0; j < m - 1; ++j) {
    s[j] = u[j] - prev;
    prev = u[j];
  }
  s[m - 1] = 1.0 - prev;
  return s;
}

std::vector<long> sample_composition(int m, long n_prime, RngStream& rng) {
  if (m < 2) throw DomainError("sample_composition: m must be >= 2");
  if (n_prime < 0) throw DomainError("sample_composition: n_prime must be >= 0");
  // Floyd's algorithm for a uniform (m-1)-subset of {1, ..., n_prime+m-1}.
  const long total = n_prime + m - 1;
  const long k = m - 1;
  std::vector<long> picks;
  picks.reserve(k);
  for (long j = total - k + 1; j <= total; ++j) {
    long r = static_cast<long>(rng.next_below(static_cast<std::uint64_t>(j))) + 1;
    if (std::find(picks.begin(), picks.end(), r) != picks.end()) {
      picks.push_back(j);
    } else {
      picks.push_back(r);
    }
  }
  std::sort(picks.begin(), picks.end());
  std::vector<long> out(m);
  long prev = 0;
  for (int i = 0; i < k; ++i) {
    out[i] = picks[i] - prev - 1;
    prev = picks[i];
  }
  out[m - 1] = total - prev;
  return out;
}

std::vector<long> sample_multinomial(long n_prime, std::span<const double> s,
                                     RngStream& rng) {
  if (n_prime < 0) throw DomainError("sample_multinomial: n_prime must be >= 0");
  const int m = static_cast<int>(s.size());
  if (m < 1) throw DomainError("sample_multinomial: empty cell vector");
  std::vector<long> out(m, 0);
  long remaining = n_prime;
  double mass = 1.0;
  for (int k = 0; k + 1 < m && remaining > 0; ++k) {
    double p = mass > 0.0 ? std::clamp(s[k] / mass, 0.0, 1.0) : 0.0;
    long draw = rng.binomial(remaining, p);
    out[k] = draw;
    remaining -= draw;
    mass -= s[k];
  }
  out[m - 1] = remaining;
  return out;
}

std::complex<double> complex_power(double s, std::complex<double> lam) {
  if (s < 0.0) throw NegativeBase("complex_power: negative base");
  if (s == 0.0) {
    if (lam.real() > 0.0) return {0.0, 0.0};
    throw DomainError("complex_power: 0^lam undefined for Re(lam) <= 0");
  }
  const double t = std::log(s);
  const double mod = std::exp(lam.real() * t);
  const double arg = lam.imag() * t;
  return {mod * std::cos(arg), mod * std::sin(arg)};
}

}  // namespace mst
