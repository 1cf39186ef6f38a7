#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mst/rng.hpp"

namespace mst {

/// Spacings of m-1 independent Uniform(0,1) draws: the m gaps between the
/// order statistics (with 0 and 1 as end posts). Nonnegative, sum 1; each
/// coordinate is marginally Beta(1, m-1).
std::vector<double> sample_spacings(int m, RngStream& rng);

/// Uniform over all m-tuples of nonnegative integers summing to n_prime
/// (stars and bars: a uniform (m-1)-subset of [n_prime+m-1]).
std::vector<long> sample_composition(int m, long n_prime, RngStream& rng);

/// Multinomial(n_prime, s) via sequential binomial conditioning. Mixing over
/// s ~ spacings reproduces the uniform composition law.
std::vector<long> sample_multinomial(long n_prime, std::span<const double> s,
                                     RngStream& rng);

/// s^lam = exp(lam ln s) for s > 0; 0 when s == 0 and Re lam > 0.
/// Throws DomainError (s == 0, Re lam <= 0) or NegativeBase (s < 0).
std::complex<double> complex_power(double s, std::complex<double> lam);

}  // namespace mst
