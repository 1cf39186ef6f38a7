#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "mst/rng.hpp"

namespace mst {

// Parameters of the fixed-point distribution: the map sends W to
// sum_k S_k^lambda2 W_k over the spacings S. lambda2 must be a root of the
// characteristic polynomial (that is exactly what makes the map preserve
// the mean), mu is the target mean, rho the contraction factor.
struct FixedPointSpec {
  int m = 0;
  std::complex<double> lambda2;
  std::complex<double> mu;
  double rho = 0.0;
};

/// Validates the root identity (residual <= 1e-10) and computes rho.
FixedPointSpec make_spec(int m, std::complex<double> lambda2,
                         std::complex<double> mu);

struct SamplePool {
  std::vector<std::complex<double>> samples;
  int generation = 0;
  std::uint64_t seed = 0;

  std::complex<double> mean() const;
  /// Mean of |y|^2 over the pool.
  double abs2_mean() const;
};

/// One application of the map to the pool: every output is
/// sum_k S_k^lambda2 W_k with fresh spacings and m members drawn uniformly
/// with replacement. With recenter (the default) the output is shifted so
/// its mean equals the input mean exactly, removing the O(1/sqrt(N))
/// random walk of the pool mean over many generations; the shift is an
/// O(1/sqrt(N)) perturbation of the law. OpenMP over outputs with derived
/// per-sample streams; output does not depend on the thread count.
SamplePool apply_T_population(const FixedPointSpec& spec, const SamplePool& pool,
                              std::uint64_t seed, bool recenter = true);

/// Serial reference implementation; byte-identical output.
SamplePool apply_T_population_serial(const FixedPointSpec& spec,
                                     const SamplePool& pool, std::uint64_t seed,
                                     bool recenter = true);

/// Pool initialized at the constant mu and iterated `generations` times.
/// Throws NotContractive unless rho < 1.
SamplePool sample_Y(const FixedPointSpec& spec, int count, int generations,
                    std::uint64_t seed);

/// Generations after which the start-distance bound rho^G drops below 5e-3.
int suggested_generations(double rho);

/// E[prod_k S_k^{a_k}] for the flat Dirichlet spacings vector:
/// Gamma(m) prod Gamma(1+a_k) / Gamma(m + sum a_k), via complex log-Gamma.
/// Requires Re(a_k) > -1.
std::complex<double> dirichlet_joint_moment(
    int m, std::span<const std::complex<double>> exponents);

/// E[S_1^a] by the finite product (m-1)!/((a+1)...(a+m-1)); the independent
/// evaluation route of dirichlet_joint_moment for one exponent.
std::complex<double> single_moment_product(int m, std::complex<double> a);

/// Complex log-Gamma (Lanczos, g = 607/128, 15 terms) with reflection.
std::complex<double> log_gamma(std::complex<double> z);

struct SecondMoments {
  double abs2 = 0.0;                 // E|Y|^2
  std::complex<double> sq;           // E[Y^2]
};

/// Closed-form second moments of the fixed point, from the linear equations
/// obtained by applying E|.|^2 and E(.)^2 to the map:
///   E|Y|^2 (1 - rho^2)            = |mu|^2 m(m-1) E[S1^l S2^conj(l)]
///   E[Y^2] (1 - m E[S1^{2l}])     = mu^2  m(m-1) E[S1^l S2^l]
SecondMoments fixed_point_second_moments(const FixedPointSpec& spec);

/// Coupled two-start contraction probe: two pools with equal means evolve
/// under shared randomness; returns the RMS coupled distance at each
/// generation 0..generations. Successive ratios estimate the per-generation
/// contraction factor (an upper-bound realization of the d2 dynamics).
std::vector<double> coupled_contraction_distances(const FixedPointSpec& spec,
                                                  int count, int generations,
                                                  double offset,
                                                  std::uint64_t seed);

/// Exact draw from the depth-d iterate of the map started at the constant mu
/// (cost m^depth); validation oracle for the population dynamics.
std::complex<double> sample_Y_exact(const FixedPointSpec& spec, int depth,
                                    RngStream& rng);

}  // namespace mst
