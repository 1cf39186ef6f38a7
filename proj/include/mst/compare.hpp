#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "mst/fixpoint.hpp"
#include "mst/recurrence.hpp"

namespace mst {

/// Empirical Wasserstein-2 distance between equal-size real samples: the
/// sorted (quantile) pairing realizes the optimal coupling for real laws.
double empirical_w2(std::span<const double> xs, std::span<const double> ys);

/// One surrogate sample 2 Re(n^lambda2 y) per pool member:
/// 2 n^sigma (cos(tau ln n) Re y - sin(tau ln n) Im y).
std::vector<double> sample_vhat(std::complex<double> lambda2, long n,
                                const SamplePool& pool);

/// N independent space-requirement draws centered by (n+1)/(H_m - 1).
std::vector<double> sample_v(int m, long n, int count, std::uint64_t seed);

struct ComparisonRow {
  long n = 0;
  double d2_hat = 0.0;
  double d2_over_n_sigma = 0.0;
  double null_d2_hat = 0.0;        // control: independent uncentered sample
  double null_d2_over_n_sigma = 0.0;
  int count = 0;
};

struct ComparisonReport {
  int m = 0;
  double sigma = 0.0;
  double tau = 0.0;
  std::uint64_t seed = 0;
  std::vector<ComparisonRow> rows;  // sorted by n
};

/// Headline experiment: empirical d2(V_n, Vhat_n) over the size grid, plus
/// the wrong-law control d2(V_n, X_n) against an independent mis-centered
/// sample. The pool supplies one surrogate sample per member, so sample
/// counts match automatically.
ComparisonReport convergence_report(int m, std::span<const long> n_grid,
                                    std::uint64_t seed,
                                    const FixedPointSpec& spec,
                                    const SamplePool& pool);

struct OscillationRow {
  long n = 0;
  double exact_v_over_n_sigma = 0.0;
  double model = 0.0;     // 2|mu| cos(tau ln n + arg mu)
  double rel_err = 0.0;   // |exact - model| relative to the amplitude 2|mu|
};

std::vector<OscillationRow> oscillation_report(const MomentTable& table,
                                               std::complex<double> lambda2,
                                               std::complex<double> mu_hat,
                                               std::span<const long> n_grid);

/// Local maxima of mean_V[n]/n^sigma for n in (lo, hi); consecutive peaks
/// should be 2*pi/tau apart in ln n.
std::vector<long> detect_peaks(const MomentTable& table, double sigma, long lo,
                               long hi);

}  // namespace mst
