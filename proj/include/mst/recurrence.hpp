#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace mst {

struct MuFit {
  std::complex<double> mu_hat;
  double max_rel_residual = 0.0;  // relative to the oscillation amplitude 2|mu|
  long lo = 0, hi = 0;
};

// Exact first moments of the space requirement, the centered sequence, and
// (optionally) the fitted coefficient of the oscillatory term.
struct MomentTable {
  int m = 0;
  double harmonic = 0.0;  // H_m
  std::vector<double> mean_X;  // index 0..N
  std::vector<double> mean_V;  // mean_X[n] - (n+1)/(H_m - 1)
  std::optional<MuFit> fit;
};

double harmonic_number(int m);

/// Solves a_n = b_n + m / C(n,m-1) * sum_{j=0}^{n-(m-1)} C(n-1-j,m-2) a_j
/// for n in [m-1, N] with the given initial values a_0..a_{m-2}.
/// O(N*m) time via Pascal-rule updates of scaled partial sums held in
/// compensated (double-double) accumulators; no binomial ever materializes.
std::vector<double> transfer_solve(int m, const std::function<double(long)>& b,
                                   std::span<const double> init, long N);

/// mean_X via transfer_solve with b == 1 and unit initial conditions;
/// also fills mean_V. N capped at 10^6.
MomentTable exact_mean_X(int m, long N);

/// P[J_1 = j] for the uniform composition of n-(m-1) into m parts:
/// C(n-1-j, m-2) / C(n, m-1), computed multiplicatively.
double marginal_J1(int m, long n, long j);

/// Least-squares fit of mean_V[n] ~ 2 n^sigma (cos(tau ln n) Re - sin(tau ln n) Im)
/// over [lo, hi] (normalized by n^sigma, so the 2x2 Gram matrix is scale-free).
/// Throws IllConditioned if the Gram condition number exceeds 1e8 and
/// OutOfRange for a bad fit window (lo must be >= 1000).
MuFit estimate_mu(const MomentTable& table, std::complex<double> lambda2, long lo,
                  long hi);

}  // namespace mst
