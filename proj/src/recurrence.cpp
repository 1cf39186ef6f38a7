#include "mst/recurrence.hpp"

#include <cmath>
#include <string>

#include "mst/dd.hpp"
#include "mst/errors.hpp"

namespace mst {

double harmonic_number(int m) {
  if (m < 1) throw DomainError("harmonic_number: m must be >= 1");
  DD h(0.0);
  for (int k = m; k >= 1; --k) h = dd_add(h, 1.0 / static_cast<double>(k));
  return h.value();
}

// Scaled partial sums: with T_t(n) = sum_{j=0}^{n-(m-1)} C(n-1-j,t) a_j and
// V_t(n) = T_t(n)/C(n,t+1), Pascal's rule gives
//   V_t(n+1) = ((n-t) V_t(n) + (t+1) V_{t-1}(n)) / (n+1)
//              + C(m-2,t) a_{n-m+2} / C(n+1,t+1),
// and the recurrence reads a_n = b_n + m V_{m-2}(n). Every V_t stays O(max a),
// so no intermediate overflows or underflows regardless of m and N.
std::vector<double> transfer_solve(int m, const std::function<double(long)>& b,
                                   std::span<const double> init, long N) {
  if (m < 2) throw DomainError("transfer_solve: m must be >= 2");
  if (static_cast<int>(init.size()) != m - 1) {
    throw SizeMismatch("transfer_solve: need exactly m-1 initial values");
  }
  if (N < m - 1) throw DomainError("transfer_solve: N must be >= m-1");

  std::vector<double> a(static_cast<std::size_t>(N) + 1, 0.0);
  for (int j = 0; j < m - 1; ++j) a[static_cast<std::size_t>(j)] = init[j];

  const int levels = m - 1;  // t = 0..m-2
  std::vector<DD> V(levels);
  std::vector<DD> invc(levels);   // 1/C(n, t+1)
  std::vector<double> pas(levels);  // C(m-2, t)
  pas[0] = 1.0;
  for (int t = 1; t < levels; ++t) {
    pas[t] = pas[t - 1] * static_cast<double>(m - 1 - t) / static_cast<double>(t);
  }

  long n = m - 1;
  {
    // C(m-1, t+1) by running product; exact in double for m <= 256? No: it
    // may round for very large m, but the scaled scheme only needs it as a
    // floating start value.
    double binom = 1.0;  // C(m-1, 1) after first step
    for (int t = 0; t < levels; ++t) {
      binom = (t == 0) ? static_cast<double>(m - 1)
                       : binom * static_cast<double>(m - 1 - t) / static_cast<double>(t + 1);
      invc[t] = DD(1.0 / binom);
      V[t] = dd_mul(invc[t], pas[t] * a[0]);
    }
  }
  a[static_cast<std::size_t>(n)] = b(n) + static_cast<double>(m) * V[levels - 1].value();

  while (n < N) {
    const double a_new = a[static_cast<std::size_t>(n - m + 2)];
    const double np1 = static_cast<double>(n + 1);
    for (int t = levels - 1; t >= 1; --t) {
      DD invc_next = dd_mul(invc[t], (static_cast<double>(n - t)) / np1);
      DD mixed = dd_add(dd_mul(V[t], static_cast<double>(n - t)),
                        dd_mul(V[t - 1], static_cast<double>(t + 1)));
      V[t] = dd_add(dd_div(mixed, np1), dd_mul(invc_next, pas[t] * a_new));
      invc[t] = invc_next;
    }
    invc[0] = dd_mul(invc[0], static_cast<double>(n) / np1);
    V[0] = dd_div(dd_add(dd_mul(V[0], static_cast<double>(n)), DD(a_new)), np1);
    ++n;
    a[static_cast<std::size_t>(n)] = b(n) + static_cast<double>(m) * V[levels - 1].value();
  }
  return a;
}

MomentTable exact_mean_X(int m, long N) {
  if (N > 1000000) throw TooLarge("exact_mean_X: N capped at 10^6");
  MomentTable t;
  t.m = m;
  t.harmonic = harmonic_number(m);
  if (N < m - 1) {
    // Below the first recurrence index everything is the initial condition.
    t.mean_X.assign(static_cast<std::size_t>(N) + 1, 1.0);
  } else {
    std::vector<double> init(static_cast<std::size_t>(m - 1), 1.0);
    t.mean_X = transfer_solve(m, [](long) { return 1.0; }, init, N);
  }
  const double c = 1.0 / (t.harmonic - 1.0);
  t.mean_V.resize(t.mean_X.size());
  for (std::size_t n = 0; n < t.mean_X.size(); ++n) {
    t.mean_V[n] = t.mean_X[n] - c * (static_cast<double>(n) + 1.0);
  }
  return t;
}

double marginal_J1(int m, long n, long j) {
  if (m < 2) throw DomainError("marginal_J1: m must be >= 2");
  if (n < m - 1) throw OutOfRange("marginal_J1: n must be >= m-1");
  const long n_prime = n - (m - 1);
  if (j < 0 || j > n_prime) {
    throw OutOfRange("marginal_J1: j must lie in [0, n-(m-1)]");
  }
  // p(0) = (m-1)/n, p(i+1)/p(i) = (n-i-m+1)/(n-i-1)
  double p = static_cast<double>(m - 1) / static_cast<double>(n);
  for (long i = 0; i < j; ++i) {
    p *= static_cast<double>(n - i - m + 1) / static_cast<double>(n - i - 1);
  }
  return p;
}

MuFit estimate_mu(const MomentTable& table, std::complex<double> lambda2, long lo,
                  long hi) {
  if (lo < 1000) throw OutOfRange("estimate_mu: fit range must start at n >= 1000");
  if (hi <= lo || hi >= static_cast<long>(table.mean_V.size())) {
    throw OutOfRange("estimate_mu: fit range [" + std::to_string(lo) + "," +
                     std::to_string(hi) + "] not inside the table");
  }
  const double sigma = lambda2.real();
  const double tau = lambda2.imag();

  // Normalized model: mean_V[n]/n^sigma = 2 cos(tau ln n) Re - 2 sin(tau ln n) Im.
  DD g00(0.0), g01(0.0), g11(0.0), r0(0.0), r1(0.0);
  for (long n = lo; n <= hi; ++n) {
    const double ln = std::log(static_cast<double>(n));
    const double y = table.mean_V[static_cast<std::size_t>(n)] * std::exp(-sigma * ln);
    const double x0 = 2.0 * std::cos(tau * ln);
    const double x1 = -2.0 * std::sin(tau * ln);
    g00 = dd_add(g00, x0 * x0);
    g01 = dd_add(g01, x0 * x1);
    g11 = dd_add(g11, x1 * x1);
    r0 = dd_add(r0, x0 * y);
    r1 = dd_add(r1, x1 * y);
  }
  const double A = g00.value(), B = g01.value(), C = g11.value();
  // Eigenvalues of the symmetric 2x2 Gram matrix.
  const double tr = A + C;
  const double disc = std::sqrt(std::max(0.0, (A - C) * (A - C) + 4.0 * B * B));
  const double emax = 0.5 * (tr + disc);
  const double emin = 0.5 * (tr - disc);
  if (!(emin > 0.0) || emax / emin > 1e8) {
    throw IllConditioned(
        "estimate_mu: Gram condition number exceeds 1e8; the fit window is too "
        "short relative to the oscillation period 2*pi/tau in ln n");
  }
  const double det = A * C - B * B;
  const double re = (C * r0.value() - B * r1.value()) / det;
  const double im = (A * r1.value() - B * r0.value()) / det;

  MuFit fit;
  fit.mu_hat = {re, im};
  fit.lo = lo;
  fit.hi = hi;
  const double amp = 2.0 * std::abs(fit.mu_hat);
  double worst = 0.0;
  for (long n = lo; n <= hi; ++n) {
    const double ln = std::log(static_cast<double>(n));
    const double y = table.mean_V[static_cast<std::size_t>(n)] * std::exp(-sigma * ln);
    const double model = 2.0 * std::cos(tau * ln) * re - 2.0 * std::sin(tau * ln) * im;
    worst = std::max(worst, std::abs(y - model));
  }
  fit.max_rel_residual = amp > 0.0 ? worst / amp : worst;
  return fit;
}

}  // namespace mst
