#pragma once

#include <complex>
#include <vector>

namespace mst {

using Complex = std::complex<double>;

/// phi_m(z) = (z+1)(z+2)...(z+m-1) - m!, evaluated in product form.
Complex eval_phi(int m, Complex z);

/// m! as a double (overflows to +inf for m > 170).
double factorial(int m);

/// phi_m(z) / m!, evaluated as a product of scale-free factors. This is the
/// quantity the solver iterates on; it stays O(1) near the roots for any m.
Complex eval_phi_scaled(int m, Complex z);

// The m-1 roots of phi_m with their ordering metadata. Roots are sorted by
// nonincreasing real part, a root with positive imaginary part immediately
// before its conjugate. roots[0] == 1 exactly.
struct RootSet {
  int m = 0;
  std::vector<Complex> roots;
  std::vector<double> residuals;           // |phi(root)| (inf-prone for m > 170)
  std::vector<double> relative_residuals;  // |phi(root)| / m!
  double sigma = 0.0;  // Re lambda2; NaN for m == 2
  double tau = 0.0;    // Im lambda2 (>= 0); NaN for m == 2
  double rho = 0.0;    // contraction factor; NaN where 2*sigma+1 <= 0 or m == 2

  /// k-th root in sort order, 1-based (lambda(1) == 1). Throws NoSuchRoot.
  Complex lambda(int k) const;
  Complex lambda2() const { return lambda(2); }
};

/// Finds and orders all roots of phi_m. Deterministic; no randomness.
/// Requires 2 <= m <= 256. Throws ConvergenceFailure if the residual
/// tolerance cannot be met.
RootSet find_roots(int m);

/// The root with second-largest real part (and positive imaginary part when
/// complex; for small m the second root is real and is returned with
/// imaginary part +0). Requires m >= 3.
Complex lambda2(int m);

/// rho = sqrt(m! / ((2*sigma+1)...(2*sigma+m-1))), the contraction factor of
/// the fixed-point map. The Gamma ratio collapses to a finite product.
/// Throws DomainError when any factor 2*sigma+j <= 0.
double contraction_factor(int m, double sigma);

/// |m! / ((lam+1)...(lam+m-1)) - 1|: zero exactly at roots of phi_m. This is
/// also the mean-preservation multiplier of the fixed-point map minus one.
/// Throws PoleError when lam = -j for some j in 1..m-1.
double root_identity_residual(int m, Complex lam);

}  // namespace mst
