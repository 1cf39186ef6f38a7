#include "mst/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mst/dd.hpp"
#include "mst/errors.hpp"

namespace mst {

namespace {

constexpr int kMaxM = 256;
constexpr double kRelResidualTol = 1e-10;

double nan64() { return std::numeric_limits<double>::quiet_NaN(); }

// Sum of reciprocals 1/(z+j), j = 1..m-1: the logarithmic derivative of the
// product part, phi'(z) = prod(z+j) * dlog(z).
Complex dlog_product(int m, Complex z) {
  Complex s = 0.0;
  for (int j = 1; j < m; ++j) s += 1.0 / (z + static_cast<double>(j));
  return s;
}

// Newton correction phi/phi' computed from the scaled product
//   Q(z) = prod((z+j)/j) / m  (== prod(z+j) / m!):
//   phi/phi' = (Q - 1) / (Q * dlog).
Complex newton_correction(int m, Complex z) {
  Complex q = eval_phi_scaled(m, z) + 1.0;
  Complex den = q * dlog_product(m, z);
  if (den == Complex(0.0, 0.0)) return Complex(0.0, 0.0);
  return (q - 1.0) / den;
}

// One Newton step at double-double precision; recovers the ~1e-16-level bits
// that plain binary64 evaluation of the product loses at larger m.
Complex newton_step_dd(int m, Complex z) {
  CDD zz(z.real(), z.imag());
  CDD q(1.0, 0.0);
  CDD l(0.0, 0.0);
  for (int j = 1; j < m; ++j) {
    CDD zj = {dd_add(zz.re, static_cast<double>(j)), zz.im};
    q = cdd_mul(q, cdd_div(zj, static_cast<double>(j)));
    l = cdd_add(l, cdd_recip(zj));
  }
  q = cdd_div(q, static_cast<double>(m));
  CDD num = cdd_sub(q, CDD(1.0, 0.0));
  CDD den = cdd_mul(q, l);
  CDD step = cdd_div(num, den);
  CDD res = cdd_sub(zz, step);
  return {res.re.value(), res.im.value()};
}

struct AberthResult {
  std::vector<Complex> roots;  // unsorted, roots[0] == 1 pinned
};

AberthResult aberth(int m) {
  const int degree = m - 1;
  std::vector<Complex> z(degree);
  z[0] = Complex(1.0, 0.0);  // lambda1 is exact; it only repels the others

  // Initial points on a circle about the root centroid -m/2. The angular
  // offset keeps every start strictly off the real axis.
  const double radius = static_cast<double>(m);
  const Complex center(-0.5 * m, 0.0);
  for (int k = 1; k < degree; ++k) {
    double angle = 2.0 * std::numbers::pi * k / degree + 0.4;
    z[k] = center + radius * Complex(std::cos(angle), std::sin(angle));
  }

  const int max_sweeps = 400;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (int i = 1; i < degree; ++i) {
      Complex nc = newton_correction(m, z[i]);
      Complex repulsion = 0.0;
      for (int j = 0; j < degree; ++j) {
        if (j != i) repulsion += 1.0 / (z[i] - z[j]);
      }
      Complex den = 1.0 - nc * repulsion;
      Complex w = (den == Complex(0.0, 0.0)) ? nc : nc / den;
      z[i] -= w;
      moved = std::max(moved, std::abs(w) / (1.0 + std::abs(z[i])));
    }
    if (moved < 1e-14) break;
  }

  // Newton polishing on each free root; a double-double step at larger m.
  for (int i = 1; i < degree; ++i) {
    for (int it = 0; it < 3; ++it) z[i] -= newton_correction(m, z[i]);
    if (m > 40) z[i] = newton_step_dd(m, z[i]);
  }
  return {std::move(z)};
}

// Snap near-real roots, rebuild conjugate pairs exactly, and sort by
// (-Re, -Im) so that +Im precedes its conjugate.
std::vector<Complex> canonicalize(int m, std::vector<Complex> z) {
  std::vector<Complex> reals, uppers;
  std::vector<bool> used(z.size(), false);
  for (std::size_t i = 0; i < z.size(); ++i) {
    double tol = 1e-8 * (1.0 + std::abs(z[i].real()));
    if (std::abs(z[i].imag()) <= tol) {
      reals.emplace_back(z[i].real(), 0.0);
      used[i] = true;
    }
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (used[i] || z[i].imag() < 0) continue;
    // find the conjugate partner
    std::size_t best = z.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (j == i || used[j] || z[j].imag() > 0) continue;
      double d = std::abs(std::conj(z[i]) - z[j]);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    if (best == z.size() || best_d > 1e-6 * (1.0 + std::abs(z[i]))) {
      throw ConvergenceFailure("find_roots: conjugate pairing failed at m=" +
                               std::to_string(m));
    }
    used[i] = used[best] = true;
    Complex avg = 0.5 * (z[i] + std::conj(z[best]));
    uppers.push_back(avg);
  }
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!used[i]) {
      throw ConvergenceFailure("find_roots: unpaired non-real root at m=" +
                               std::to_string(m));
    }
  }

  std::vector<Complex> out;
  out.reserve(z.size());
  for (Complex r : reals) out.push_back(r);
  for (Complex u : uppers) {
    out.push_back(u);
    out.push_back(std::conj(u));
  }
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });
  return out;
}

}  // namespace

double factorial(int m) {
  double f = 1.0;
  for (int k = 2; k <= m; ++k) f *= k;
  return f;
}

Complex eval_phi(int m, Complex z) {
  Complex p = 1.0;
  for (int j = 1; j < m; ++j) p *= z + static_cast<double>(j);
  return p - factorial(m);
}

Complex eval_phi_scaled(int m, Complex z) {
  Complex p = 1.0;
  for (int j = 1; j < m; ++j) p *= (z + static_cast<double>(j)) / static_cast<double>(j);
  return p / static_cast<double>(m) - 1.0;
}

Complex RootSet::lambda(int k) const {
  if (k < 1 || k > static_cast<int>(roots.size())) {
    throw NoSuchRoot("lambda(" + std::to_string(k) + "): phi_" + std::to_string(m) +
                     " has only " + std::to_string(roots.size()) + " roots");
  }
  return roots[k - 1];
}

RootSet find_roots(int m) {
  if (m < 2 || m > kMaxM) {
    throw DomainError("find_roots: m must lie in [2," + std::to_string(kMaxM) + "]");
  }

  RootSet rs;
  rs.m = m;
  if (m == 2) {
    rs.roots = {Complex(1.0, 0.0)};
  } else {
    rs.roots = canonicalize(m, aberth(m).roots);
  }

  if (rs.roots[0] != Complex(1.0, 0.0)) {
    // The pinned root must survive ordering at the top.
    throw ConvergenceFailure("find_roots: ordering lost the root at 1 (m=" +
                             std::to_string(m) + ")");
  }

  const double mfact = factorial(m);
  rs.residuals.reserve(rs.roots.size());
  rs.relative_residuals.reserve(rs.roots.size());
  for (Complex r : rs.roots) {
    double rel = std::abs(eval_phi_scaled(m, r));
    rs.relative_residuals.push_back(rel);
    rs.residuals.push_back(rel * mfact);
    if (!(rel <= kRelResidualTol)) {
      throw ConvergenceFailure("find_roots: residual " + std::to_string(rel) +
                               " exceeds tolerance at m=" + std::to_string(m));
    }
  }

  // No two roots share a real part unless mutually conjugate.
  for (std::size_t i = 0; i + 1 < rs.roots.size(); ++i) {
    const Complex a = rs.roots[i];
    const Complex b = rs.roots[i + 1];
    if (std::abs(a.real() - b.real()) <= 1e-9 * (1.0 + std::abs(a.real())) &&
        std::abs(a.imag() + b.imag()) > 1e-9 * (1.0 + std::abs(a.imag()))) {
      throw ConvergenceFailure("find_roots: equal real parts on non-conjugates (m=" +
                               std::to_string(m) + ")");
    }
  }

  if (m == 2) {
    rs.sigma = rs.tau = rs.rho = nan64();
    return rs;
  }

  Complex l2 = rs.roots[1];
  rs.sigma = l2.real();
  rs.tau = l2.imag() > 0 ? l2.imag() : 0.0;
  rs.rho = (2.0 * rs.sigma + 1.0 > 0.0) ? contraction_factor(m, rs.sigma) : nan64();
  return rs;
}

Complex lambda2(int m) {
  if (m < 3) throw NoSuchRoot("lambda2: requires m >= 3");
  return find_roots(m).lambda2();
}

double contraction_factor(int m, double sigma) {
  if (m < 2) throw DomainError("contraction_factor: m must be >= 2");
  if (!(2.0 * sigma + 1.0 > 0.0)) {
    throw DomainError("contraction_factor: 2*sigma+1 must be positive");
  }
  // rho^2 = m!/prod(2s+j) = m * prod j/(2s+j); all factors positive here.
  double prod = static_cast<double>(m);
  for (int j = 1; j < m; ++j) {
    prod *= static_cast<double>(j) / (2.0 * sigma + static_cast<double>(j));
  }
  return std::sqrt(prod);
}

double root_identity_residual(int m, Complex lam) {
  if (m < 2) throw DomainError("root_identity_residual: m must be >= 2");
  Complex p = 1.0;
  for (int j = 1; j < m; ++j) {
    Complex f = lam + static_cast<double>(j);
    if (f == Complex(0.0, 0.0)) {
      throw PoleError("root_identity_residual: lam = -" + std::to_string(j));
    }
    p *= f / static_cast<double>(j);
  }
  // m!/prod(lam+j) = m / prod((lam+j)/j)
  return std::abs(static_cast<double>(m) / p - 1.0);
}

}  // namespace mst
