#include "mst/fixpoint.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mst/charpoly.hpp"
#include "mst/dd.hpp"
#include "mst/errors.hpp"
#include "mst/spacings.hpp"

namespace mst {

namespace {

using Cplx = std::complex<double>;

constexpr double kRootIdentityTol = 1e-10;

// Lanczos coefficients, g = 607/128, 15 terms (Godfrey's set).
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczosCoef[15] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5};

bool is_pole(Cplx z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

Cplx log_gamma_core(Cplx z) {
  // valid for Re(z) >= 0.5
  z -= 1.0;
  Cplx x = kLanczosCoef[0];
  for (int i = 1; i < 15; ++i) x += kLanczosCoef[i] / (z + static_cast<double>(i));
  Cplx t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t +
         std::log(x);
}

}  // namespace

std::complex<double> log_gamma(std::complex<double> z) {
  if (is_pole(z)) throw DomainError("log_gamma: pole at nonpositive integer");
  if (z.real() >= 0.5) return log_gamma_core(z);
  // Reflection; the imaginary part may differ from the continuous branch by
  // a multiple of 2*pi, which cancels wherever log_gamma values are combined
  // and exponentiated.
  return std::log(std::numbers::pi / std::sin(std::numbers::pi * z)) -
         log_gamma_core(1.0 - z);
}

std::complex<double> dirichlet_joint_moment(
    int m, std::span<const std::complex<double>> exponents) {
  if (m < 2) throw DomainError("dirichlet_joint_moment: m must be >= 2");
  if (static_cast<int>(exponents.size()) > m) {
    throw SizeMismatch("dirichlet_joint_moment: more exponents than cells");
  }
  Cplx sum = 0.0;
  for (Cplx a : exponents) {
    if (!(a.real() > -1.0)) {
      throw DomainError("dirichlet_joint_moment: needs Re(exponent) > -1");
    }
    sum += a;
  }
  if (is_pole(static_cast<double>(m) + sum)) {
    throw DomainError("dirichlet_joint_moment: pole in Gamma(m + sum)");
  }
  Cplx lg = log_gamma(static_cast<double>(m)) -
            log_gamma(static_cast<double>(m) + sum);
  for (Cplx a : exponents) lg += log_gamma(1.0 + a);
  return std::exp(lg);
}

std::complex<double> single_moment_product(int m, std::complex<double> a) {
  if (m < 2) throw DomainError("single_moment_product: m must be >= 2");
  // (m-1)!/((a+1)...(a+m-1)) as a product of j/(a+j)
  Cplx p = 1.0;
  for (int j = 1; j < m; ++j) {
    Cplx f = a + static_cast<double>(j);
    if (f == Cplx(0.0, 0.0)) throw DomainError("single_moment_product: pole");
    p *= static_cast<double>(j) / f;
  }
  return p;
}

FixedPointSpec make_spec(int m, std::complex<double> lambda2,
                         std::complex<double> mu) {
  double resid = root_identity_residual(m, lambda2);
  if (!(resid <= kRootIdentityTol)) {
    throw DomainError(
        "make_spec: lambda2 is not a characteristic root (identity residual " +
        std::to_string(resid) + "); the map would not preserve the mean");
  }
  FixedPointSpec spec;
  spec.m = m;
  spec.lambda2 = lambda2;
  spec.mu = mu;
  spec.rho = contraction_factor(m, lambda2.real());
  return spec;
}

std::complex<double> SamplePool::mean() const {
  DD re(0.0), im(0.0);
  for (Cplx y : samples) {
    re = dd_add(re, y.real());
    im = dd_add(im, y.imag());
  }
  const double n = static_cast<double>(samples.size());
  return {re.value() / n, im.value() / n};
}

double SamplePool::abs2_mean() const {
  DD acc(0.0);
  for (Cplx y : samples) acc = dd_add(acc, std::norm(y));
  return acc.value() / static_cast<double>(samples.size());
}

namespace {

// One output sample of the map; spacings and parent picks come from `rng`.
Cplx map_one(const FixedPointSpec& spec, std::span<const Cplx> pool,
             std::span<double> ubuf, RngStream& rng) {
  const int m = spec.m;
  for (int j = 0; j < m - 1; ++j) ubuf[static_cast<std::size_t>(j)] = rng.next_open_double();
  std::sort(ubuf.begin(), ubuf.end());
  Cplx acc = 0.0;
  double prev = 0.0;
  for (int k = 0; k < m; ++k) {
    const double hi = (k == m - 1) ? 1.0 : ubuf[static_cast<std::size_t>(k)];
    const double gap = hi - prev;
    prev = hi;
    const Cplx w = pool[rng.next_below(pool.size())];
    acc += complex_power(gap, spec.lambda2) * w;
  }
  return acc;
}

template <bool Parallel>
SamplePool apply_T_impl(const FixedPointSpec& spec, const SamplePool& pool,
                        std::uint64_t seed, bool recenter) {
  if (pool.samples.empty()) throw DomainError("apply_T_population: empty pool");
  const int n = static_cast<int>(pool.samples.size());
  SamplePool out;
  out.samples.resize(pool.samples.size());
  out.generation = pool.generation + 1;
  out.seed = seed;
  const std::span<const Cplx> src(pool.samples);

  if constexpr (Parallel) {
#pragma omp parallel
    {
      std::vector<double> ubuf(static_cast<std::size_t>(spec.m - 1));
#pragma omp for schedule(static)
      for (int i = 0; i < n; ++i) {
        RngStream rng(derive_stream_key(seed, static_cast<std::uint64_t>(i)));
        out.samples[static_cast<std::size_t>(i)] = map_one(spec, src, ubuf, rng);
      }
    }
  } else {
    std::vector<double> ubuf(static_cast<std::size_t>(spec.m - 1));
    for (int i = 0; i < n; ++i) {
      RngStream rng(derive_stream_key(seed, static_cast<std::uint64_t>(i)));
      out.samples[static_cast<std::size_t>(i)] = map_one(spec, src, ubuf, rng);
    }
  }

  if (recenter) {
    // Serial mean so the shift does not depend on the thread count.
    const Cplx shift = pool.mean() - out.mean();
    for (Cplx& y : out.samples) y += shift;
  }
  return out;
}

}  // namespace

SamplePool apply_T_population(const FixedPointSpec& spec, const SamplePool& pool,
                              std::uint64_t seed, bool recenter) {
  return apply_T_impl<true>(spec, pool, seed, recenter);
}

SamplePool apply_T_population_serial(const FixedPointSpec& spec,
                                     const SamplePool& pool, std::uint64_t seed,
                                     bool recenter) {
  return apply_T_impl<false>(spec, pool, seed, recenter);
}

int suggested_generations(double rho) {
  if (!(rho > 0.0 && rho < 1.0)) return 0;
  double g = std::ceil(std::log(5e-3) / std::log(rho));
  return static_cast<int>(std::clamp(g, 1.0, 20000.0));
}

SamplePool sample_Y(const FixedPointSpec& spec, int count, int generations,
                    std::uint64_t seed) {
  if (count < 1) throw DomainError("sample_Y: count must be positive");
  if (!(spec.rho < 1.0)) {
    throw NotContractive("sample_Y: contraction factor rho = " +
                         std::to_string(spec.rho) + " >= 1 (needs sigma > 1/2)");
  }
  SamplePool pool;
  pool.samples.assign(static_cast<std::size_t>(count), spec.mu);
  pool.generation = 0;
  pool.seed = seed;
  for (int g = 1; g <= generations; ++g) {
    pool = apply_T_population(spec, pool, derive_stream_key(seed, static_cast<std::uint64_t>(g)));
  }
  pool.seed = seed;
  return pool;
}

SecondMoments fixed_point_second_moments(const FixedPointSpec& spec) {
  if (!(spec.rho < 1.0)) {
    throw NotContractive("fixed_point_second_moments: rho >= 1");
  }
  const Cplx l = spec.lambda2;
  const Cplx lbar = std::conj(l);
  const double mm1 = static_cast<double>(spec.m) * (spec.m - 1.0);

  const Cplx cross_abs[] = {l, lbar};
  const Cplx cross_sq[] = {l, l};
  const Cplx twol[] = {2.0 * l};

  const double rho2 = spec.rho * spec.rho;
  const Cplx e_abs = dirichlet_joint_moment(spec.m, cross_abs);
  const Cplx e_sq = dirichlet_joint_moment(spec.m, cross_sq);
  const Cplx e_2l = dirichlet_joint_moment(spec.m, twol);

  SecondMoments out;
  out.abs2 = std::norm(spec.mu) * mm1 * e_abs.real() / (1.0 - rho2);
  out.sq = spec.mu * spec.mu * mm1 * e_sq /
           (1.0 - static_cast<double>(spec.m) * e_2l);
  return out;
}

std::vector<double> coupled_contraction_distances(const FixedPointSpec& spec,
                                                  int count, int generations,
                                                  double offset,
                                                  std::uint64_t seed) {
  if (count < 2 || count % 2 != 0) {
    throw DomainError("coupled_contraction_distances: count must be even and >= 2");
  }
  std::vector<Cplx> a(static_cast<std::size_t>(count), spec.mu);
  std::vector<Cplx> bpool(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    bpool[static_cast<std::size_t>(i)] = spec.mu + ((i % 2 == 0) ? offset : -offset);
  }

  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(generations) + 1);
  auto record = [&] {
    DD acc(0.0);
    for (int i = 0; i < count; ++i) {
      acc = dd_add(acc, std::norm(a[static_cast<std::size_t>(i)] -
                                  bpool[static_cast<std::size_t>(i)]));
    }
    dist.push_back(std::sqrt(acc.value() / count));
  };
  record();

  std::vector<Cplx> na(a.size()), nb(bpool.size());
  for (int g = 1; g <= generations; ++g) {
    const std::uint64_t gseed = derive_stream_key(seed, static_cast<std::uint64_t>(g));
#pragma omp parallel
    {
      std::vector<double> ubuf(static_cast<std::size_t>(spec.m - 1));
#pragma omp for schedule(static)
      for (int i = 0; i < count; ++i) {
        RngStream rng(derive_stream_key(gseed, static_cast<std::uint64_t>(i)));
        // shared spacings and parent picks couple the two chains
        for (int j = 0; j < spec.m - 1; ++j) ubuf[static_cast<std::size_t>(j)] = rng.next_open_double();
        std::sort(ubuf.begin(), ubuf.end());
        Cplx sa = 0.0, sb = 0.0;
        double prev = 0.0;
        for (int k = 0; k < spec.m; ++k) {
          const double hi = (k == spec.m - 1) ? 1.0 : ubuf[static_cast<std::size_t>(k)];
          const double gap = hi - prev;
          prev = hi;
          const std::uint64_t pick = rng.next_below(static_cast<std::uint64_t>(count));
          const Cplx f = complex_power(gap, spec.lambda2);
          sa += f * a[pick];
          sb += f * bpool[pick];
        }
        na[static_cast<std::size_t>(i)] = sa;
        nb[static_cast<std::size_t>(i)] = sb;
      }
    }
    a.swap(na);
    bpool.swap(nb);
    record();
  }
  return dist;
}

std::complex<double> sample_Y_exact(const FixedPointSpec& spec, int depth,
                                    RngStream& rng) {
  if (depth <= 0) return spec.mu;
  std::vector<double> s = sample_spacings(spec.m, rng);
  Cplx acc = 0.0;
  for (int k = 0; k < spec.m; ++k) {
    acc += complex_power(s[static_cast<std::size_t>(k)], spec.lambda2) *
           sample_Y_exact(spec, depth - 1, rng);
  }
  return acc;
}

}  // namespace mst
