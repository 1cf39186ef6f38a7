#include "mst/compare.hpp"

#include <algorithm>
#include <cmath>

#include "mst/dd.hpp"
#include "mst/errors.hpp"
#include "mst/tree.hpp"

namespace mst {

double empirical_w2(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw SizeMismatch("empirical_w2: sample counts differ");
  }
  if (xs.size() < 2) {
    throw SizeMismatch("empirical_w2: needs at least 2 samples per side");
  }
  std::vector<double> a(xs.begin(), xs.end());
  std::vector<double> b(ys.begin(), ys.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  DD acc(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc = dd_add(acc, d * d);
  }
  return std::sqrt(acc.value() / static_cast<double>(a.size()));
}

std::vector<double> sample_vhat(std::complex<double> lambda2, long n,
                                const SamplePool& pool) {
  if (n < 1) throw DomainError("sample_vhat: n must be >= 1");
  const double ln = std::log(static_cast<double>(n));
  const double scale = 2.0 * std::exp(lambda2.real() * ln);
  const double c = std::cos(lambda2.imag() * ln);
  const double s = std::sin(lambda2.imag() * ln);
  std::vector<double> out;
  out.reserve(pool.samples.size());
  for (std::complex<double> y : pool.samples) {
    out.push_back(scale * (c * y.real() - s * y.imag()));
  }
  return out;
}

std::vector<double> sample_v(int m, long n, int count, std::uint64_t seed) {
  const double center =
      (static_cast<double>(n) + 1.0) / (harmonic_number(m) - 1.0);
  std::vector<long> xs = sample_space_batch(m, n, count, seed);
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out[i] = static_cast<double>(xs[i]) - center;
  }
  return out;
}

ComparisonReport convergence_report(int m, std::span<const long> n_grid,
                                    std::uint64_t seed,
                                    const FixedPointSpec& spec,
                                    const SamplePool& pool) {
  if (!(spec.rho < 1.0)) {
    throw NotContractive("convergence_report: rho >= 1 (needs sigma > 1/2)");
  }
  const int count = static_cast<int>(pool.samples.size());
  ComparisonReport report;
  report.m = m;
  report.sigma = spec.lambda2.real();
  report.tau = spec.lambda2.imag();
  report.seed = seed;

  std::vector<long> grid(n_grid.begin(), n_grid.end());
  std::sort(grid.begin(), grid.end());
  for (long n : grid) {
    if (n < 2) throw DomainError("convergence_report: grid sizes must be >= 2");
    const double nsig = std::pow(static_cast<double>(n), report.sigma);
    std::vector<double> v =
        sample_v(m, n, count, derive_stream_key(seed, 2 * static_cast<std::uint64_t>(n)));
    std::vector<double> vhat = sample_vhat(spec.lambda2, n, pool);
    // wrong-law control: an independent draw of the same size with the
    // centering dropped, which the quantile coupling must reject
    std::vector<long> raw = sample_space_batch(
        m, n, count, derive_stream_key(seed, 2 * static_cast<std::uint64_t>(n) + 1));
    std::vector<double> null_v(raw.begin(), raw.end());

    ComparisonRow row;
    row.n = n;
    row.count = count;
    row.d2_hat = empirical_w2(v, vhat);
    row.d2_over_n_sigma = row.d2_hat / nsig;
    row.null_d2_hat = empirical_w2(v, null_v);
    row.null_d2_over_n_sigma = row.null_d2_hat / nsig;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<OscillationRow> oscillation_report(const MomentTable& table,
                                               std::complex<double> lambda2,
                                               std::complex<double> mu_hat,
                                               std::span<const long> n_grid) {
  const double sigma = lambda2.real();
  const double tau = lambda2.imag();
  const double amp = 2.0 * std::abs(mu_hat);
  const double phase = std::arg(mu_hat);
  std::vector<OscillationRow> rows;
  rows.reserve(n_grid.size());
  for (long n : n_grid) {
    if (n < 1 || n >= static_cast<long>(table.mean_V.size())) {
      throw OutOfRange("oscillation_report: grid point outside the table");
    }
    const double ln = std::log(static_cast<double>(n));
    OscillationRow row;
    row.n = n;
    row.exact_v_over_n_sigma =
        table.mean_V[static_cast<std::size_t>(n)] * std::exp(-sigma * ln);
    row.model = amp * std::cos(tau * ln + phase);
    row.rel_err = amp > 0.0
                      ? std::abs(row.exact_v_over_n_sigma - row.model) / amp
                      : std::abs(row.exact_v_over_n_sigma - row.model);
    rows.push_back(row);
  }
  return rows;
}

std::vector<long> detect_peaks(const MomentTable& table, double sigma, long lo,
                               long hi) {
  lo = std::max<long>(lo, 1);
  hi = std::min<long>(hi, static_cast<long>(table.mean_V.size()) - 1);
  auto value = [&](long n) {
    return table.mean_V[static_cast<std::size_t>(n)] *
           std::pow(static_cast<double>(n), -sigma);
  };
  std::vector<long> peaks;
  for (long n = lo + 1; n + 1 <= hi; ++n) {
    const double v = value(n);
    if (v > value(n - 1) && v >= value(n + 1)) peaks.push_back(n);
  }
  return peaks;
}

}  // namespace mst
