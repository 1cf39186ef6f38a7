// Acceptance suite: one line per criterion, nonzero exit when any fails.
// All seeds are fixed; statistical checks use the pre-registered bands.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "mst/charpoly.hpp"
#include "mst/compare.hpp"
#include "mst/fixpoint.hpp"
#include "mst/recurrence.hpp"
#include "mst/rng.hpp"
#include "mst/spacings.hpp"
#include "mst/tree.hpp"
#include "support/stats.hpp"

namespace {

using Clock = std::chrono::steady_clock;
using std::complex;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += why;
    }
  }
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const std::vector<std::int64_t> kFigureKeys = {10, 7, 12, 4, 1, 8, 5, 6,
                                               9, 14, 11, 2, 15, 13, 3};
constexpr std::uint64_t kSeed = 20250810;

// shared context, built once
struct Context {
  mst::RootSet r26 = mst::find_roots(26);
  mst::RootSet r27 = mst::find_roots(27);
  mst::MomentTable table27 = mst::exact_mean_X(27, 100000);
  mst::MuFit fit = mst::estimate_mu(table27, r27.lambda2(), 10000, 30000);
  mst::FixedPointSpec spec = mst::make_spec(27, r27.lambda2(), fit.mu_hat);
};

Outcome criterion1() {
  Outcome o;
  mst::RootSet r3 = mst::find_roots(3);
  o.require(r3.roots.size() == 2, "m=3 root count");
  o.require(std::abs(r3.roots[0] - complex<double>(1, 0)) <= 1e-12, "m=3 root 1");
  o.require(std::abs(r3.roots[1] - complex<double>(-4, 0)) <= 1e-12, "m=3 root -4");
  mst::RootSet r4 = mst::find_roots(4);
  const double im = std::sqrt(23.0) / 2.0;
  o.require(r4.roots.size() == 3, "m=4 root count");
  o.require(std::abs(r4.roots[0] - complex<double>(1, 0)) <= 1e-12, "m=4 root 1");
  o.require(std::abs(r4.roots[1] - complex<double>(-3.5, im)) <= 1e-12, "m=4 lambda2");
  o.require(std::abs(r4.roots[2] - complex<double>(-3.5, -im)) <= 1e-12, "m=4 lambda3");
  o.detail = "exact roots for m=3,4 to 1e-12";
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst_res = 0.0, worst_vieta = 0.0;
  for (int m = 2; m <= 60; ++m) {
    mst::RootSet rs = mst::find_roots(m);
    for (double r : rs.relative_residuals) worst_res = std::max(worst_res, r);
    complex<double> sum = 0.0;
    for (complex<double> z : rs.roots) sum += z;
    // for m = 2 the z^{m-2} coefficient is the constant term: sum = 1
    const double expected_sum = (m == 2) ? 1.0 : -0.5 * m * (m - 1.0);
    worst_vieta = std::max(worst_vieta, std::abs(sum - expected_sum));
  }
  o.require(worst_res <= 1e-10, "residual " + fmt(worst_res));
  o.require(worst_vieta <= 1e-9, "vieta " + fmt(worst_vieta));
  o.detail = "max |phi|/m! = " + fmt(worst_res) + ", max vieta gap = " + fmt(worst_vieta);
  return o;
}

Outcome criterion3(const Context& ctx) {
  Outcome o;
  o.require(ctx.r26.sigma < 0.5, "sigma(26) = " + fmt(ctx.r26.sigma));
  o.require(ctx.r27.sigma > 0.5, "sigma(27) = " + fmt(ctx.r27.sigma));
  o.require(ctx.r27.rho < 1.0, "rho(27) = " + fmt(ctx.r27.rho));
  double worst = 0.0;
  for (int m = 2; m <= 60; ++m) {
    worst = std::max(worst, std::fabs(mst::contraction_factor(m, 0.5) - 1.0));
  }
  o.require(worst <= 1e-12, "factor(m,1/2) gap " + fmt(worst));
  o.detail = "sigma(26)=" + fmt(ctx.r26.sigma) + " < 1/2 < sigma(27)=" +
             fmt(ctx.r27.sigma) + ", rho(27)=" + fmt(ctx.r27.rho);
  return o;
}

Outcome criterion4() {
  Outcome o;
  const long s4 = mst::space_requirement(mst::build_tree(4, kFigureKeys));
  o.require(s4 == 13, "m=4 gives " + std::to_string(s4));
  for (int m : {3, 5, 6, 7, 8}) {
    const long s = mst::space_requirement(mst::build_tree(m, kFigureKeys));
    o.require(s != 13, "m=" + std::to_string(m) + " also gives 13");
  }
  o.detail = "15-key sequence: only m=4 yields 13";
  return o;
}

Outcome criterion5() {
  Outcome o;
  for (int m = 3; m <= 30; ++m) {
    std::vector<std::int64_t> keys(static_cast<std::size_t>(m - 1));
    std::iota(keys.begin(), keys.end(), 1);
    for (int j = 0; j <= m - 2; ++j) {
      const long s = mst::space_requirement(mst::build_tree(
          m, std::span<const std::int64_t>(keys.data(), static_cast<std::size_t>(j))));
      o.require(s == 1, "X_" + std::to_string(j) + " != 1 at m=" + std::to_string(m));
    }
    const long s = mst::space_requirement(mst::build_tree(m, keys));
    o.require(s == m + 1, "X_{m-1} != m+1 at m=" + std::to_string(m));
  }
  o.detail = "X_j = 1 (j <= m-2), X_{m-1} = m+1 for m in [3,30]";
  return o;
}

Outcome criterion6() {
  Outcome o;
  double min_p = 1.0;
  double worst_mean = 0.0;
  for (int m : {3, 4, 5}) {
    mst::MomentTable t = mst::exact_mean_X(m, 8);
    for (int n = m - 1; n <= 8; ++n) {
      std::map<long, double> pmf = mst::exact_distribution(m, n);
      double mean = 0.0;
      for (auto [v, p] : pmf) mean += v * p;
      worst_mean = std::max(worst_mean,
                            std::fabs(mean - t.mean_X[static_cast<std::size_t>(n)]));

      const int reps = 100000;
      mst::RngStream rng =
          mst::RngStream::from_seed(kSeed + 97 * static_cast<std::uint64_t>(m) + n);
      std::map<long, long> counts;
      for (int i = 0; i < reps; ++i) counts[mst::sample_space_recursive(m, n, rng)] += 1;
      min_p = std::min(min_p, teststat::chi2_pmf_pvalue(counts, pmf, reps));
    }
  }
  o.require(worst_mean <= 1e-9, "mean gap " + fmt(worst_mean));
  o.require(min_p > 0.01, "chi-square p " + fmt(min_p));
  o.detail = "max mean gap = " + fmt(worst_mean) + ", min chi^2 p = " + fmt(min_p);
  return o;
}

Outcome criterion7(const Context& ctx) {
  Outcome o;
  mst::SamplePool pool = mst::sample_Y(ctx.spec, 100000, 50, kSeed + 7);
  const complex<double> mean = pool.mean();
  double sd = 0.0;
  for (complex<double> y : pool.samples) sd += std::norm(y - mean);
  sd = std::sqrt(sd / static_cast<double>(pool.samples.size()));
  const double band = 6.0 * sd / std::sqrt(static_cast<double>(pool.samples.size()));
  o.require(std::abs(mean - ctx.spec.mu) <= band,
            "mean gap " + fmt(std::abs(mean - ctx.spec.mu)) + " > " + fmt(band));

  const complex<double> lam[] = {ctx.r27.lambda2()};
  const double gap = std::abs(mst::dirichlet_joint_moment(27, lam) - 1.0 / 27.0);
  o.require(gap <= 1e-10, "dirichlet moment gap " + fmt(gap));
  o.detail = "pool mean within " + fmt(band) + " band; E[S^lambda2] = 1/27 to " + fmt(gap);
  return o;
}

Outcome criterion8(const Context& ctx) {
  Outcome o;
  std::vector<double> d =
      mst::coupled_contraction_distances(ctx.spec, 100000, 10, 1.0, kSeed + 8);
  double avg = 0.0;
  int cnt = 0;
  for (int g = 3; g <= 9; ++g) {
    avg += d[static_cast<std::size_t>(g) + 1] / d[static_cast<std::size_t>(g)];
    ++cnt;
  }
  avg /= cnt;
  o.require(avg <= ctx.spec.rho + 0.1,
            "avg shrink " + fmt(avg) + " > rho+0.1 = " + fmt(ctx.spec.rho + 0.1));
  o.detail = "avg per-generation shrink (gens 3-10) = " + fmt(avg) +
             ", rho = " + fmt(ctx.spec.rho);
  return o;
}

Outcome criterion9(const Context& ctx) {
  Outcome o;
  mst::SamplePool pool = mst::sample_Y(ctx.spec, 100000, 200, kSeed + 9);
  mst::SecondMoments sm = mst::fixed_point_second_moments(ctx.spec);
  const double est = pool.abs2_mean();
  double sd = 0.0;
  for (complex<double> y : pool.samples) sd += std::pow(std::norm(y) - est, 2);
  sd = std::sqrt(sd / static_cast<double>(pool.samples.size()));
  const double se = sd / std::sqrt(static_cast<double>(pool.samples.size()));
  o.require(std::fabs(est - sm.abs2) <= 4.0 * se,
            "E|Y|^2 " + fmt(est) + " vs " + fmt(sm.abs2) + " (se " + fmt(se) + ")");
  o.detail = "closed form " + fmt(sm.abs2) + ", pool " + fmt(est) + ", se " + fmt(se);
  return o;
}

Outcome criterion10(const Context& ctx) {
  Outcome o;
  mst::SamplePool pool = mst::sample_Y(ctx.spec, 10000, 200, kSeed + 10);
  const std::vector<long> grid{1000, 3000, 10000, 30000};
  mst::ComparisonReport rep =
      mst::convergence_report(27, grid, kSeed + 100, ctx.spec, pool);
  std::string trend;
  for (const auto& row : rep.rows) {
    trend += " " + fmt(row.d2_over_n_sigma);
    o.require(row.null_d2_over_n_sigma > row.d2_over_n_sigma,
              "control below true model at n=" + std::to_string(row.n));
  }
  for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
    o.require(rep.rows[i + 1].d2_over_n_sigma <= 1.10 * rep.rows[i].d2_over_n_sigma,
              "trend breaks at n=" + std::to_string(rep.rows[i + 1].n));
  }
  o.detail = "d2/n^sigma:" + trend;
  return o;
}

Outcome criterion11(const Context& ctx) {
  Outcome o;
  // evaluation grid disjoint from the fit window [1e4, 3e4]
  std::vector<long> grid;
  const double l0 = std::log(40000.0), l1 = std::log(100000.0);
  for (int i = 0; i < 24; ++i) {
    long n = std::lround(std::exp(l0 + (l1 - l0) * i / 23.0));
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  std::vector<mst::OscillationRow> rows =
      mst::oscillation_report(ctx.table27, ctx.r27.lambda2(), ctx.fit.mu_hat, grid);
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.rel_err);
  o.require(worst < 0.05, "worst rel err " + fmt(worst));

  std::vector<long> peaks = mst::detect_peaks(ctx.table27, ctx.r27.sigma, 100, 100000);
  o.require(peaks.size() >= 2, "need two peaks, got " + std::to_string(peaks.size()));
  const double period = 2.0 * M_PI / ctx.r27.tau;
  std::string gaps;
  for (std::size_t i = 0; i + 1 < peaks.size(); ++i) {
    const double gap = std::log(static_cast<double>(peaks[i + 1])) -
                       std::log(static_cast<double>(peaks[i]));
    gaps += " " + fmt(gap);
    o.require(std::fabs(gap - period) <= 0.05 * period,
              "peak spacing " + fmt(gap) + " vs " + fmt(period));
  }
  o.detail = "worst rel err = " + fmt(worst) + "; peak ln-gaps:" + gaps +
             " (period " + fmt(period) + ")";
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  Context ctx;

  struct Entry {
    int id;
    const char* label;
    double limit_seconds;  // 0 = no limit stated
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries = {
      {1, "exact roots for m=3 and m=4", 1.0, [] { return criterion1(); }},
      {2, "residuals and Vieta over m in [2,60]", 10.0, [] { return criterion2(); }},
      {3, "spectral threshold at m=27", 0.0, [&] { return criterion3(ctx); }},
      {4, "15-key sequence reproduction at m=4", 0.0, [] { return criterion4(); }},
      {5, "boundary laws X_j=1, X_{m-1}=m+1", 0.0, [] { return criterion5(); }},
      {6, "enumeration vs recurrence vs split sampler", 0.0, [] { return criterion6(); }},
      {7, "mean preservation and the root-identity moment", 0.0, [&] { return criterion7(ctx); }},
      {8, "observed contraction factor", 120.0, [&] { return criterion8(ctx); }},
      {9, "second-moment oracle vs pool", 0.0, [&] { return criterion9(ctx); }},
      {10, "normalized d2 trend and null control", 900.0, [&] { return criterion10(ctx); }},
      {11, "oscillating mean: amplitude/phase model and peak spacing", 0.0,
       [&] { return criterion11(ctx); }},
  };

  for (const Entry& e : entries) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if (e.limit_seconds > 0.0 && secs > e.limit_seconds) {
      o.pass = false;
      o.detail += "; runtime " + fmt(secs) + "s over limit " + fmt(e.limit_seconds) + "s";
    }
    std::printf("[%s] criterion %2d: %s (%s) [%.1fs]\n", o.pass ? "PASS" : "FAIL",
                e.id, e.label, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }

  if (failures == 0) {
    std::printf("acceptance: all %zu criteria passed\n", entries.size());
  } else {
    std::printf("acceptance: %d criteria FAILED\n", failures);
  }
  return failures;
}
