#include <CLI11.hpp>

#include <complex>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mst/charpoly.hpp"
#include "mst/compare.hpp"
#include "mst/errors.hpp"
#include "mst/fixpoint.hpp"
#include "mst/recurrence.hpp"
#include "mst/report_io.hpp"
#include "mst/rng.hpp"
#include "mst/spacings.hpp"
#include "mst/tree.hpp"
#include "mst/version.hpp"

namespace {

struct CommonOpts {
  int m = 27;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out = "-";
  std::string format = "csv";
  int threads = 0;
  bool no_timestamp = false;
};

struct OutputTarget {
  std::ostream* os = nullptr;
  std::unique_ptr<std::ofstream> file;
  std::string path;  // "-" for stdout
};

OutputTarget open_output(const std::string& path) {
  OutputTarget t;
  t.path = path;
  if (path == "-") {
    t.os = &std::cout;
  } else {
    t.file = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*t.file) throw mst::Error("cannot open output file: " + path);
    t.os = t.file.get();
  }
  return t;
}

std::string g17(double v) { return mst::fmt_g17(v); }

void add_common(CLI::App* sub, CommonOpts& o, bool with_seed = true) {
  sub->add_option("--m", o.m, "branching factor")->check(CLI::Range(2, 256));
  if (with_seed) {
    sub->add_option("--seed", o.seed, "64-bit RNG seed (env MST_SEED as fallback)")
        ->envname("MST_SEED");
  }
  sub->add_option("--out", o.out, "output path ('-' = stdout)");
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--threads", o.threads, "worker thread cap (0 = default)");
  sub->add_flag("--no-timestamp", o.no_timestamp,
                "omit the timestamp (byte-identical reruns)");
}

void finish_common(CommonOpts& o, const CLI::App* sub) {
  if (const CLI::Option* s = sub->get_option_no_throw("--seed"); s && s->count() > 0) {
    o.seed_given = true;
  }
  if (!o.seed_given) {
    std::random_device rd;
    o.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
#ifdef _OPENMP
  if (o.threads > 0) omp_set_num_threads(o.threads);
#endif
}

mst::RunMetadata make_metadata(const CommonOpts& o, const std::string& cmdline) {
  mst::RunMetadata meta;
  meta.version = mst::kVersion;
  meta.command_line = cmdline;
  meta.seed = o.seed;
  if (!o.no_timestamp) meta.timestamp = mst::iso8601_utc_now();
  return meta;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

// ---- roots ----------------------------------------------------------------

int cmd_roots(const CommonOpts& o, const std::string& cmdline) {
  mst::RootSet rs = mst::find_roots(o.m);
  mst::RunMetadata meta = make_metadata(o, cmdline);
  meta.seed.reset();  // deterministic command; no randomness involved
  if (o.m >= 3) meta.lambda2 = rs.lambda2();
  meta.extra.emplace_back("m", std::to_string(o.m));
  meta.extra.emplace_back("sigma", mst::fmt_g17(rs.sigma));
  meta.extra.emplace_back("tau", mst::fmt_g17(rs.tau));
  meta.extra.emplace_back("rho", mst::fmt_g17(rs.rho));
  meta.extra.emplace_back("sigma_gt_half", rs.sigma > 0.5 ? "true" : "false");

  OutputTarget out = open_output(o.out);
  std::ostream& os = *out.os;
  if (o.format == "csv") {
    mst::write_csv_metadata(os, meta);
    os << "k,re,im,abs_residual,rel_residual\n";
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
      os << (i + 1) << ',' << g17(rs.roots[i].real()) << ',' << g17(rs.roots[i].imag())
         << ',' << g17(rs.residuals[i]) << ',' << g17(rs.relative_residuals[i]) << "\n";
    }
  } else {
    os << '{';
    mst::write_json_metadata(os, meta);
    os << ",\"roots\":[";
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
      if (i) os << ',';
      os << "{\"re\":" << g17(rs.roots[i].real()) << ",\"im\":" << g17(rs.roots[i].imag())
         << ",\"abs_residual\":" << g17(rs.residuals[i])
         << ",\"rel_residual\":" << g17(rs.relative_residuals[i]) << '}';
    }
    os << "]}\n";
  }
  return 0;
}

// ---- tree -----------------------------------------------------------------

int cmd_tree(const CommonOpts& o, const std::string& keys_file, long random_n,
             bool dump, const std::string& cmdline) {
  std::vector<std::int64_t> keys;
  if (!keys_file.empty()) {
    std::ifstream in(keys_file);
    if (!in) throw mst::Error("cannot open keys file: " + keys_file);
    std::int64_t k;
    while (in >> k) keys.push_back(k);
  } else {
    keys.resize(static_cast<std::size_t>(random_n));
    for (long i = 0; i < random_n; ++i) keys[static_cast<std::size_t>(i)] = i + 1;
    mst::RngStream rng = mst::RngStream::from_seed(o.seed);
    rng.shuffle(keys);
  }

  mst::SearchTree tree = mst::build_tree(o.m, keys);
  if (dump) tree.dump(std::cout);

  mst::RunMetadata meta = make_metadata(o, cmdline);
  if (!keys_file.empty()) meta.seed.reset();
  meta.extra.emplace_back("m", std::to_string(o.m));

  OutputTarget out = open_output(o.out);
  std::ostream& os = *out.os;
  if (o.format == "csv") {
    mst::write_csv_metadata(os, meta);
    os << "n,space_requirement,nonempty_nodes\n";
    os << tree.key_count() << ',' << mst::space_requirement(tree) << ','
       << tree.nonempty_nodes() << "\n";
  } else {
    os << '{';
    mst::write_json_metadata(os, meta);
    os << ",\"m\":" << o.m << ",\"n\":" << tree.key_count()
       << ",\"space_requirement\":" << mst::space_requirement(tree)
       << ",\"nonempty_nodes\":" << tree.nonempty_nodes() << "}\n";
  }
  return 0;
}

// ---- mean -----------------------------------------------------------------

int cmd_mean(const CommonOpts& o, long nmax, const std::string& cmdline) {
  mst::MomentTable table = mst::exact_mean_X(o.m, nmax);
  const bool have_lambda2 = o.m >= 3;
  double sigma = 0.0;
  mst::RunMetadata meta = make_metadata(o, cmdline);
  meta.seed.reset();
  meta.extra.emplace_back("m", std::to_string(o.m));
  meta.extra.emplace_back("harmonic", mst::fmt_g17(table.harmonic));
  if (have_lambda2) {
    mst::RootSet rs = mst::find_roots(o.m);
    sigma = rs.sigma;
    meta.lambda2 = rs.lambda2();
  }

  OutputTarget out = open_output(o.out);
  std::ostream& os = *out.os;
  if (o.format == "csv") {
    mst::write_csv_metadata(os, meta);
    os << (have_lambda2 ? "n,mean_X,mean_V,mean_V_over_n_sigma\n" : "n,mean_X,mean_V\n");
    for (std::size_t n = 0; n < table.mean_X.size(); ++n) {
      os << n << ',' << g17(table.mean_X[n]) << ',' << g17(table.mean_V[n]);
      if (have_lambda2) {
        const double nn = n == 0 ? 1.0 : static_cast<double>(n);
        os << ',' << g17(table.mean_V[n] * std::pow(nn, -sigma));
      }
      os << "\n";
    }
  } else {
    os << '{';
    mst::write_json_metadata(os, meta);
    os << ",\"rows\":[";
    for (std::size_t n = 0; n < table.mean_X.size(); ++n) {
      if (n) os << ',';
      os << "[" << n << ',' << g17(table.mean_X[n]) << ',' << g17(table.mean_V[n]) << "]";
    }
    os << "]}\n";
  }
  return 0;
}

// ---- fixpoint / compare shared setup ---------------------------------------

struct PipelineSetup {
  mst::RootSet roots;
  std::complex<double> mu_hat;
  mst::FixedPointSpec spec;
  int generations = 0;
};

PipelineSetup make_pipeline(int m, long fit_lo, long fit_hi, int generations,
                            bool have_mu, std::complex<double> mu_override) {
  PipelineSetup p;
  p.roots = mst::find_roots(m);
  if (have_mu) {
    p.mu_hat = mu_override;
  } else {
    mst::MomentTable table = mst::exact_mean_X(m, fit_hi);
    mst::MuFit fit = mst::estimate_mu(table, p.roots.lambda2(), fit_lo, fit_hi);
    p.mu_hat = fit.mu_hat;
    // a zero mean makes the zero law the fixed point; refuse the degenerate
    // case and warn when the fit cannot separate mu from zero
    if (std::abs(p.mu_hat) == 0.0) {
      throw mst::DomainError("fitted mu is zero; the fixed point would be degenerate");
    }
    if (fit.max_rel_residual > 1.0 / 6.0) {
      std::cerr << "warning: fit residuals reach " << fit.max_rel_residual
                << " of the oscillation amplitude; the fitted mu is not well "
                   "separated from zero\n";
    }
  }
  p.spec = mst::make_spec(m, p.roots.lambda2(), p.mu_hat);
  p.generations = generations > 0 ? generations : mst::suggested_generations(p.spec.rho);
  return p;
}

// ---- fixpoint ---------------------------------------------------------------

int cmd_fixpoint(const CommonOpts& o, int samples, int generations, long fit_lo,
                 long fit_hi, bool have_mu, std::complex<double> mu_override,
                 const std::string& cmdline) {
  PipelineSetup p = make_pipeline(o.m, fit_lo, fit_hi, generations, have_mu, mu_override);
  mst::SamplePool pool = mst::sample_Y(p.spec, samples, p.generations, o.seed);

  mst::RunMetadata meta = make_metadata(o, cmdline);
  meta.lambda2 = p.spec.lambda2;
  meta.extra.emplace_back("m", std::to_string(o.m));
  meta.extra.emplace_back("mu_re", mst::fmt_g17(p.mu_hat.real()));
  meta.extra.emplace_back("mu_im", mst::fmt_g17(p.mu_hat.imag()));
  meta.extra.emplace_back("rho", mst::fmt_g17(p.spec.rho));
  meta.extra.emplace_back("contractive", p.spec.rho < 1.0 ? "true" : "false");
  meta.extra.emplace_back("generations", std::to_string(p.generations));
  meta.extra.emplace_back("samples", std::to_string(samples));

  OutputTarget out = open_output(o.out);
  std::ostream& os = *out.os;
  if (o.format == "csv") {
    mst::write_csv_metadata(os, meta);
    os << "re,im\n";
    for (std::complex<double> y : pool.samples) {
      os << g17(y.real()) << ',' << g17(y.imag()) << "\n";
    }
    if (out.path != "-") {
      std::ofstream mf(out.path + ".meta.json", std::ios::binary);
      mf << '{';
      mst::write_json_metadata(mf, meta);
      mf << "}\n";
    }
  } else {
    os << '{';
    mst::write_json_metadata(os, meta);
    os << ",\"samples\":[";
    for (std::size_t i = 0; i < pool.samples.size(); ++i) {
      if (i) os << ',';
      os << '[' << g17(pool.samples[i].real()) << ',' << g17(pool.samples[i].imag()) << ']';
    }
    os << "]}\n";
  }
  return 0;
}

// ---- compare ----------------------------------------------------------------

int cmd_compare(const CommonOpts& o, const std::vector<long>& grid, int samples,
                int generations, long fit_lo, long fit_hi, const std::string& cmdline) {
  PipelineSetup p = make_pipeline(o.m, fit_lo, fit_hi, generations, false, {});
  mst::SamplePool pool =
      mst::sample_Y(p.spec, samples, p.generations, mst::derive_stream_key(o.seed, 0xF1));
  mst::ComparisonReport report = mst::convergence_report(
      o.m, grid, mst::derive_stream_key(o.seed, 0xC0), p.spec, pool);

  mst::RunMetadata meta = make_metadata(o, cmdline);
  meta.lambda2 = p.spec.lambda2;
  meta.extra.emplace_back("m", std::to_string(o.m));
  meta.extra.emplace_back("sigma", mst::fmt_g17(report.sigma));
  meta.extra.emplace_back("tau", mst::fmt_g17(report.tau));
  meta.extra.emplace_back("mu_re", mst::fmt_g17(p.mu_hat.real()));
  meta.extra.emplace_back("mu_im", mst::fmt_g17(p.mu_hat.imag()));
  meta.extra.emplace_back("rho", mst::fmt_g17(p.spec.rho));
  meta.extra.emplace_back("generations", std::to_string(p.generations));

  OutputTarget out = open_output(o.out);
  std::ostream& os = *out.os;
  if (o.format == "csv") {
    mst::write_csv_metadata(os, meta);
    os << "n,d2_hat,d2_over_n_sigma,null_d2_hat,null_d2_over_n_sigma,N\n";
    for (const auto& r : report.rows) {
      os << r.n << ',' << g17(r.d2_hat) << ',' << g17(r.d2_over_n_sigma) << ','
         << g17(r.null_d2_hat) << ',' << g17(r.null_d2_over_n_sigma) << ',' << r.count
         << "\n";
    }
  } else {
    os << '{';
    mst::write_json_metadata(os, meta);
    os << ",\"rows\":[";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const auto& r = report.rows[i];
      if (i) os << ',';
      os << "{\"n\":" << r.n << ",\"d2_hat\":" << g17(r.d2_hat)
         << ",\"d2_over_n_sigma\":" << g17(r.d2_over_n_sigma)
         << ",\"null_d2_hat\":" << g17(r.null_d2_hat)
         << ",\"null_d2_over_n_sigma\":" << g17(r.null_d2_over_n_sigma)
         << ",\"N\":" << r.count << '}';
    }
    os << "]}\n";
  }
  return 0;
}

// ---- oscillate ---------------------------------------------------------------

int cmd_oscillate(const CommonOpts& o, long nmax, long fit_lo, long fit_hi,
                  long grid_lo, int grid_points, const std::string& cmdline) {
  mst::RootSet rs = mst::find_roots(o.m);
  mst::MomentTable table = mst::exact_mean_X(o.m, nmax);
  mst::MuFit fit = mst::estimate_mu(table, rs.lambda2(), fit_lo, fit_hi);
  table.fit = fit;

  std::vector<long> grid;
  const double l0 = std::log(static_cast<double>(grid_lo));
  const double l1 = std::log(static_cast<double>(nmax));
  for (int i = 0; i < grid_points; ++i) {
    double f = grid_points == 1 ? 0.0 : static_cast<double>(i) / (grid_points - 1);
    long n = std::lround(std::exp(l0 + f * (l1 - l0)));
    if (grid.empty() || grid.back() != n) grid.push_back(n);
  }
  std::vector<mst::OscillationRow> rows =
      mst::oscillation_report(table, rs.lambda2(), fit.mu_hat, grid);
  std::vector<long> peaks = mst::detect_peaks(table, rs.sigma, 100, nmax);

  mst::RunMetadata meta = make_metadata(o, cmdline);
  meta.seed.reset();
  meta.lambda2 = rs.lambda2();
  meta.extra.emplace_back("m", std::to_string(o.m));
  meta.extra.emplace_back("mu_re", mst::fmt_g17(fit.mu_hat.real()));
  meta.extra.emplace_back("mu_im", mst::fmt_g17(fit.mu_hat.imag()));
  meta.extra.emplace_back("fit_lo", std::to_string(fit.lo));
  meta.extra.emplace_back("fit_hi", std::to_string(fit.hi));
  meta.extra.emplace_back("fit_max_rel_residual", mst::fmt_g17(fit.max_rel_residual));
  meta.extra.emplace_back("two_pi_over_tau", mst::fmt_g17(2.0 * std::numbers::pi / rs.tau));
  {
    std::string ps = "[";
    for (std::size_t i = 0; i < peaks.size(); ++i) {
      if (i) ps += ',';
      ps += std::to_string(peaks[i]);
    }
    ps += ']';
    meta.extra.emplace_back("peaks", ps);
  }

  OutputTarget out = open_output(o.out);
  std::ostream& os = *out.os;
  if (o.format == "csv") {
    mst::write_csv_metadata(os, meta);
    os << "n,exact_v_over_n_sigma,model,rel_err\n";
    for (const auto& r : rows) {
      os << r.n << ',' << g17(r.exact_v_over_n_sigma) << ',' << g17(r.model) << ','
         << g17(r.rel_err) << "\n";
    }
  } else {
    os << '{';
    mst::write_json_metadata(os, meta);
    os << ",\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      if (i) os << ',';
      os << "{\"n\":" << r.n << ",\"exact_v_over_n_sigma\":" << g17(r.exact_v_over_n_sigma)
         << ",\"model\":" << g17(r.model) << ",\"rel_err\":" << g17(r.rel_err) << '}';
    }
    os << "]}\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"m-ary search tree space-requirement asymptotics toolkit"};
  app.set_config("--config", "", "flat key=value config file");
  app.require_subcommand(1);
  const std::string cmdline = join_args(argc, argv);

  CommonOpts roots_o, tree_o, mean_o, fix_o, cmp_o, osc_o;

  CLI::App* roots = app.add_subcommand("roots", "characteristic roots and spectral constants");
  add_common(roots, roots_o, /*with_seed=*/false);

  CLI::App* tree = app.add_subcommand("tree", "build a tree and report its space requirement");
  add_common(tree, tree_o);
  std::string keys_file;
  long random_n = 0;
  bool dump = false;
  tree->add_option("--keys-file", keys_file, "whitespace-separated distinct integer keys");
  tree->add_option("--random", random_n, "build from a random permutation of [n]");
  tree->add_flag("--dump", dump, "print the tree, one node per line, to stdout");

  CLI::App* mean = app.add_subcommand("mean", "exact mean table (CSV: n,mean_X,mean_V,mean_V_over_n_sigma)");
  add_common(mean, mean_o, /*with_seed=*/false);
  long mean_nmax = 100000;
  mean->add_option("--nmax", mean_nmax, "table size")->check(CLI::Range(1L, 1000000L));

  CLI::App* fixpoint = app.add_subcommand("fixpoint", "sample the fixed-point distribution (pool CSV re,im)");
  add_common(fixpoint, fix_o);
  int fix_samples = 100000, fix_generations = 0;
  long fix_fit_lo = 10000, fix_fit_hi = 30000;
  double mu_re = 0.0, mu_im = 0.0;
  fixpoint->add_option("--samples", fix_samples, "pool size")->check(CLI::Range(1, 100000000));
  fixpoint->add_option("--generations", fix_generations, "iterations (0 = auto from rho)");
  fixpoint->add_option("--fit-lo", fix_fit_lo, "mu fit window start");
  fixpoint->add_option("--fit-hi", fix_fit_hi, "mu fit window end");
  CLI::Option* omu_re = fixpoint->add_option("--mu-re", mu_re, "override fitted Re(mu)");
  CLI::Option* omu_im = fixpoint->add_option("--mu-im", mu_im, "override fitted Im(mu)");

  CLI::App* compare = app.add_subcommand("compare", "empirical d2(V_n, Vhat_n) over a size grid, with null control");
  add_common(compare, cmp_o);
  std::vector<long> grid{1000, 3000, 10000, 30000, 100000};
  int cmp_samples = 10000, cmp_generations = 0;
  long cmp_fit_lo = 10000, cmp_fit_hi = 30000;
  compare->add_option("--grid", grid, "tree sizes n (space separated)");
  compare->add_option("--samples", cmp_samples, "samples per grid point (= pool size)");
  compare->add_option("--generations", cmp_generations, "pool iterations (0 = auto)");
  compare->add_option("--fit-lo", cmp_fit_lo, "mu fit window start");
  compare->add_option("--fit-hi", cmp_fit_hi, "mu fit window end");

  CLI::App* oscillate = app.add_subcommand("oscillate", "exact E[V_n]/n^sigma against the fitted cosine model");
  add_common(oscillate, osc_o, /*with_seed=*/false);
  long osc_nmax = 100000, osc_fit_lo = 10000, osc_fit_hi = 30000, osc_grid_lo = 40000;
  int osc_grid_points = 24;
  oscillate->add_option("--nmax", osc_nmax, "table size")->check(CLI::Range(100L, 1000000L));
  oscillate->add_option("--fit-lo", osc_fit_lo, "mu fit window start");
  oscillate->add_option("--fit-hi", osc_fit_hi, "mu fit window end");
  oscillate->add_option("--grid-lo", osc_grid_lo, "evaluation grid start (disjoint from the fit window)");
  oscillate->add_option("--grid-points", osc_grid_points, "evaluation grid size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (roots->parsed()) {
      finish_common(roots_o, roots);
      return cmd_roots(roots_o, cmdline);
    }
    if (tree->parsed()) {
      finish_common(tree_o, tree);
      if (keys_file.empty() && tree->get_option("--random")->count() == 0) {
        throw mst::DomainError("tree: need --keys-file or --random");
      }
      return cmd_tree(tree_o, keys_file, random_n, dump, cmdline);
    }
    if (mean->parsed()) {
      finish_common(mean_o, mean);
      return cmd_mean(mean_o, mean_nmax, cmdline);
    }
    if (fixpoint->parsed()) {
      finish_common(fix_o, fixpoint);
      const bool have_mu = omu_re->count() > 0 || omu_im->count() > 0;
      if (have_mu && (omu_re->count() == 0 || omu_im->count() == 0)) {
        throw mst::DomainError("fixpoint: --mu-re and --mu-im must be given together");
      }
      return cmd_fixpoint(fix_o, fix_samples, fix_generations, fix_fit_lo, fix_fit_hi,
                          have_mu, {mu_re, mu_im}, cmdline);
    }
    if (compare->parsed()) {
      finish_common(cmp_o, compare);
      return cmd_compare(cmp_o, grid, cmp_samples, cmp_generations, cmp_fit_lo,
                         cmp_fit_hi, cmdline);
    }
    if (oscillate->parsed()) {
      finish_common(osc_o, oscillate);
      if (osc_fit_hi >= osc_grid_lo) {
        throw mst::DomainError("oscillate: the fit window must end before --grid-lo");
      }
      return cmd_oscillate(osc_o, osc_nmax, osc_fit_lo, osc_fit_hi, osc_grid_lo,
                           osc_grid_points, cmdline);
    }
  } catch (const mst::ConvergenceFailure& e) {
    std::cerr << "error (non-convergence): " << e.what() << "\n";
    return 3;
  } catch (const mst::NotContractive& e) {
    std::cerr << "error (non-convergence): " << e.what() << "\n";
    return 3;
  } catch (const mst::IllConditioned& e) {
    std::cerr << "error (non-convergence): " << e.what() << "\n";
    return 3;
  } catch (const mst::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
