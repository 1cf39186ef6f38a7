// Wall-clock comparison of the OpenMP kernels against their serial
// references. Both variants draw from identical per-sample streams, so the
// outputs are checked for equality along the way.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mst/charpoly.hpp"
#include "mst/fixpoint.hpp"
#include "mst/tree.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_once(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool equal) {
  std::printf("%-28s serial %8.3fs   openmp %8.3fs   speedup %5.2fx   equal %s\n",
              name, serial, parallel, serial / parallel, equal ? "yes" : "NO");
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif

  {
    const int m = 27, count = 4000;
    const long n = 10000;
    std::vector<long> a, b;
    const double ts = time_once([&] { a = mst::sample_space_batch_serial(m, n, count, 42); });
    const double tp = time_once([&] { b = mst::sample_space_batch(m, n, count, 42); });
    report("tree sampling (n=1e4)", ts, tp, a == b);
  }

  {
    mst::RootSet rs = mst::find_roots(27);
    mst::FixedPointSpec spec = mst::make_spec(27, rs.lambda2(), {-0.23, -0.88});
    mst::SamplePool pool;
    pool.samples.assign(200000, spec.mu);
    mst::SamplePool a, b;
    const double ts = time_once([&] {
      a = pool;
      for (int g = 1; g <= 5; ++g) a = mst::apply_T_population_serial(spec, a, 7u + g);
    });
    const double tp = time_once([&] {
      b = pool;
      for (int g = 1; g <= 5; ++g) b = mst::apply_T_population(spec, b, 7u + g);
    });
    report("pool dynamics (N=2e5, 5 gen)", ts, tp, a.samples == b.samples);
  }

  return 0;
}
