// Serial vs OpenMP timings for model counting and sweeps.
#include <chrono>
#include <cstdio>

#include "memsest/countest.hpp"
#include "memsest/csv.hpp"
#include "memsest/sweep.hpp"

#ifdef MEMSEST_HAVE_OPENMP
#include <omp.h>
#endif

using namespace memsest;

template <class F>
double best_ms(F&& f, int reps = 3) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

int main() {
#ifdef MEMSEST_HAVE_OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif

  struct Case {
    const char* cond;
    const char* domains;
  };
  const Case cases[] = {
      {"x * y > 1000 && x + y < 150", "x=-500..500,y=-500..500"},
      {"x % 7 == y % 5 && x - y != 3", "x=0..1999,y=0..1999"},
      {"x * x + y * y <= 250000 && z - x > 0", "x=-600..600,y=-600..600,z=-3..3"},
  };
  std::printf("%-40s %12s %12s %12s %8s\n", "model count", "count", "serial ms", "parallel ms", "speedup");
  for (const auto& c : cases) {
    Domains d;
    std::string spec = c.domains;
    std::size_t pos = 0;
    while (pos < spec.size()) {
      auto comma = spec.find(',', pos);
      if (comma == std::string::npos)
        comma = spec.size();
      auto [name, dom] = parse_domain(spec.substr(pos, comma - pos));
      d[name] = dom;
      pos = comma + 1;
    }
    PathCondition pc{parse_conjunction(c.cond)};
    CountOptions opts;
    opts.budget = 100'000'000;
    std::uint64_t a = 0, b = 0;
    double ts = best_ms([&] { a = model_count_serial(pc, d, opts.budget); });
    double tp = best_ms([&] { b = model_count(pc, d, opts); });
    if (a != b) {
      std::printf("MISMATCH on %s: %llu vs %llu\n", c.cond, static_cast<unsigned long long>(a),
                  static_cast<unsigned long long>(b));
      return 1;
    }
    std::printf("%-40s %12llu %12.2f %12.2f %7.2fx\n", c.cond, static_cast<unsigned long long>(a), ts, tp, ts / tp);
  }

  std::string dir = MEMSEST_CORPUS_DIR;
  SweepSpec spec = parse_sweep_spec(read_file(dir + "/sweep.toml"), dir);
  std::size_t rows = 0;
  double ts = best_ms([&] { rows = sweep_serial(spec).size(); }, 1);
  double tp = best_ms([&] { sweep(spec); }, 1);
  std::printf("%-40s %12zu %12.2f %12.2f %7.2fx\n", "corpus sweep (rows)", rows, ts, tp, ts / tp);
  return 0;
}
