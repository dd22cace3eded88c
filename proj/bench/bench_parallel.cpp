// Parallel kernels against their serial references: coefficient-parallel
// series multiplication over parametric coefficients, and the amplitude-
// parallel period scan. Results must be identical; only timing differs.

#include <omp.h>

#include <chrono>
#include <cstdio>

#include <CLI11.hpp>

#include "isochron/analysis.hpp"

using namespace isochron;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parallel vs serial kernels"};
  int reps = 3, order = 12, amplitudes = 32;
  app.add_option("--reps", reps, "repetitions (best time is reported)");
  app.add_option("--order", order, "series order for the multiplication kernel");
  app.add_option("--amplitudes", amplitudes, "number of scan amplitudes");
  CLI11_PARSE(app, argc, argv);

  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-28s %12s %12s %8s %s\n", "kernel", "serial [s]", "parallel [s]", "speedup", "identical");

  // Symbolic Loud pipeline series: dense RatFun coefficients in D, F.
  FamilySpec loud = catalog_example("loud").spec;
  loud.order = order;
  auto r = reduce_to_conservative(instantiate_family(loud), order);
  const RSeries& a = r.expF;
  const RSeries& b = r.phi;
  RSeries ps, pp;
  double ts = best_of(reps, [&] { ps = mul_serial(a, b); });
  double tp = best_of(reps, [&] { pp = mul_parallel(a, b); });
  std::printf("%-28s %12.4f %12.4f %8.2f %s\n", "series mul (Loud, symbolic)", ts, tp, ts / tp, ps == pp ? "yes" : "NO");

  NumericSystem ns = numeric_model(instantiate_family(catalog_example("loud-0-1/4").spec));
  std::vector<double> amps;
  for (int i = 1; i <= amplitudes; ++i) amps.push_back(0.25 * i / amplitudes);
  IntegratorConfig cfg;
  PeriodScan ss, sp;
  ts = best_of(reps, [&] { ss = scan_period_serial(ns, amps, cfg); });
  tp = best_of(reps, [&] { sp = scan_period(ns, amps, cfg); });
  bool same = ss.rows.size() == sp.rows.size();
  for (size_t i = 0; same && i < ss.rows.size(); ++i)
    same = ss.rows[i].period_ode == sp.rows[i].period_ode && ss.rows[i].period_quad == sp.rows[i].period_quad;
  std::printf("%-28s %12.4f %12.4f %8.2f %s\n", "period scan (Loud 0, 1/4)", ts, tp, ts / tp, same ? "yes" : "NO");
  return ps == pp && same ? 0 : 1;
}
