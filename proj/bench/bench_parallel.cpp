// Serial against OpenMP timing of the main sweeps; results must match bit for bit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include <omp.h>

#include "dunkl/inequalities.hpp"

using namespace dunkl;

namespace {

double time_it(const std::function<InequalityReport()>& f, InequalityReport& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const InequalityReport& a, const InequalityReport& b) {
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    if (a.records[i].lhs != b.records[i].lhs || a.records[i].bound != b.records[i].bound) return false;
  }
  return true;
}

void run(const std::string& name, const std::function<InequalityReport(Execution)>& job) {
  InequalityReport s, p;
  job(Execution::serial);  // warm the quadrature rule caches
  const double ts = time_it([&] { return job(Execution::serial); }, s);
  const double tp = time_it([&] { return job(Execution::parallel); }, p);
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2f  identical %s\n", name.c_str(), ts, tp, ts / tp,
              same(s, p) ? "yes" : "NO");
}

}  // namespace

int main() {
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
  const KernelSpec dho = make_spec(Family::dho, Multiplicity::uniform(3, 1.0));
  const GridSpec grid = random_grid(3, log_spaced(0.05, 5.0, 20), 500, 1);
  run("liyau sweep d=3 (1e4 pts)", [&](Execution e) { return liyau_sweep(dho, grid, 1e-8, LhsPath::closed_moment, e); });

  const GridSpec small = random_grid(2, {0.3, 1.0}, 50, 2);
  run("liyau fd oracle d=2", [&](Execution e) {
    return liyau_sweep(make_spec(Family::dunkl_heat, Multiplicity::uniform(2, 0.7)), small, 1e-8, LhsPath::fd_oracle, e);
  });

  Rng rng(3);
  const Solution u(random_mixture(2, rng), make_spec(Family::dho, Multiplicity::uniform(2, 1.0)));
  run("solution Li-Yau d=2", [&](Execution e) { return solution_liyau_check(u, small, 1e-8, e); });

  const auto tuples = random_harnack_tuples(1, 500, 0.05, 3.0, 4);
  const Solution u1(random_mixture(1, rng), make_spec(Family::dunkl_heat, Multiplicity::uniform(1, 1.0)));
  run("solution Harnack d=1", [&](Execution e) {
    return harnack_check(log_solution(u1), Family::dunkl_heat, u1.spec().mult, tuples, HarnackVariant::sharp, 1e-6, e);
  });
}
