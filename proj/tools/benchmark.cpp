// Times the verification harness in serial and parallel mode and checks that
// the two produce the same report.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "json.hpp"
#include "rcm/report_json.hpp"
#include "rcm/verify.hpp"

namespace {

double run_once(const rcm::GridConfig& cfg, rcm::RunMode mode,
                rcm::Report& out) {
  const auto t0 = std::chrono::steady_clock::now();
  out = rcm::run_verification(cfg, mode);
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

nlohmann::json comparable(const rcm::Report& rep) {
  nlohmann::json j = rcm::report_to_json(rep);
  j.erase("environment");  // the mode field differs by construction
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  rcm::GridConfig cfg;

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::cout << "threads: " << threads << ", repeats: " << repeats << '\n';

  rcm::Report serial_rep, parallel_rep;
  double best_serial = 1e300, best_parallel = 1e300;
  for (int i = 0; i < repeats; ++i)
    best_serial =
        std::min(best_serial, run_once(cfg, rcm::RunMode::serial, serial_rep));
  for (int i = 0; i < repeats; ++i)
    best_parallel = std::min(
        best_parallel, run_once(cfg, rcm::RunMode::parallel, parallel_rep));

  const bool same = comparable(serial_rep) == comparable(parallel_rep);

  std::cout << "records per run: " << serial_rep.records.size() << '\n';
  std::cout << "serial:   " << best_serial << " s\n";
  std::cout << "parallel: " << best_parallel << " s\n";
  std::cout << "speedup:  " << best_serial / best_parallel << "x\n";
  std::cout << "reports identical: " << (same ? "yes" : "NO") << '\n';
  std::cout << "serial fail count: " << serial_rep.summary.fail << '\n';
  return same && serial_rep.summary.fail == 0 ? 0 : 1;
}
