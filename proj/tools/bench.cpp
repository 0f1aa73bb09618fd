// Timing comparison between the parallel kernels and their single-threaded
// reference implementations. Results must agree exactly; only the wall time
// may differ.

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "locc/analysis.hpp"
#include "locc/catalog.hpp"
#include "locc/io.hpp"
#include "locc/search.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double time_ms(F&& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void report(const std::string& name, double serial_ms, double parallel_ms,
            bool equal) {
  std::cout << std::left << std::setw(28) << name << std::right << std::fixed
            << std::setprecision(1) << std::setw(10) << serial_ms << " ms"
            << std::setw(10) << parallel_ms << " ms   speedup "
            << std::setprecision(2) << (serial_ms / parallel_ms) << "x   "
            << (equal ? "results equal" : "RESULTS DIFFER") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t samples =
      argc > 1 ? static_cast<std::size_t>(std::strtoull(argv[1], nullptr, 10))
               : 20000;
  const std::uint64_t seed = 99991;
  locc::Tolerance tol{1e-9, 1e-7};
  bool all_equal = true;

  std::cout << std::left << std::setw(28) << "benchmark" << std::right
            << std::setw(13) << "serial" << std::setw(13) << "parallel"
            << "\n";

  {
    locc::ScanResult rs, rp;
    const double ts = time_ms(
        [&] { rs = locc::domino_equivalence_scan_serial(samples, seed, tol); });
    const double tp =
        time_ms([&] { rp = locc::domino_equivalence_scan(samples, seed, tol); });
    const bool equal = rs.checked == rp.checked && rs.mismatches == rp.mismatches;
    all_equal = all_equal && equal;
    report("domino-scan (" + std::to_string(samples) + ")", ts, tp, equal);
  }

  const auto bench_search = [&](const std::string& entry, locc::SearchClass cls,
                                int r_min) {
    const auto set = locc::catalog::build(entry).set;
    locc::SearchSpec spec;
    spec.comm = cls;
    spec.r_min = r_min;
    locc::SearchResult rs, rp;
    spec.parallel = false;
    const double ts = time_ms([&] { rs = locc::search_protocols(set, spec); });
    spec.parallel = true;
    const double tp = time_ms([&] { rp = locc::search_protocols(set, spec); });
    bool equal = rs.found == rp.found && rs.nodes_explored == rp.nodes_explored &&
                 rs.family_exhausted == rp.family_exhausted;
    if (equal && rs.found)
      equal = locc::io::to_json(*rs.protocol) == locc::io::to_json(*rp.protocol);
    all_equal = all_equal && equal;
    report("search " + entry, ts, tp, equal);
  };

  bench_search("keep-rj-counterexample-5x5", locc::SearchClass::P2, 2);
  bench_search("bennett9", locc::SearchClass::P2, 1);
  bench_search("appc-5dim-3states", locc::SearchClass::P2, 2);

  return all_equal ? 0 : 1;
}
