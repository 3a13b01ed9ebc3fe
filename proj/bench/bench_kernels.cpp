// Serial reference vs OpenMP kernels: B+ grid sampling and the rotation scan.

#include <chrono>
#include <cstdio>
#include <omp.h>

#include "qpbraid/bplus_graph.hpp"
#include "qpbraid/expr_parser.hpp"

using namespace qpbraid;

namespace {

template <class F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

bool same_graph(const BPlusGraph& a, const BPlusGraph& b) {
  if (a.edges.size() != b.edges.size() || a.flagged.size() != b.flagged.size()) return false;
  for (std::size_t k = 0; k < a.edges.size(); ++k)
    if (a.edges[k].label != b.edges[k].label || a.edges[k].points != b.edges[k].points) return false;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int res = argc > 1 ? std::atoi(argv[1]) : 192;
  std::printf("threads: %d\n", omp_get_max_threads());

  const char* curves[] = {"w^2 - z", "w^3 - 3*w + 2*z^4"};
  for (const char* expr : curves) {
    auto a = analyze(parse_polynomial_expression(expr), 0.1);
    const Region region{-2, -2, 2, 2};
    BPlusGraph gp, gs;
    const double tp = best_of(3, [&] { gp = sample_bplus(a.f, a.branch, region, res); });
    const double ts = best_of(3, [&] { gs = sample_bplus_serial(a.f, a.branch, region, res); });
    std::printf("sample_bplus  %-20s res %4d  serial %8.4f s  omp %8.4f s  speedup %5.2f  identical %s\n",
                expr, res, ts, tp, ts / tp, same_graph(gp, gs) ? "yes" : "NO");
  }

  auto a = analyze(parse_polynomial_expression("w^4 - 3*w^2 + w*z^3 + z^5 - 1"), 0.1);
  const auto fibers = branch_fibers(a.f, a.branch);
  const int samples = 200000;
  std::vector<double> mp, ms;
  const double tp = best_of(3, [&] { mp = rotation_margins(fibers, samples); });
  const double ts = best_of(3, [&] { ms = rotation_margins_serial(fibers, samples); });
  std::printf("rotation scan %-20s n %6d    serial %8.4f s  omp %8.4f s  speedup %5.2f  identical %s\n",
              "quartic", samples, ts, tp, ts / tp, mp == ms ? "yes" : "NO");
  return 0;
}
