// Timing harness: parallel tensor kernels against the serial reference
// implementations, with a max-difference check so a speedup that changes
// answers is caught immediately.
//
//   bench_kernels [sites] [slots] [reps]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "model.hpp"
#include "rng.hpp"
#include "tensor_ops.hpp"

using namespace bogolab;
using clock_t_ = std::chrono::steady_clock;

namespace {

double time_best(int reps, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = clock_t_::now();
    f();
    best = std::min(best, std::chrono::duration<double>(clock_t_::now() - t0).count());
  }
  return best;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

int main(int argc, char** argv) {
  int sites = argc > 1 ? std::atoi(argv[1]) : 4;
  int slots = argc > 2 ? std::atoi(argv[2]) : 8;
  int reps = argc > 3 ? std::atoi(argv[3]) : 5;
  if (sites < 2 || slots < 2 || reps < 1) {
    std::fprintf(stderr, "usage: bench_kernels [sites>=2] [slots>=2] [reps>=1]\n");
    return 1;
  }

  TensorShape sh = TensorShape::make(sites, slots);
  Lattice lat = Lattice::make(1, sites);
  Potential v = Potential::gaussian(lat, 1.0, 0.9);

  Rng rng(42);
  std::vector<cplx> in = rng.cgauss_tensor(sh.size);
  // the pair embedding spreads slots (0,1) of a full-width symmetric source
  std::vector<cplx> pair = rng.cgauss_tensor(sh.size);
  symmetrize(sh, pair);
  Eigen::VectorXcd phi = rng.cgauss_vector(sites);
  phi /= phi.norm();

#ifdef _OPENMP
  std::printf("tensor %d^%d = %lld amplitudes, %d threads, best of %d\n", sites, slots,
              static_cast<long long>(sh.size), omp_get_max_threads(), reps);
#else
  std::printf("tensor %d^%d = %lld amplitudes, serial build, best of %d\n", sites, slots,
              static_cast<long long>(sh.size), reps);
#endif
  std::printf("%-24s %10s %10s %8s %10s\n", "kernel", "serial ms", "par ms", "speedup",
              "max diff");

  struct Row {
    const char* name;
    std::function<void(std::vector<cplx>&)> serial, par;
  };
  std::vector<Row> rows = {
      {"slot_projector",
       [&](std::vector<cplx>& out) { ref::apply_slot_projector(sh, 1, phi, in, out); },
       [&](std::vector<cplx>& out) { apply_slot_projector(sh, 1, phi, in, out); }},
      {"neg_laplacian_all",
       [&](std::vector<cplx>& out) { ref::add_neg_laplacian_all(sh, lat, 0.5, in, out); },
       [&](std::vector<cplx>& out) { add_neg_laplacian_all(sh, lat, 0.5, in, out); }},
      {"pair_diag_all",
       [&](std::vector<cplx>& out) { ref::add_pair_diag_all(sh, lat, v.values, 0.25, in, out); },
       [&](std::vector<cplx>& out) { add_pair_diag_all(sh, lat, v.values, 0.25, in, out); }},
      {"pair_embeddings",
       [&](std::vector<cplx>& out) { ref::add_pair_embeddings(sh, pair, 0.7, out); },
       [&](std::vector<cplx>& out) { add_pair_embeddings(sh, pair, 0.7, out); }},
  };

  bool all_close = true;
  for (const Row& r : rows) {
    std::vector<cplx> out_s(sh.size), out_p(sh.size);
    double ts = time_best(reps, [&] {
      std::fill(out_s.begin(), out_s.end(), cplx(0));
      r.serial(out_s);
    });
    double tp = time_best(reps, [&] {
      std::fill(out_p.begin(), out_p.end(), cplx(0));
      r.par(out_p);
    });
    double d = max_diff(out_s, out_p);
    if (d > 1e-12) all_close = false;
    std::printf("%-24s %10.3f %10.3f %7.2fx %10.2e\n", r.name, ts * 1e3, tp * 1e3, ts / tp, d);
  }

  if (!all_close) {
    std::printf("mismatch above 1e-12 between serial and parallel kernels\n");
    return 1;
  }
  return 0;
}
