// Timing comparison: serial reference vs OpenMP assembly, and the field-grid
// sweep. Run manually; prints wall times and checks the parallel results are
// bit-identical to the serial ones.

#include <chrono>
#include <cstdio>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "igabem/fields.hpp"
#include "igabem/study.hpp"

using namespace igabem;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both paths run serially\n");
#endif

  CaseConfig cfg = benchmark2_config();
  cfg.mesh.elements = 80;
  const ResolvedCase rc = resolve_case(cfg);

  Problem serial = rc.problem;
  serial.options.parallelism = Parallelism::kSerial;
  Problem parallel = rc.problem;
  parallel.options.parallelism = Parallelism::kOpenMP;

  // warm-up + correctness
  const LinearSystem ref = assemble(serial);
  const LinearSystem par = assemble(parallel);
  const bool identical = std::memcmp(ref.matrix.data().data(), par.matrix.data().data(),
                                     ref.matrix.data().size() * sizeof(double)) == 0 &&
                         ref.rhs == par.rhs;
  std::printf("parallel assembly bit-identical to serial: %s\n", identical ? "yes" : "NO");

  const int reps = 3;
  auto t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) assemble(serial);
  const double t_serial = seconds(t0) / reps;
  t0 = clock_type::now();
  for (int r = 0; r < reps; ++r) assemble(parallel);
  const double t_parallel = seconds(t0) / reps;
  std::printf("assembly (Ne=%d, order %d): serial %.3f s, parallel %.3f s, speedup %.2fx\n",
              cfg.mesh.elements, cfg.quadrature.regular_order, t_serial, t_parallel,
              t_serial / t_parallel);

  // field grid sweep
  const SurfaceSolution sol = solve_problem(rc.problem);
  const FieldEvaluator fields(sol, 64);
  const int count = 101;
  const double halfw = 2.0 * rc.half_length;
  std::vector<double> vm(static_cast<std::size_t>(count) * count, 0.0);

  const auto sweep = [&](bool use_omp) {
    const auto tick = clock_type::now();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16) if (use_omp)
#endif
    for (int idx = 0; idx < count * count; ++idx) {
      const int i = idx % count, j = idx / count;
      const Vec2 x{halfw * (2.0 * i / (count - 1.0) - 1.0),
                   1.0 + halfw * (2.0 * j / (count - 1.0) - 1.0)};
      try {
        vm[idx] = fields.sample(x).von_mises;
      } catch (const near_surface_error&) {
        vm[idx] = 0.0;
      }
    }
    return seconds(tick);
  };
  const double grid_serial = sweep(false);
  const double grid_parallel = sweep(true);
  std::printf("field grid %dx%d: serial %.3f s, parallel %.3f s, speedup %.2fx\n", count, count,
              grid_serial, grid_parallel, grid_serial / grid_parallel);
  return identical ? 0 : 1;
}
