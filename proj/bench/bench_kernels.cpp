// Timing comparison of the OpenMP kernels against their serial reference
// paths. Not a correctness test (test_parallel asserts bitwise equality);
// this prints a small table of timings and speedups.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "parex/estimator.hpp"
#include "parex/harness.hpp"
#include "parex/parallel.hpp"

using namespace parex;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    best = std::min(best, dt);
  }
  return best;
}

void report(const std::string& name, double serial_s, double parallel_s) {
  std::printf("%-28s %10.1f ms %10.1f ms %8.2fx\n", name.c_str(), serial_s * 1e3,
              parallel_s * 1e3, serial_s / parallel_s);
}

void run_both(const std::string& name, int reps, const std::function<void()>& fn) {
  par::set_enabled(false);
  const double s = time_best_of(reps, fn);
  par::set_enabled(true);
  const double p = time_best_of(reps, fn);
  report(name, s, p);
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", par::max_threads());
  std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  const ProblemSpec problem = builtin_test_problem();

  {
    const SpaceMesh mesh = SpaceMesh::uniform(problem.x_a, problem.x_b, 400000);
    std::vector<double> load;
    run_both("load assembly (N=4e5)", 5, [&] {
      assemble_load(mesh, [&](double x) { return problem.f(x, 0.37); }, load);
    });
    run_both("matrix assembly (N=4e5)", 5, [&] { (void)assemble(problem, mesh); });
    GridFunction g = nodal_interpolate(mesh, [](double x) { return std::sin(3.0 * x); });
    run_both("sup-norm sampling (N=4e5)", 5, [&] {
      (void)sup_norm_sampled(mesh, 8, [&](double x) { return g(x) - std::cos(x); });
    });
  }

  {
    const SpaceMesh mesh = SpaceMesh::uniform(problem.x_a, problem.x_b, 1024);
    const TimeMesh tmesh = TimeMesh::uniform(problem.T, 512);
    RunOptions opts;
    opts.keep_trajectory = false;
    run_both("solver run (M=512,N=1024,L=3)", 3, [&] {
      (void)run(problem, mesh, tmesh, 3, opts);
    });
  }

  {
    const SpaceMesh mesh = SpaceMesh::uniform(problem.x_a, problem.x_b, 256);
    const TimeMesh tmesh = TimeMesh::uniform(problem.T, 128);
    const Trajectory traj = run(problem, mesh, tmesh, 3);
    const OperatorMatrices mats = assemble(problem, mesh);
    const ReconstructionSet recon = build_reconstruction(problem, traj, mats);
    const auto est = default_elliptic_estimator(problem);
    run_both("estimator (M=128,N=256,L=3)", 3, [&] {
      (void)estimate_error(problem, traj, recon, *est);
    });
    run_both("reconstruction (M=128,L=3)", 3, [&] {
      (void)build_reconstruction(problem, traj, mats);
    });
  }

  par::set_enabled(true);
  return 0;
}
