#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "parex/estimator.hpp"

namespace parex {

// Final-time reference computed by self-refinement: the same solver with
// L_ref = min(L+2, 5) on meshes refined by `factor` (and factor/2 for the
// consistency gap).
struct ReferenceSolution {
  SpaceMesh mesh;
  std::vector<double> values;  // interior nodal values on the fine mesh
  double gap = 0.0;            // sup distance between the two finest levels

  double operator()(double x) const;
};

ReferenceSolution reference_solution(const ProblemSpec& problem, int base_N, int base_M,
                                     int L, int factor = 16);

// max over 8 samples per element (offsets r h/7, r = 0..7) of |u_h - u_ref|.
double measure_error(const GridFunction& u_final, const std::function<double(double)>& u_ref);

struct RunResult {
  int M = 0, N = 0, L = 0;
  double e_M = 0.0;
  double p_M = 0.0;  // NaN when undefined (first row)
  double eta_init = 0.0, eta_f = 0.0, eta_t = 0.0, eta_ell = 0.0, eta_total = 0.0;
  double chi_M = 0.0;  // e_M / eta_total; NaN when eta_total == 0
  double wall_s = 0.0;
  bool oracle_ok = true;
  double oracle_gap = 0.0;
};

struct RunConfig {
  int L = 2;
  std::vector<int> M_list;
  int N = 0;                 // used when couple_h_tau is false
  bool couple_h_tau = true;  // N = round(M (x_b - x_a) / T)
  std::string estimator = "default";  // default | zero
  int oracle_factor = 16;
  bool verbose = false;
};

// One table row: solve, reconstruct, estimate, compare against the
// self-refined reference. Throws std::runtime_error on solver failure; an
// unconverged oracle is reported via oracle_ok/oracle_gap.
RunResult run_single(const ProblemSpec& problem, int L, int M, int N,
                     const EllipticEstimator& estimator, int oracle_factor,
                     bool verbose = false);

// Rows for every M in config.M_list (a doubling sequence), in order; p_M is
// filled from consecutive rows.
std::vector<RunResult> run_table(const ProblemSpec& problem, const RunConfig& config);

// CSV with header
// M,N,L,e_M,p_M,eta_init,eta_f,eta_t,eta_ell,eta_total,chi_M,wall_s
// Floats with 6 significant digits; empty field for undefined p_M / chi_M.
std::string format_csv(const std::vector<RunResult>& rows);
std::string format_markdown(const std::vector<RunResult>& rows);

// key = value problem description with coefficient expressions (see
// expr.hpp). Keys: x_a x_b T d r f u0 kappa0 kappa1 kappa1_prime gamma.
ProblemSpec problem_from_file(const std::string& path);

// Command line driver (flags parsed with CLI11). Returns the process exit
// status: 0 ok, 1 solver/oracle failure, 2 usage error.
int cli_main(int argc, const char* const* argv);

}  // namespace parex
