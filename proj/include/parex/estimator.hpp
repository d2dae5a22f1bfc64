#pragma once

#include <array>
#include <memory>
#include <vector>

#include "parex/reconstruct.hpp"

namespace parex {

// Maximum-norm a posteriori estimator for the elliptic problem
// -(d y')' + r y = g with homogeneous Dirichlet conditions:
// estimate(y_h, g) bounds ||y_h - y||_inf.
class EllipticEstimator {
 public:
  virtual ~EllipticEstimator() = default;
  virtual double estimate(const GridFunction& y_h, const SpatialFn& g) const = 0;
};

// Interval-residual estimator
//   max_e (h_e^2 / 8) max_{x in e} |g(x) - r(x) y_h(x)| / d_min
// with 8 sample points per element (y_h'' vanishes elementwise for P1).
std::unique_ptr<EllipticEstimator> default_elliptic_estimator(const ProblemSpec& problem);

// Always returns 0; for ablation runs.
std::unique_ptr<EllipticEstimator> zero_elliptic_estimator();

// sigma_j = exp(-gamma (T - t_j)), j = 0..M.
double sigma(int j, const TimeMesh& tmesh, double gamma);

// int_{I_j} (t_j - t)(t - t_{j-1}) / (T - t) dt, in closed form
// (tau_M^2/2 for j = M; a cancellation-safe series branch is used when
// tau_j << T - t_j). Cross-validated against adaptive quadrature in the
// test suite.
double weight_integral(int j, const TimeMesh& tmesh);

// Quadrature fallback for the same integral.
double weight_integral_quadrature(int j, const TimeMesh& tmesh, double rel_tol = 1e-13);

// Green's-function weights:
//   mu_{j,0} = kappa0 tau_j,
//   mu_{j,i} = min{ (kappa0 tau_j/2) ||P_i||_1,
//                   (kappa1/tau_j) weight_integral(j) + kappa1' tau_j^2/24 },  i >= 1.
double mu(int j, int i, const TimeMesh& tmesh, const GreenFunctionBounds& bounds);

// kappa0 sigma_0 ||u0 - u_h^0||_inf (8 samples per element).
double eta_init(const ProblemSpec& problem, const GridFunction& u_h0, const TimeMesh& tmesh);

struct EtaF {
  double total = 0.0;
  std::vector<double> per_interval;
};

// kappa0 sum_j sigma_j int_{I_j} ||(f - fhat)(s)||_inf ds, time integral by
// (2L+2)-point Gauss, spatial sup sampled at 8 points per element.
EtaF eta_f(const ProblemSpec& problem, const FhatSet& fhat, const SpaceMesh& mesh);

struct EtaT {
  double total = 0.0;
  std::vector<double> per_interval;
  std::vector<std::array<double, 2>> mu_used;  // (mu_{j,L-2}, mu_{j,L-1})
};

// sum_j sigma_j ( mu_{j,L-2} ||A_j||_inf + mu_{j,L-1} ||B_j||_inf ) with
// (A_j, B_j) the two-term coefficients of psi + du_h/dt.
EtaT eta_t(const ReconstructionSet& recon, const GreenFunctionBounds& bounds);

struct EtaEll {
  double total = 0.0;
  double endpoints = 0.0;  // kappa0 (sigma_0 eta_ell^0 + eta_ell^M)
  std::vector<double> per_interval;
};

// kappa0 { sigma_0 eta(u_h^0, fhat(0)+psi^0) + eta(u_h^M, fhat(T)+psi^M) }
// + kappa0 sum_j sigma_j sum_{i=1}^{L-1} eta(Delta^i u^j, Delta^i fhat^j + Delta^i psi^j) ||P_{i-1}||_1.
EtaEll eta_ell_component(const EllipticEstimator& estimator, const ReconstructionSet& recon,
                         const Trajectory& traj, const GreenFunctionBounds& bounds);

struct EstimatorReport {
  double eta_init = 0.0;
  double eta_f = 0.0;
  double eta_t = 0.0;
  double eta_ell = 0.0;
  double total = 0.0;  // (((eta_init + eta_f) + eta_t) + eta_ell), fixed order

  std::vector<double> eta_f_per_interval;
  std::vector<double> eta_t_per_interval;
  std::vector<double> eta_ell_per_interval;
  double eta_ell_endpoints = 0.0;

  std::vector<double> sigma_used;                 // j = 0..M
  std::vector<std::array<double, 2>> mu_used;     // per interval
};

EstimatorReport assemble_report(double init, const EtaF& f, const EtaT& t, const EtaEll& ell,
                                const TimeMesh& tmesh, double gamma);

// Convenience driver running all four components.
EstimatorReport estimate_error(const ProblemSpec& problem, const Trajectory& traj,
                               const ReconstructionSet& recon,
                               const EllipticEstimator& estimator);

}  // namespace parex
