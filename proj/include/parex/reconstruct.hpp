#pragma once

#include <span>
#include <utility>
#include <vector>

#include "parex/polybasis.hpp"
#include "parex/timestepper.hpp"

namespace parex {

// Degree-(L-1) polynomial in time on one mesh interval, in the basis
// {1, P_1 o xi_j, N_2 o xi_j, ..., N_{L-1} o xi_j} with GridFunction
// coefficients delta[0..L-1]. By construction delta[0] and delta[1] are the
// endpoint average and half-difference.
struct DeltaSlab {
  IntervalMap map;
  std::vector<GridFunction> delta;

  int order() const { return static_cast<int>(delta.size()); }

  // Value at t in the closed interval; throws std::domain_error otherwise.
  GridFunction eval(double t) const;

  // Time derivative at t: (2/tau) sum_{i>=1} delta[i] P_{i-1}(xi(t)).
  GridFunction derivative(double t) const;
};

// Coefficient matrix C (L x L, row-major) of the collocation map from values
// at the equispaced reference nodes xi_m = -1 + 2m/(L-1) to the delta
// coefficients. Rows 0 and 1 are the exact endpoint formulas.
enum class FhatNodes { equispaced, chebyshev };
std::vector<double> delta_collocation_matrix(int L, FhatNodes nodes = FhatNodes::equispaced);

// Reference interpolation nodes used by the collocation map.
std::vector<double> delta_collocation_nodes(int L, FhatNodes nodes = FhatNodes::equispaced);

// Collocation of grid-function values given at the L reference nodes of the
// interval.
DeltaSlab to_delta_basis(const IntervalMap& map, std::span<const GridFunction> node_values,
                         FhatNodes nodes = FhatNodes::equispaced);

// Piecewise interpolant of the source f: on each interval a polynomial of
// degree L-1 interpolating f at the endpoints and L-2 interior points.
// Holds no load vectors; they are produced per interval on demand.
class FhatSet {
 public:
  FhatSet(const ProblemSpec& problem, const TimeMesh& tmesh, int L,
          FhatNodes nodes = FhatNodes::equispaced);

  int order() const { return L_; }
  const TimeMesh& tmesh() const { return *tmesh_; }

  // k-th interpolation time of interval j, k = 0..L-1 (k=0 and k=L-1 are the
  // interval endpoints).
  double node_time(int j, int k) const;

  // fhat(x, t) on interval j (t may be an endpoint).
  double eval_on(int j, double x, double t) const;
  // Interval located from t.
  double eval(double x, double t) const;

  // Delta^i fhat^j evaluated at x.
  double delta_eval(int j, int i, double x) const;

  // Load vectors of f(., node_time(j,k)) for k = 0..L-1. `reuse_first` may
  // pass the previous interval's last load (same time point) to skip its
  // recomputation.
  void node_loads(int j, const SpaceMesh& mesh,
                  std::vector<std::vector<double>>& out,
                  const std::vector<double>* reuse_first = nullptr) const;

  // Load vector of fhat(., t) on interval j as a combination of node loads.
  void load_at(int j, double t, const std::vector<std::vector<double>>& loads,
               std::vector<double>& out) const;

  // Load vector of Delta^i fhat^j from the node loads.
  void delta_load(int i, const std::vector<std::vector<double>>& loads,
                  std::vector<double>& out) const;

 private:
  void ref_weights(double xi, double* w) const;

  const ProblemSpec* problem_;
  const TimeMesh* tmesh_;
  int L_;
  std::vector<double> colloc_;     // row-major L x L
  std::vector<double> ref_nodes_;  // xi of the interpolation nodes
};

// Temporal reconstructions of u_h and psi on every interval, plus the source
// interpolant they are coupled to.
struct ReconstructionSet {
  std::vector<DeltaSlab> u;    // index j-1
  std::vector<DeltaSlab> psi;  // index j-1
  FhatSet fhat;
};

// Builds the slabs: endpoint deltas from the trajectory, then per interval
// the interleaved recursion
//   Delta^2 psi = 3 (Delta^0 psi + (2/tau) Delta^1 u),
//   Delta^i u   from the elliptic solve  stiffness * Delta^i u = load(Delta^i psi + Delta^i fhat),
//   Delta^{i+1} psi = (2i+1) (Delta^{i-1} psi / (2i-3) + (2/tau) Delta^i u).
// Intervals are independent and processed concurrently.
ReconstructionSet build_reconstruction(const ProblemSpec& problem, const Trajectory& traj,
                                       const OperatorMatrices& mats,
                                       FhatNodes nodes = FhatNodes::equispaced);

// Coefficients (A_j, B_j) of psi + du_h/dt = A_j P_{L-2} o xi_j + B_j P_{L-1} o xi_j:
//   L = 2:  A = Delta^0 psi + (2/tau) Delta^1 u,          B = Delta^1 psi;
//   L >= 3: A = Delta^{L-2} psi/(2L-5) + (2/tau) Delta^{L-1} u,
//           B = Delta^{L-1} psi/(2L-3).
std::pair<GridFunction, GridFunction> psi_plus_dudt_coeffs(const ReconstructionSet& recon, int j);

}  // namespace parex
