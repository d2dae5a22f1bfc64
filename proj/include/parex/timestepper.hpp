#pragma once

#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "parex/fem1d.hpp"

namespace parex {

// Weights alpha_1..alpha_L of L-step Richardson extrapolation of backward
// Euler: sum alpha_l = 1 and sum alpha_l l^{-m} = 0 for m = 1..L-1.
struct ExtrapolationTableau {
  int order = 0;
  std::vector<double> alpha;
};

// Computes the tableau by a direct solve of the defining linear system.
// Throws std::invalid_argument ("invalid-order") for L < 2 and
// std::runtime_error ("ill-conditioned-tableau") if the residual of the
// solve exceeds 1e-10.
ExtrapolationTableau extrapolation_tableau(int L);

struct TimeMesh {
  std::vector<double> nodes;  // 0 = t_0 < ... < t_M = T

  explicit TimeMesh(std::vector<double> ns);
  static TimeMesh uniform(double T, int M);

  int intervals() const { return static_cast<int>(nodes.size()) - 1; }
  double t(int j) const { return nodes[j]; }          // j = 0..M
  double tau(int j) const { return nodes[j] - nodes[j - 1]; }  // j = 1..M
  double final_time() const { return nodes.back(); }
};

// Provides the load vector of the time-interpolated source at a substep
// time: load(t, out).
using LoadProvider = std::function<void(double t, std::vector<double>& out)>;

// Caches LDL^T factorisations of (mass/delta + stiffness), keyed by delta;
// on uniform time meshes every step hits the cache.
class FactorCache {
 public:
  explicit FactorCache(const OperatorMatrices& mats) : mats_(&mats) {}

  struct Entry {
    SymTridiag system;
    TridiagFactor factor;
  };

  const Entry& at(double delta);

 private:
  const OperatorMatrices* mats_;
  std::map<double, std::unique_ptr<Entry>> entries_;
};

// One time step t_{j-1} -> t_j. substeps[l-1][k] holds the chain-l state
// after substep k+1 (so substeps[l-1].back() is v_l at t_j); the chains all
// start from u_prev. Chains are independent and run concurrently.
struct StepRecord {
  GridFunction u;    // extrapolated state at t_j
  GridFunction psi;  // nodal defect field at t_j
  std::vector<std::vector<std::vector<double>>> substeps;
};

StepRecord step(const OperatorMatrices& mats, FactorCache& cache,
                const ExtrapolationTableau& tableau, const GridFunction& u_prev,
                double t_left, double tau, const LoadProvider& load,
                bool keep_substeps = true);

// psi^j = -sum_l alpha_l (v_l^j - v_l^{j-1/l}) / (tau/l). v_last[l-1] is the
// final chain-l state, v_prev_last[l-1] the one before it (u_prev for l=1).
GridFunction psi_nodal(const ExtrapolationTableau& tableau,
                       const std::vector<const std::vector<double>*>& v_last,
                       const std::vector<const std::vector<double>*>& v_prev_last,
                       double tau, const SpaceMesh& mesh);

// Nodal trajectory of a full run. u_at(j)/psi_at(j) accept j = 0..M.
struct Trajectory {
  const SpaceMesh* mesh = nullptr;
  TimeMesh tmesh{std::vector<double>{0.0, 1.0}};
  int order = 0;
  GridFunction u0, psi0;
  std::vector<GridFunction> u, psi;  // index j-1 for j = 1..M

  const GridFunction& u_at(int j) const { return j == 0 ? u0 : u[j - 1]; }
  const GridFunction& psi_at(int j) const { return j == 0 ? psi0 : psi[j - 1]; }
};

struct RunOptions {
  bool keep_trajectory = true;  // false: only the final state is retained
};

// Full solve: u_h^0 = nodal interpolation of u0, then M extrapolated steps.
// The source consumed by the substeps is the piecewise interpolant of f of
// degree L-1 per interval (see reconstruct.hpp); psi^0 is defined by a mass
// solve of the defect identity at t = 0.
Trajectory run(const ProblemSpec& problem, const SpaceMesh& mesh,
               const TimeMesh& tmesh, int L, const RunOptions& opts = {});

}  // namespace parex
