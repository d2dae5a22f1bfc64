#pragma once

#include <functional>
#include <vector>

#include "parex/linalg.hpp"
#include "parex/problem.hpp"

namespace parex {

// Strictly increasing nodes x_0 < ... < x_N; x_0 and x_N carry the
// homogeneous Dirichlet condition.
struct SpaceMesh {
  std::vector<double> nodes;

  explicit SpaceMesh(std::vector<double> ns);
  static SpaceMesh uniform(double a, double b, int n_elements);

  int n_elements() const { return static_cast<int>(nodes.size()) - 1; }
  int n_interior() const { return static_cast<int>(nodes.size()) - 2; }
  double h(int e) const { return nodes[e] - nodes[e - 1]; }  // e = 1..N
  double x_left() const { return nodes.front(); }
  double x_right() const { return nodes.back(); }
};

// Interior nodal coefficients of a P1 function with zero boundary trace.
struct GridFunction {
  const SpaceMesh* mesh = nullptr;
  std::vector<double> v;

  GridFunction() = default;
  explicit GridFunction(const SpaceMesh& m) : mesh(&m), v(m.n_interior(), 0.0) {}
  GridFunction(const SpaceMesh& m, std::vector<double> vals);

  // Piecewise linear evaluation; zero at and beyond the boundary nodes.
  double operator()(double x) const;

  // Exact sup norm of a P1 function (max over nodal values).
  double inf_norm() const;
};

GridFunction nodal_interpolate(const SpaceMesh& mesh, const SpatialFn& f);

// mass(k,l)      = int phi_k phi_l
// stiffness(k,l) = int d phi_k' phi_l' + int r phi_k phi_l
// both over interior basis functions, 5-point Gauss per element.
struct OperatorMatrices {
  SymTridiag mass;
  SymTridiag stiffness;  // stiffness + reaction
  const SpaceMesh* mesh = nullptr;
};

// Throws std::invalid_argument ("non-positive-diffusion") when the sampled
// minimum of d is not positive.
OperatorMatrices assemble(const ProblemSpec& problem, const SpaceMesh& mesh);

// Load vector b_k = int g phi_k, 5-point Gauss per element. Two-pass
// element/gather kernel: parallel over elements, deterministic gather.
void assemble_load(const SpaceMesh& mesh, const SpatialFn& g, std::vector<double>& out);

// Solves stiffness * y = load by the (symmetric) Thomas algorithm with one
// refinement sweep; residual is kept near machine precision.
GridFunction elliptic_solve(const OperatorMatrices& mats, const std::vector<double>& load);

// One backward Euler substep: (mass/delta + stiffness) v = mass v_prev/delta + fvec.
GridFunction euler_substep(const OperatorMatrices& mats, const GridFunction& v_prev,
                           double delta, const std::vector<double>& fvec);

// Hot-path variant reusing a prefactored system matrix.
void euler_substep_factored(const TridiagFactor& factor, const SymTridiag& system,
                            const SymTridiag& mass, const std::vector<double>& v_prev,
                            double delta, const std::vector<double>& fvec,
                            std::vector<double>& out, std::vector<double>& scratch);

// Max of |f| over `samples_per_element` equispaced points per element,
// endpoints included. samples_per_element >= 2.
double sup_norm_sampled(const SpaceMesh& mesh, int samples_per_element,
                        const std::function<double(double)>& f);

}  // namespace parex
