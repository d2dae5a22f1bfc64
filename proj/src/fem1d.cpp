#include "parex/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parex/parallel.hpp"
#include "parex/quadrature.hpp"

namespace parex {

SpaceMesh::SpaceMesh(std::vector<double> ns) : nodes(std::move(ns)) {
  if (nodes.size() < 3) throw std::invalid_argument("SpaceMesh: need at least 2 elements");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i - 1] < nodes[i])) {
      throw std::invalid_argument("SpaceMesh: nodes must be strictly increasing");
    }
  }
}

SpaceMesh SpaceMesh::uniform(double a, double b, int n_elements) {
  if (n_elements < 2) throw std::invalid_argument("SpaceMesh: need at least 2 elements");
  std::vector<double> ns(n_elements + 1);
  for (int k = 0; k <= n_elements; ++k) ns[k] = a + (b - a) * k / n_elements;
  ns.front() = a;
  ns.back() = b;
  return SpaceMesh(std::move(ns));
}

GridFunction::GridFunction(const SpaceMesh& m, std::vector<double> vals)
    : mesh(&m), v(std::move(vals)) {
  if (static_cast<int>(v.size()) != m.n_interior()) {
    throw std::invalid_argument("GridFunction: value count != interior node count");
  }
}

double GridFunction::operator()(double x) const {
  const auto& xs = mesh->nodes;
  if (x <= xs.front() || x >= xs.back()) return 0.0;
  const int e = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  const double w = (x - xs[e]) / (xs[e + 1] - xs[e]);
  const int n = mesh->n_elements();
  const double vl = (e == 0) ? 0.0 : v[e - 1];
  const double vr = (e + 1 == n) ? 0.0 : v[e];
  return vl + w * (vr - vl);
}

double GridFunction::inf_norm() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

GridFunction nodal_interpolate(const SpaceMesh& mesh, const SpatialFn& f) {
  GridFunction g(mesh);
  for (int k = 1; k < static_cast<int>(mesh.nodes.size()) - 1; ++k) {
    g.v[k - 1] = f(mesh.nodes[k]);
  }
  return g;
}

namespace {

constexpr int kAssemblyGaussOrder = 5;

struct LocalMatrix {
  // symmetric 2x2 element contribution: (ll, lr, rr)
  double ll, lr, rr;
};

}  // namespace

OperatorMatrices assemble(const ProblemSpec& problem, const SpaceMesh& mesh) {
  const int ne = mesh.n_elements();
  const int ni = mesh.n_interior();
  const GaussRule& rule = gauss_legendre(kAssemblyGaussOrder);

  // sampled positivity check for the diffusion coefficient
  double d_min = std::numeric_limits<double>::infinity();
  for (int e = 1; e <= ne; ++e) {
    for (double q : rule.nodes) {
      const double x = 0.5 * (mesh.nodes[e - 1] + mesh.nodes[e]) + 0.5 * q * mesh.h(e);
      d_min = std::min(d_min, problem.d(x));
    }
  }
  if (!(d_min > 0.0)) {
    throw std::invalid_argument("non-positive-diffusion: d(x) must be strictly positive");
  }

  std::vector<LocalMatrix> mass_loc(ne), stiff_loc(ne);
  par::for_index(ne, [&](std::int64_t idx) {
    const int e = static_cast<int>(idx) + 1;
    const double xl = mesh.nodes[e - 1];
    const double xr = mesh.nodes[e];
    const double h = xr - xl;
    LocalMatrix m{0.0, 0.0, 0.0}, s{0.0, 0.0, 0.0};
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = 0.5 * (xl + xr) + 0.5 * rule.nodes[q] * h;
      const double w = 0.5 * h * rule.weights[q];
      const double pr = (x - xl) / h;  // rising hat (node e)
      const double pl = 1.0 - pr;     // falling hat (node e-1)
      const double dval = problem.d(x);
      const double rval = problem.r(x);
      m.ll += w * pl * pl;
      m.lr += w * pl * pr;
      m.rr += w * pr * pr;
      s.ll += w * (dval / (h * h) + rval * pl * pl);
      s.lr += w * (-dval / (h * h) + rval * pl * pr);
      s.rr += w * (dval / (h * h) + rval * pr * pr);
    }
    mass_loc[idx] = m;
    stiff_loc[idx] = s;
  });

  OperatorMatrices mats;
  mats.mesh = &mesh;
  mats.mass.diag.resize(ni);
  mats.mass.off.resize(ni > 0 ? ni - 1 : 0);
  mats.stiffness.diag.resize(ni);
  mats.stiffness.off.resize(ni > 0 ? ni - 1 : 0);
  par::for_index(ni, [&](std::int64_t k) {
    // interior node k+1 touches elements k+1 (right hat) and k+2 (left hat)
    mats.mass.diag[k] = mass_loc[k].rr + mass_loc[k + 1].ll;
    mats.stiffness.diag[k] = stiff_loc[k].rr + stiff_loc[k + 1].ll;
    if (k + 1 < ni) {
      mats.mass.off[k] = mass_loc[k + 1].lr;
      mats.stiffness.off[k] = stiff_loc[k + 1].lr;
    }
  });
  return mats;
}

void assemble_load(const SpaceMesh& mesh, const SpatialFn& g, std::vector<double>& out) {
  const int ne = mesh.n_elements();
  const int ni = mesh.n_interior();
  const GaussRule& rule = gauss_legendre(kAssemblyGaussOrder);

  // pass 1: per-element contributions (c_left to node e-1, c_right to node e)
  std::vector<double> contrib(2 * ne);
  par::for_index(ne, [&](std::int64_t idx) {
    const int e = static_cast<int>(idx) + 1;
    const double xl = mesh.nodes[e - 1];
    const double xr = mesh.nodes[e];
    const double h = xr - xl;
    double cl = 0.0, cr = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double x = 0.5 * (xl + xr) + 0.5 * rule.nodes[q] * h;
      const double w = 0.5 * h * rule.weights[q];
      const double fv = g(x);
      const double pr = (x - xl) / h;
      cl += w * fv * (1.0 - pr);
      cr += w * fv * pr;
    }
    contrib[2 * idx] = cl;
    contrib[2 * idx + 1] = cr;
  });

  // pass 2: gather (fixed two-term sums, deterministic)
  out.resize(ni);
  par::for_index(ni, [&](std::int64_t k) {
    out[k] = contrib[2 * k + 1] + contrib[2 * (k + 1)];
  });
}

GridFunction elliptic_solve(const OperatorMatrices& mats, const std::vector<double>& load) {
  TridiagFactor factor(mats.stiffness);
  GridFunction y(*mats.mesh);
  factor.solve_refined(mats.stiffness, load, y.v);
  return y;
}

GridFunction euler_substep(const OperatorMatrices& mats, const GridFunction& v_prev,
                           double delta, const std::vector<double>& fvec) {
  if (!(delta > 0.0)) throw std::invalid_argument("euler_substep: delta must be positive");
  const SymTridiag system = combine(1.0 / delta, mats.mass, 1.0, mats.stiffness);
  TridiagFactor factor(system);
  GridFunction out(*mats.mesh);
  std::vector<double> scratch;
  euler_substep_factored(factor, system, mats.mass, v_prev.v, delta, fvec, out.v, scratch);
  return out;
}

void euler_substep_factored(const TridiagFactor& factor, const SymTridiag& system,
                            const SymTridiag& mass, const std::vector<double>& v_prev,
                            double delta, const std::vector<double>& fvec,
                            std::vector<double>& out, std::vector<double>& scratch) {
  mass.multiply(v_prev, scratch);
  const std::size_t n = scratch.size();
  for (std::size_t i = 0; i < n; ++i) scratch[i] = scratch[i] / delta + fvec[i];
  factor.solve_refined(system, scratch, out);
}

double sup_norm_sampled(const SpaceMesh& mesh, int samples_per_element,
                        const std::function<double(double)>& f) {
  if (samples_per_element < 2) {
    throw std::invalid_argument("sup_norm_sampled: need at least 2 samples per element");
  }
  const int ne = mesh.n_elements();
  const int s = samples_per_element;
  return par::max_reduce(ne, [&](std::int64_t idx) {
    const int e = static_cast<int>(idx) + 1;
    const double xl = mesh.nodes[e - 1];
    const double h = mesh.h(e);
    double m = 0.0;
    for (int r = 0; r < s; ++r) {
      const double x = xl + h * r / (s - 1);
      m = std::max(m, std::abs(f(x)));
    }
    return m;
  });
}

}  // namespace parex
