#include "parex/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "parex/parallel.hpp"

namespace parex {

namespace {

constexpr int kMaxOrder = 12;

// values of the slab basis {1, P_1, N_2, ..., N_{L-1}} at xi
void basis_eval(int L, double xi, double* out) {
  double p[kMaxOrder + 1];
  legendre_eval_all(L - 1 >= 1 ? L - 1 : 1, xi, std::span<double>(p, kMaxOrder + 1));
  out[0] = 1.0;
  if (L >= 2) out[1] = xi;
  for (int i = 2; i < L; ++i) out[i] = (p[i] - p[i - 2]) / (2.0 * i - 1.0);
}

GridFunction lin_comb(double a, const GridFunction& x, double b, const GridFunction& y) {
  GridFunction out(*x.mesh);
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = a * x.v[k] + b * y.v[k];
  return out;
}

GridFunction scaled(double a, const GridFunction& x) {
  GridFunction out(*x.mesh);
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] = a * x.v[k];
  return out;
}

}  // namespace

GridFunction DeltaSlab::eval(double t) const {
  const double len = map.length();
  if (t < map.left() - 1e-12 * len || t > map.right() + 1e-12 * len) {
    throw std::domain_error("out-of-interval: t outside the slab interval");
  }
  const double xi = std::clamp(map.to_ref(t), -1.0, 1.0);
  const int L = order();
  double b[kMaxOrder];
  basis_eval(L, xi, b);
  GridFunction out(*delta[0].mesh);
  for (int i = 0; i < L; ++i) {
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += b[i] * delta[i].v[k];
  }
  return out;
}

GridFunction DeltaSlab::derivative(double t) const {
  const double len = map.length();
  if (t < map.left() - 1e-12 * len || t > map.right() + 1e-12 * len) {
    throw std::domain_error("out-of-interval: t outside the slab interval");
  }
  const double xi = std::clamp(map.to_ref(t), -1.0, 1.0);
  const int L = order();
  const double scale = 2.0 / len;
  double p[kMaxOrder];
  legendre_eval_all(std::max(L - 2, 0), xi, std::span<double>(p, kMaxOrder));
  GridFunction out(*delta[0].mesh);
  for (int i = 1; i < L; ++i) {
    const double c = scale * p[i - 1];
    for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += c * delta[i].v[k];
  }
  return out;
}

std::vector<double> delta_collocation_nodes(int L, FhatNodes nodes) {
  if (L < 2 || L > kMaxOrder) throw std::invalid_argument("delta_collocation_nodes: bad order");
  std::vector<double> xi(L);
  if (nodes == FhatNodes::equispaced) {
    for (int m = 0; m < L; ++m) xi[m] = -1.0 + 2.0 * m / (L - 1);
  } else {
    // Chebyshev-Lobatto points (endpoints included)
    for (int m = 0; m < L; ++m) xi[m] = -std::cos(M_PI * m / (L - 1));
  }
  xi.front() = -1.0;
  xi.back() = 1.0;
  return xi;
}

std::vector<double> delta_collocation_matrix(int L, FhatNodes nodes) {
  const std::vector<double> xi = delta_collocation_nodes(L, nodes);
  std::vector<double> c(static_cast<std::size_t>(L) * L, 0.0);
  // endpoint rows are exact: Delta^0 = (phi(1) + phi(-1))/2, Delta^1 = (phi(1) - phi(-1))/2
  c[0 * L + 0] = 0.5;
  c[0 * L + (L - 1)] = 0.5;
  c[1 * L + 0] = -0.5;
  c[1 * L + (L - 1)] = 0.5;
  if (L == 2) return c;

  // interior rows: solve sum_{i>=2} N_i(xi_m) Delta^i = phi_m - Delta^0 - Delta^1 xi_m
  const int ni = L - 2;
  std::vector<double> s(static_cast<std::size_t>(ni) * ni);
  for (int m = 0; m < ni; ++m) {
    for (int i = 0; i < ni; ++i) s[m * ni + i] = integrated_legendre_eval(i + 2, xi[m + 1]);
  }
  for (int col = 0; col < L; ++col) {
    std::vector<double> rhs(ni);
    for (int m = 0; m < ni; ++m) {
      const double phi_m = (m + 1 == col) ? 1.0 : 0.0;
      rhs[m] = phi_m - c[0 * L + col] - c[1 * L + col] * xi[m + 1];
    }
    const std::vector<double> sol = solve_dense(s, rhs);
    for (int i = 0; i < ni; ++i) c[(i + 2) * L + col] = sol[i];
  }
  return c;
}

DeltaSlab to_delta_basis(const IntervalMap& map, std::span<const GridFunction> node_values,
                         FhatNodes nodes) {
  const int L = static_cast<int>(node_values.size());
  if (L < 2) throw std::invalid_argument("to_delta_basis: need at least 2 node values");
  const std::vector<double> c = delta_collocation_matrix(L, nodes);
  DeltaSlab slab{map, {}};
  slab.delta.reserve(L);
  const SpaceMesh& mesh = *node_values[0].mesh;
  for (int i = 0; i < L; ++i) {
    GridFunction g(mesh);
    for (int k = 0; k < L; ++k) {
      const double w = c[i * L + k];
      for (std::size_t p = 0; p < g.v.size(); ++p) g.v[p] += w * node_values[k].v[p];
    }
    slab.delta.push_back(std::move(g));
  }
  return slab;
}

FhatSet::FhatSet(const ProblemSpec& problem, const TimeMesh& tmesh, int L, FhatNodes nodes)
    : problem_(&problem), tmesh_(&tmesh), L_(L) {
  if (L < 2 || L > kMaxOrder) throw std::invalid_argument("FhatSet: bad order");
  colloc_ = delta_collocation_matrix(L, nodes);
  ref_nodes_ = delta_collocation_nodes(L, nodes);
}

double FhatSet::node_time(int j, int k) const {
  if (k == 0) return tmesh_->t(j - 1);
  if (k == L_ - 1) return tmesh_->t(j);
  const IntervalMap map(tmesh_->t(j - 1), tmesh_->t(j));
  return map.from_ref(ref_nodes_[k]);
}

// interpolation weights w_k(xi) with fhat = sum_k w_k(xi) f(., t_k)
void FhatSet::ref_weights(double xi, double* w) const {
  double b[kMaxOrder];
  basis_eval(L_, xi, b);
  for (int k = 0; k < L_; ++k) {
    double s = 0.0;
    for (int i = 0; i < L_; ++i) s += b[i] * colloc_[i * L_ + k];
    w[k] = s;
  }
}

double FhatSet::eval_on(int j, double x, double t) const {
  const IntervalMap map(tmesh_->t(j - 1), tmesh_->t(j));
  const double xi = std::clamp(map.to_ref(t), -1.0, 1.0);
  double w[kMaxOrder];
  ref_weights(xi, w);
  double s = 0.0;
  for (int k = 0; k < L_; ++k) s += w[k] * problem_->f(x, node_time(j, k));
  return s;
}

double FhatSet::eval(double x, double t) const {
  const auto& ns = tmesh_->nodes;
  int j = static_cast<int>(std::upper_bound(ns.begin(), ns.end(), t) - ns.begin());
  j = std::clamp(j, 1, tmesh_->intervals());
  return eval_on(j, x, t);
}

double FhatSet::delta_eval(int j, int i, double x) const {
  double s = 0.0;
  for (int k = 0; k < L_; ++k) s += colloc_[i * L_ + k] * problem_->f(x, node_time(j, k));
  return s;
}

void FhatSet::node_loads(int j, const SpaceMesh& mesh, std::vector<std::vector<double>>& out,
                         const std::vector<double>* reuse_first) const {
  out.resize(L_);
  for (int k = 0; k < L_; ++k) {
    if (k == 0 && reuse_first != nullptr) {
      out[0] = *reuse_first;
      continue;
    }
    const double tk = node_time(j, k);
    assemble_load(mesh, [&](double x) { return problem_->f(x, tk); }, out[k]);
  }
}

void FhatSet::load_at(int j, double t, const std::vector<std::vector<double>>& loads,
                      std::vector<double>& out) const {
  const IntervalMap map(tmesh_->t(j - 1), tmesh_->t(j));
  const double xi = std::clamp(map.to_ref(t), -1.0, 1.0);
  double w[kMaxOrder];
  ref_weights(xi, w);
  const std::size_t n = loads[0].size();
  out.assign(n, 0.0);
  for (int k = 0; k < L_; ++k) {
    const double wk = w[k];
    const auto& lk = loads[k];
    for (std::size_t p = 0; p < n; ++p) out[p] += wk * lk[p];
  }
}

void FhatSet::delta_load(int i, const std::vector<std::vector<double>>& loads,
                         std::vector<double>& out) const {
  const std::size_t n = loads[0].size();
  out.assign(n, 0.0);
  for (int k = 0; k < L_; ++k) {
    const double w = colloc_[i * L_ + k];
    const auto& lk = loads[k];
    for (std::size_t p = 0; p < n; ++p) out[p] += w * lk[p];
  }
}

ReconstructionSet build_reconstruction(const ProblemSpec& problem, const Trajectory& traj,
                                       const OperatorMatrices& mats, FhatNodes nodes) {
  const int L = traj.order;
  const int M = traj.tmesh.intervals();
  if (static_cast<int>(traj.u.size()) != M || static_cast<int>(traj.psi.size()) != M) {
    throw std::invalid_argument("build_reconstruction: trajectory was not fully recorded");
  }

  ReconstructionSet rs{{}, {}, FhatSet(problem, traj.tmesh, L, nodes)};
  const DeltaSlab empty{IntervalMap(0.0, 1.0), {}};
  rs.u.assign(M, empty);
  rs.psi.assign(M, empty);

  const TridiagFactor stiff_factor(mats.stiffness);

  par::for_index(M, [&](std::int64_t idx) {
    const int j = static_cast<int>(idx) + 1;
    const double tau = traj.tmesh.tau(j);
    const IntervalMap map(traj.tmesh.t(j - 1), traj.tmesh.t(j));

    DeltaSlab su{map, {}}, sp{map, {}};
    su.delta.resize(L);
    sp.delta.resize(L);
    su.delta[0] = lin_comb(0.5, traj.u_at(j), 0.5, traj.u_at(j - 1));
    su.delta[1] = lin_comb(0.5, traj.u_at(j), -0.5, traj.u_at(j - 1));
    sp.delta[0] = lin_comb(0.5, traj.psi_at(j), 0.5, traj.psi_at(j - 1));
    sp.delta[1] = lin_comb(0.5, traj.psi_at(j), -0.5, traj.psi_at(j - 1));

    if (L >= 3) {
      std::vector<std::vector<double>> loads;
      rs.fhat.node_loads(j, *traj.mesh, loads);
      std::vector<double> rhs, fload;
      for (int m = 2; m <= L - 1; ++m) {
        if (m == 2) {
          sp.delta[2] = lin_comb(3.0, sp.delta[0], 6.0 / tau, su.delta[1]);
        } else {
          sp.delta[m] = lin_comb((2.0 * m - 1.0) / (2.0 * m - 5.0), sp.delta[m - 2],
                                 (2.0 * m - 1.0) * 2.0 / tau, su.delta[m - 1]);
        }
        mats.mass.multiply(sp.delta[m].v, rhs);
        rs.fhat.delta_load(m, loads, fload);
        for (std::size_t p = 0; p < rhs.size(); ++p) rhs[p] += fload[p];
        GridFunction um(*traj.mesh);
        stiff_factor.solve_refined(mats.stiffness, rhs, um.v);
        su.delta[m] = std::move(um);
      }
    }
    rs.u[idx] = std::move(su);
    rs.psi[idx] = std::move(sp);
  });
  return rs;
}

std::pair<GridFunction, GridFunction> psi_plus_dudt_coeffs(const ReconstructionSet& recon, int j) {
  const DeltaSlab& su = recon.u[j - 1];
  const DeltaSlab& sp = recon.psi[j - 1];
  const int L = su.order();
  const double tau = su.map.length();
  if (L == 2) {
    GridFunction a = lin_comb(1.0, sp.delta[0], 2.0 / tau, su.delta[1]);
    return {std::move(a), sp.delta[1]};
  }
  GridFunction a = lin_comb(1.0 / (2.0 * L - 5.0), sp.delta[L - 2], 2.0 / tau, su.delta[L - 1]);
  GridFunction b = scaled(1.0 / (2.0 * L - 3.0), sp.delta[L - 1]);
  return {std::move(a), std::move(b)};
}

}  // namespace parex
