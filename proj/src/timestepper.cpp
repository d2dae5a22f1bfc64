#include "parex/timestepper.hpp"

#include <cmath>
#include <stdexcept>

#include "parex/parallel.hpp"
#include "parex/reconstruct.hpp"

namespace parex {

namespace {

double ipow_recip(int base, int exp) {
  // exact 1/base^exp for the small integers used here
  double p = 1.0;
  for (int k = 0; k < exp; ++k) p *= base;
  return 1.0 / p;
}

}  // namespace

ExtrapolationTableau extrapolation_tableau(int L) {
  if (L < 2) throw std::invalid_argument("invalid-order: L must be >= 2");
  if (L > 12) throw std::invalid_argument("invalid-order: L > 12 is not supported");

  // rows m = 0..L-1 of  sum_l alpha_l l^{-m} = delta_{m,0}
  std::vector<double> a(static_cast<std::size_t>(L) * L);
  std::vector<double> b(L, 0.0);
  b[0] = 1.0;
  for (int m = 0; m < L; ++m) {
    for (int l = 1; l <= L; ++l) a[m * L + (l - 1)] = ipow_recip(l, m);
  }
  ExtrapolationTableau tab;
  tab.order = L;
  tab.alpha = solve_dense(a, b);

  double residual = 0.0;
  for (int m = 0; m < L; ++m) {
    double s = (m == 0) ? -1.0 : 0.0;
    for (int l = 1; l <= L; ++l) s += tab.alpha[l - 1] * ipow_recip(l, m);
    residual = std::max(residual, std::abs(s));
  }
  if (residual > 1e-10) {
    throw std::runtime_error("ill-conditioned-tableau: residual " + std::to_string(residual));
  }
  return tab;
}

TimeMesh::TimeMesh(std::vector<double> ns) : nodes(std::move(ns)) {
  if (nodes.size() < 2) throw std::invalid_argument("TimeMesh: need at least one interval");
  if (nodes.front() != 0.0) throw std::invalid_argument("TimeMesh: t_0 must be 0");
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i - 1] < nodes[i])) {
      throw std::invalid_argument("TimeMesh: nodes must be strictly increasing");
    }
  }
}

TimeMesh TimeMesh::uniform(double T, int M) {
  if (M < 1) throw std::invalid_argument("TimeMesh: M must be >= 1");
  if (!(T > 0.0)) throw std::invalid_argument("TimeMesh: T must be positive");
  std::vector<double> ns(M + 1);
  for (int j = 0; j <= M; ++j) ns[j] = T * j / M;
  ns[0] = 0.0;
  ns[M] = T;
  return TimeMesh(std::move(ns));
}

const FactorCache::Entry& FactorCache::at(double delta) {
  auto it = entries_.find(delta);
  if (it == entries_.end()) {
    SymTridiag sys = combine(1.0 / delta, mats_->mass, 1.0, mats_->stiffness);
    TridiagFactor fac(sys);
    auto entry = std::make_unique<Entry>(Entry{std::move(sys), std::move(fac)});
    it = entries_.emplace(delta, std::move(entry)).first;
  }
  return *it->second;
}

StepRecord step(const OperatorMatrices& mats, FactorCache& cache,
                const ExtrapolationTableau& tableau, const GridFunction& u_prev,
                double t_left, double tau, const LoadProvider& load, bool keep_substeps) {
  if (!(tau > 0.0)) throw std::invalid_argument("step: tau must be positive");
  const int L = tableau.order;
  const SpaceMesh& mesh = *mats.mesh;
  const int n = mesh.n_interior();

  // prefetch the factorisations serially; the chains then only read
  std::vector<const FactorCache::Entry*> entries(L);
  for (int l = 1; l <= L; ++l) entries[l - 1] = &cache.at(tau / l);

  std::vector<std::vector<std::vector<double>>> chains(L);
  par::for_index(L, [&](std::int64_t i) {
    const int l = static_cast<int>(i) + 1;
    const double delta = tau / l;
    auto& chain = chains[i];
    chain.assign(l, std::vector<double>(n));
    std::vector<double> fvec(n), scratch(n);
    const std::vector<double>* prev = &u_prev.v;
    for (int s = 1; s <= l; ++s) {
      // all chains end at exactly the same time point
      const double t_target = (s == l) ? t_left + tau : t_left + s * delta;
      load(t_target, fvec);
      euler_substep_factored(entries[i]->factor, entries[i]->system, mats.mass, *prev, delta,
                             fvec, chain[s - 1], scratch);
      prev = &chain[s - 1];
    }
  });

  StepRecord rec;
  rec.u = GridFunction(mesh);
  for (int l = 1; l <= L; ++l) {
    const double a = tableau.alpha[l - 1];
    const auto& vl = chains[l - 1].back();
    for (int k = 0; k < n; ++k) rec.u.v[k] += a * vl[k];
  }

  std::vector<const std::vector<double>*> v_last(L), v_prev_last(L);
  for (int l = 1; l <= L; ++l) {
    v_last[l - 1] = &chains[l - 1].back();
    v_prev_last[l - 1] = (l == 1) ? &u_prev.v : &chains[l - 1][l - 2];
  }
  rec.psi = psi_nodal(tableau, v_last, v_prev_last, tau, mesh);

  if (keep_substeps) rec.substeps = std::move(chains);
  return rec;
}

GridFunction psi_nodal(const ExtrapolationTableau& tableau,
                       const std::vector<const std::vector<double>*>& v_last,
                       const std::vector<const std::vector<double>*>& v_prev_last,
                       double tau, const SpaceMesh& mesh) {
  const int L = tableau.order;
  GridFunction psi(mesh);
  const std::size_t n = psi.v.size();
  for (int l = 1; l <= L; ++l) {
    const double c = -tableau.alpha[l - 1] * l / tau;
    const auto& a = *v_last[l - 1];
    const auto& b = *v_prev_last[l - 1];
    for (std::size_t k = 0; k < n; ++k) psi.v[k] += c * (a[k] - b[k]);
  }
  return psi;
}

Trajectory run(const ProblemSpec& problem, const SpaceMesh& mesh, const TimeMesh& tmesh, int L,
               const RunOptions& opts) {
  const ExtrapolationTableau tableau = extrapolation_tableau(L);
  const OperatorMatrices mats = assemble(problem, mesh);
  FactorCache cache(mats);
  const FhatSet fhat(problem, tmesh, L);
  const int M = tmesh.intervals();

  Trajectory traj;
  traj.mesh = &mesh;
  traj.tmesh = tmesh;
  traj.order = L;
  traj.u0 = nodal_interpolate(mesh, problem.u0);

  std::vector<std::vector<double>> loads;
  std::vector<double> carry;
  GridFunction u_prev = traj.u0;

  for (int j = 1; j <= M; ++j) {
    if (j == 1) {
      fhat.node_loads(1, mesh, loads);
    } else {
      carry = std::move(loads.back());  // shared endpoint time
      fhat.node_loads(j, mesh, loads, &carry);
    }

    if (j == 1 && opts.keep_trajectory) {
      // psi^0 from the defect identity at t = 0: mass psi0 = stiffness u0 - b(fhat(0))
      std::vector<double> rhs;
      mats.stiffness.multiply(traj.u0.v, rhs);
      for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] -= loads[0][k];
      TridiagFactor mass_factor(mats.mass);
      traj.psi0 = GridFunction(mesh);
      mass_factor.solve_refined(mats.mass, rhs, traj.psi0.v);
    }

    const LoadProvider lp = [&](double t, std::vector<double>& out) {
      fhat.load_at(j, t, loads, out);
    };
    StepRecord rec = step(mats, cache, tableau, u_prev, tmesh.t(j - 1), tmesh.tau(j), lp,
                          /*keep_substeps=*/false);
    u_prev = std::move(rec.u);
    if (opts.keep_trajectory) {
      traj.u.push_back(u_prev);
      traj.psi.push_back(std::move(rec.psi));
    }
  }

  if (!opts.keep_trajectory) {
    traj.u.push_back(std::move(u_prev));  // final state only
  }
  return traj;
}

}  // namespace parex
