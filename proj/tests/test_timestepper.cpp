#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parex/reconstruct.hpp"
#include "parex/timestepper.hpp"
#include "testutil.hpp"

using namespace parex;

namespace {

// 1-DOF surrogate: mass = [1], stiffness = [1] models u' = -u + f
struct ScalarSurrogate {
  SpaceMesh mesh{std::vector<double>{0.0, 1.0, 2.0}};
  OperatorMatrices mats;

  ScalarSurrogate() {
    mats.mass.diag = {1.0};
    mats.stiffness.diag = {1.0};
    mats.mesh = &mesh;
  }

  GridFunction state(double v) const {
    GridFunction g(mesh);
    g.v[0] = v;
    return g;
  }
};

}  // namespace

TEST_CASE("extrapolation tableau closed forms and residuals") {
  const ExtrapolationTableau t2 = extrapolation_tableau(2);
  CHECK(t2.alpha[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(t2.alpha[1] == doctest::Approx(2.0).epsilon(1e-12));

  const ExtrapolationTableau t3 = extrapolation_tableau(3);
  CHECK(t3.alpha[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(t3.alpha[1] == doctest::Approx(-4.0).epsilon(1e-12));
  CHECK(t3.alpha[2] == doctest::Approx(4.5).epsilon(1e-12));

  for (int L = 2; L <= 8; ++L) {
    const ExtrapolationTableau tab = extrapolation_tableau(L);
    const std::vector<double> oracle = testutil::closed_form_alpha(L);
    for (int l = 0; l < L; ++l) {
      CHECK(tab.alpha[l] == doctest::Approx(oracle[l]).epsilon(1e-11));
    }
    // defining residuals
    for (int m = 0; m < L; ++m) {
      double s = (m == 0) ? -1.0 : 0.0;
      for (int l = 1; l <= L; ++l) s += tab.alpha[l - 1] * std::pow(l, -m);
      CHECK(std::abs(s) <= 1e-12);
    }
  }
  CHECK_THROWS_AS((void)extrapolation_tableau(1), std::invalid_argument);
  CHECK_THROWS_AS((void)extrapolation_tableau(0), std::invalid_argument);
}

TEST_CASE("scalar surrogate: two-step chains by hand") {
  const ScalarSurrogate s;
  FactorCache cache(s.mats);
  const ExtrapolationTableau tab = extrapolation_tableau(2);
  const double tau = 0.1;
  const GridFunction u_prev = s.state(1.0);
  const LoadProvider zero_load = [](double, std::vector<double>& out) {
    out.assign(1, 0.0);
  };

  const StepRecord rec = step(s.mats, cache, tab, u_prev, 0.0, tau, zero_load);

  const double v1 = 1.0 / 1.1;           // one substep of size 0.1
  const double v2 = 1.0 / (1.05 * 1.05);  // two substeps of size 0.05
  CHECK(rec.substeps[0].back()[0] == doctest::Approx(v1).epsilon(1e-14));
  CHECK(rec.substeps[1].back()[0] == doctest::Approx(v2).epsilon(1e-14));
  CHECK(rec.u.v[0] == doctest::Approx(-v1 + 2.0 * v2).epsilon(1e-14));

  const double v2_half = 1.0 / 1.05;
  const double psi_expected =
      -(-1.0 * (v1 - 1.0) / tau + 2.0 * (v2 - v2_half) / (tau / 2.0));
  CHECK(rec.psi.v[0] == doctest::Approx(psi_expected).epsilon(1e-12));
}

TEST_CASE("scalar surrogate: one-step error of order L+1 against exp") {
  const ScalarSurrogate s;
  const ExtrapolationTableau tab = extrapolation_tableau(3);
  const LoadProvider zero_load = [](double, std::vector<double>& out) { out.assign(1, 0.0); };

  auto one_step_error = [&](double tau) {
    FactorCache cache(s.mats);
    const StepRecord rec = step(s.mats, cache, tab, s.state(1.0), 0.0, tau, zero_load);
    return std::abs(rec.u.v[0] - std::exp(-tau));
  };
  const double e1 = one_step_error(0.2);
  const double e2 = one_step_error(0.1);
  // local error ~ tau^4 for L = 3
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.3));
}

TEST_CASE("stationary data propagate through step() exactly") {
  const auto st = testutil::make_stationary_problem(10);
  const SpaceMesh mesh{st.mesh_nodes};
  const OperatorMatrices mats = assemble(st.spec, mesh);
  std::vector<double> load;
  assemble_load(mesh, [&](double x) { return st.spec.f(x, 0.0); }, load);
  const GridFunction w(mesh, st.steady_state_values);
  const LoadProvider lp = [&](double, std::vector<double>& out) { out = load; };

  for (int L = 2; L <= 5; ++L) {
    FactorCache cache(mats);
    const StepRecord rec = step(mats, cache, extrapolation_tableau(L), w, 0.0, 0.125, lp);
    for (std::size_t k = 0; k < w.v.size(); ++k) {
      CHECK(rec.u.v[k] == doctest::Approx(w.v[k]).epsilon(1e-12));
    }
    CHECK(rec.psi.inf_norm() <= 1e-10);
  }
}

TEST_CASE("psi_nodal agrees with the mass-solve defect identity on the builtin problem") {
  const ProblemSpec problem = builtin_test_problem();
  const SpaceMesh mesh = SpaceMesh::uniform(problem.x_a, problem.x_b, 8);
  const TimeMesh tmesh = TimeMesh::uniform(problem.T, 8);
  const OperatorMatrices mats = assemble(problem, mesh);
  const TridiagFactor mass_factor(mats.mass);

  for (int L = 2; L <= 4; ++L) {
    const Trajectory traj = run(problem, mesh, tmesh, L);
    const FhatSet fhat(problem, tmesh, L);
    std::vector<std::vector<double>> loads;
    for (int j = 1; j <= tmesh.intervals(); ++j) {
      fhat.node_loads(j, mesh, loads);
      // mass psi = stiffness u^j - b(fhat(t_j)); the last node load is b at t_j
      std::vector<double> rhs;
      mats.stiffness.multiply(traj.u_at(j).v, rhs);
      for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] -= loads[L - 1][k];
      std::vector<double> oracle;
      mass_factor.solve_refined(mats.mass, rhs, oracle);

      const GridFunction& psi = traj.psi_at(j);
      const double scale = 1.0 + psi.inf_norm();
      for (std::size_t k = 0; k < oracle.size(); ++k) {
        CHECK(std::abs(psi.v[k] - oracle[k]) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("trajectory of stationary data is constant for L <= 5") {
  const auto st = testutil::make_stationary_problem(16);
  const SpaceMesh mesh{st.mesh_nodes};
  for (int L = 2; L <= 5; ++L) {
    const TimeMesh tmesh = TimeMesh::uniform(1.0, 16);
    const Trajectory traj = run(st.spec, mesh, tmesh, L);
    for (int j = 1; j <= 16; ++j) {
      double drift = 0.0;
      for (std::size_t k = 0; k < traj.u0.v.size(); ++k) {
        drift = std::max(drift, std::abs(traj.u_at(j).v[k] - traj.u0.v[k]));
      }
      CHECK(drift <= 1e-12);
    }
  }
}

TEST_CASE("temporal convergence against the manufactured solution") {
  const ManufacturedProblem mp = manufactured_problem();
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 512);

  auto final_error = [&](int M) {
    const TimeMesh tmesh = TimeMesh::uniform(1.0, M);
    RunOptions opts;
    opts.keep_trajectory = false;
    const Trajectory traj = run(mp.spec, mesh, tmesh, 2, opts);
    const GridFunction& u = traj.u.back();
    return sup_norm_sampled(mesh, 8, [&](double x) { return u(x) - mp.exact(x, 1.0); });
  };
  const double e1 = final_error(8);
  const double e2 = final_error(16);
  CHECK(e1 / e2 >= 2.8);   // second order, away from the spatial floor
  CHECK(e1 / e2 <= 5.7);
}

TEST_CASE("single step run composes") {
  const ManufacturedProblem mp = manufactured_problem();
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 16);
  const TimeMesh tmesh = TimeMesh::uniform(1.0, 1);
  const Trajectory traj = run(mp.spec, mesh, tmesh, 2);
  CHECK(traj.u.size() == 1);
  CHECK(traj.psi.size() == 1);
  CHECK(traj.u_at(1).inf_norm() > 0.0);
}
