#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "parex/fem1d.hpp"
#include "parex/problem.hpp"
#include "testutil.hpp"

using namespace parex;

namespace {

ProblemSpec poisson_problem() {
  ProblemSpec p;
  p.x_a = 0.0;
  p.x_b = 1.0;
  p.T = 1.0;
  p.d = [](double) { return 1.0; };
  p.r = [](double) { return 0.0; };
  p.f = [](double, double) { return 1.0; };
  p.u0 = [](double) { return 0.0; };
  return p;
}

}  // namespace

TEST_CASE("assembly on a uniform mesh reproduces the hand stencils") {
  const ProblemSpec p = poisson_problem();
  const int N = 8;
  const double h = 1.0 / N;
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, N);
  const OperatorMatrices mats = assemble(p, mesh);

  for (int k = 0; k < mesh.n_interior(); ++k) {
    CHECK(mats.stiffness.diag[k] == doctest::Approx(2.0 / h).epsilon(1e-13));
    CHECK(mats.mass.diag[k] == doctest::Approx(2.0 * h / 3.0).epsilon(1e-13));
    if (k + 1 < mesh.n_interior()) {
      CHECK(mats.stiffness.off[k] == doctest::Approx(-1.0 / h).epsilon(1e-13));
      CHECK(mats.mass.off[k] == doctest::Approx(h / 6.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("assembly rejects vanishing diffusion") {
  ProblemSpec p = poisson_problem();
  p.d = [](double) { return 0.0; };
  p.r = [](double) { return 1.0; };
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 4);
  CHECK_THROWS_AS((void)assemble(p, mesh), std::invalid_argument);
}

TEST_CASE("elliptic solve: -u'' = 1 is nodally exact") {
  const ProblemSpec p = poisson_problem();
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 16);
  const OperatorMatrices mats = assemble(p, mesh);
  std::vector<double> load;
  assemble_load(mesh, [](double) { return 1.0; }, load);
  const GridFunction y = elliptic_solve(mats, load);
  for (int k = 1; k < 16; ++k) {
    const double x = mesh.nodes[k];
    CHECK(y.v[k - 1] == doctest::Approx(0.5 * x * (1.0 - x)).epsilon(1e-12));
  }

  // zero load -> zero solution
  std::vector<double> zero(mesh.n_interior(), 0.0);
  const GridFunction y0 = elliptic_solve(mats, zero);
  CHECK(y0.inf_norm() == 0.0);
}

TEST_CASE("elliptic solve: Galerkin reproduction of P1 members") {
  ProblemSpec p = poisson_problem();
  p.d = [](double x) { return 1.0 + 0.5 * x; };
  p.r = [](double x) { return 2.0 + x; };
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 12);
  const OperatorMatrices mats = assemble(p, mesh);

  std::mt19937 rng(42);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GridFunction w(mesh);
  for (double& v : w.v) v = dist(rng);

  // exact Galerkin load of a P1 member is stiffness * w
  std::vector<double> load;
  mats.stiffness.multiply(w.v, load);
  const GridFunction y = elliptic_solve(mats, load);
  for (std::size_t k = 0; k < w.v.size(); ++k) {
    CHECK(y.v[k] == doctest::Approx(w.v[k]).epsilon(1e-10));
  }
}

TEST_CASE("euler substep: stationary fixed point") {
  ProblemSpec p = poisson_problem();
  p.r = [](double x) { return 1.0 + x * x; };
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 10);
  const OperatorMatrices mats = assemble(p, mesh);
  std::vector<double> load;
  assemble_load(mesh, [](double x) { return std::sin(M_PI * x); }, load);
  const GridFunction w = elliptic_solve(mats, load);

  const GridFunction v = euler_substep(mats, w, 0.05, load);
  for (std::size_t k = 0; k < w.v.size(); ++k) {
    CHECK(v.v[k] == doctest::Approx(w.v[k]).epsilon(1e-12));
  }
}

TEST_CASE("euler substep: monotone decay without source") {
  ProblemSpec p = poisson_problem();
  p.r = [](double) { return 50.0; };
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 20);
  const OperatorMatrices mats = assemble(p, mesh);
  const std::vector<double> zero(mesh.n_interior(), 0.0);

  GridFunction v = nodal_interpolate(mesh, [](double x) { return std::sin(M_PI * x); });
  double prev = v.inf_norm();
  for (int s = 0; s < 12; ++s) {
    v = euler_substep(mats, v, 0.05, zero);
    const double cur = v.inf_norm();
    CHECK(cur < prev);
    prev = cur;
  }
}

TEST_CASE("euler substep: two half steps vs one full step differ at O(delta^2)") {
  ProblemSpec p = poisson_problem();
  p.r = [](double x) { return 1.0 + x; };
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 32);
  const OperatorMatrices mats = assemble(p, mesh);
  std::vector<double> load;
  assemble_load(mesh, [](double x) { return x * (1.0 - x); }, load);
  const GridFunction u0 = nodal_interpolate(mesh, [](double x) { return std::sin(M_PI * x); });

  auto defect = [&](double delta) {
    const GridFunction full = euler_substep(mats, u0, delta, load);
    const GridFunction half =
        euler_substep(mats, euler_substep(mats, u0, 0.5 * delta, load), 0.5 * delta, load);
    double m = 0.0;
    for (std::size_t k = 0; k < full.v.size(); ++k) {
      m = std::max(m, std::abs(full.v[k] - half.v[k]));
    }
    return m;
  };
  // delta small enough that delta * lambda_min << 1 (asymptotic regime)
  const double d1 = defect(0.004);
  const double d2 = defect(0.002);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("discrete maximum principle on random non-negative loads") {
  const ProblemSpec p = poisson_problem();
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 16);
  const OperatorMatrices mats = assemble(p, mesh);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> load(mesh.n_interior());
    for (double& v : load) v = dist(rng);
    const GridFunction y = elliptic_solve(mats, load);
    for (double v : y.v) CHECK(v >= -1e-14);
  }
}

TEST_CASE("substep is sup-norm stable without source") {
  ProblemSpec p = poisson_problem();
  p.r = [](double x) { return x; };
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 16);
  const OperatorMatrices mats = assemble(p, mesh);
  const std::vector<double> zero(mesh.n_interior(), 0.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    GridFunction v(mesh);
    for (double& x : v.v) x = dist(rng);
    const double before = v.inf_norm();
    const GridFunction w = euler_substep(mats, v, 0.02 + 0.1 * std::abs(dist(rng)), zero);
    CHECK(w.inf_norm() <= before * (1.0 + 1e-14));
  }
}

TEST_CASE("sampled sup norm") {
  const SpaceMesh mesh = SpaceMesh::uniform(0.0, 1.0, 4);

  GridFunction hat(mesh);
  hat.v[1] = 1.0;  // peak at a node
  CHECK(sup_norm_sampled(mesh, 8, [&](double x) { return hat(x); }) == doctest::Approx(1.0));

  CHECK(sup_norm_sampled(mesh, 8, [](double) { return 0.0; }) == 0.0);

  // x(1-x) sampled at k/7 on the single element (0,1): max at k=3,4
  const SpaceMesh coarse{std::vector<double>{0.0, 1.0, 2.0}};
  const double got =
      sup_norm_sampled(coarse, 8, [](double x) { return x <= 1.0 ? x * (1.0 - x) : 0.0; });
  CHECK(got == doctest::Approx(12.0 / 49.0).epsilon(1e-15));

  CHECK_THROWS_AS((void)sup_norm_sampled(mesh, 1, [](double) { return 0.0; }),
                  std::invalid_argument);
}

TEST_CASE("grid function evaluation is exact at nodes and boundary") {
  const SpaceMesh mesh = SpaceMesh::uniform(-1.0, 1.0, 8);
  GridFunction g(mesh);
  for (std::size_t k = 0; k < g.v.size(); ++k) g.v[k] = std::sin(1.0 + static_cast<double>(k));
  for (int k = 1; k < 8; ++k) CHECK(g(mesh.nodes[k]) == g.v[k - 1]);
  CHECK(g(-1.0) == 0.0);
  CHECK(g(1.0) == 0.0);
  CHECK(g(-2.0) == 0.0);
  CHECK(g(0.5 * (mesh.nodes[0] + mesh.nodes[1])) == doctest::Approx(0.5 * g.v[0]));
}

TEST_CASE("stationary helper produces a genuine fixed point") {
  const auto st = testutil::make_stationary_problem(12);
  const SpaceMesh mesh{st.mesh_nodes};
  const GridFunction u0h = nodal_interpolate(mesh, st.spec.u0);
  for (std::size_t k = 0; k < u0h.v.size(); ++k) {
    CHECK(u0h.v[k] == st.steady_state_values[k]);
  }
}
