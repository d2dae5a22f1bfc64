#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "parex/polybasis.hpp"
#include "parex/quadrature.hpp"

using namespace parex;

TEST_CASE("Legendre recurrence values") {
  CHECK(legendre_eval(0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(legendre_eval(1, -1.0) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(legendre_eval(3, 0.5) == doctest::Approx(-0.4375).epsilon(1e-14));
  // P_2(x) = (3x^2 - 1)/2
  CHECK(legendre_eval(2, 0.2) == doctest::Approx((3 * 0.04 - 1) / 2).epsilon(1e-14));
  CHECK(legendre_eval(7, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("legendre_eval_all matches single evaluation") {
  double buf[11];
  legendre_eval_all(10, 0.37, std::span<double>(buf, 11));
  for (int i = 0; i <= 10; ++i) {
    CHECK(buf[i] == doctest::Approx(legendre_eval(i, 0.37)).epsilon(1e-15));
  }
}

TEST_CASE("integrated Legendre endpoint zeros and pointwise values") {
  for (int i = 2; i <= 9; ++i) {
    CHECK(std::abs(integrated_legendre_eval(i, -1.0)) <= 1e-14);
    CHECK(std::abs(integrated_legendre_eval(i, 1.0)) <= 1e-14);
  }
  // N_2(0) = int_{-1}^0 zeta dzeta = -1/2
  CHECK(integrated_legendre_eval(2, 0.0) == doctest::Approx(-0.5).epsilon(1e-14));
  // N_3(1/2) = int_{-1}^{1/2} P_2 = -3/16, equal to (P_3 - P_1)/5 at 1/2
  CHECK(integrated_legendre_eval(3, 0.5) == doctest::Approx(-0.1875).epsilon(1e-13));
  CHECK(integrated_legendre_eval(3, 0.5) ==
        doctest::Approx((legendre_eval(3, 0.5) - legendre_eval(1, 0.5)) / 5.0).epsilon(1e-15));
  CHECK_THROWS_AS((void)integrated_legendre_eval(1, 0.0), std::invalid_argument);
}

TEST_CASE("identity N_{i+1} = (P_{i+1} - P_{i-1})/(2i+1) against quadrature") {
  for (int i = 1; i <= 8; ++i) {
    for (int s = 0; s <= 99; ++s) {
      const double xi = -1.0 + 2.0 * s / 99.0;
      const double by_quadrature = adaptive_simpson(
          [i](double z) { return legendre_eval(i, z); }, -1.0, xi, 1e-14, 1e-16);
      const double by_identity =
          (legendre_eval(i + 1, xi) - legendre_eval(i - 1, xi)) / (2.0 * i + 1.0);
      CHECK(std::abs(by_quadrature - by_identity) <= 1e-12);
      if (i >= 1) {
        CHECK(integrated_legendre_eval(i + 1, xi) ==
              doctest::Approx(by_identity).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("Legendre roots: P_i vanishes, roots ascending") {
  for (int i = 1; i <= 10; ++i) {
    const auto roots = legendre_roots(i);
    REQUIRE(static_cast<int>(roots.size()) == i);
    for (int k = 0; k < i; ++k) {
      CHECK(std::abs(legendre_eval(i, roots[k])) <= 1e-13);
      if (k > 0) CHECK(roots[k - 1] < roots[k]);
    }
  }
}

TEST_CASE("L1 norms of Legendre polynomials") {
  CHECK(legendre_l1_norm(0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(legendre_l1_norm(1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(legendre_l1_norm(2) == doctest::Approx(4.0 * std::sqrt(3.0) / 9.0).epsilon(1e-13));

  for (int i = 0; i <= 10; ++i) {
    const double by_quadrature = adaptive_simpson(
        [i](double z) { return std::abs(legendre_eval(i, z)); }, -1.0, 1.0, 1e-13, 1e-15);
    CHECK(legendre_l1_norm(i) == doctest::Approx(by_quadrature).epsilon(1e-10));
  }
}

TEST_CASE("derivative sup norm closed form") {
  CHECK(legendre_inf_norm_derivative(1) == doctest::Approx(1.0));
  CHECK(legendre_inf_norm_derivative(2) == doctest::Approx(3.0));
  CHECK(legendre_inf_norm_derivative(5) == doctest::Approx(15.0));
  // the closed form is attained at the endpoint
  for (int i = 1; i <= 6; ++i) {
    double m = 0.0;
    for (int s = 0; s <= 2000; ++s) {
      const double xi = -1.0 + 2.0 * s / 2000.0;
      m = std::max(m, std::abs(legendre_derivative(i, xi)));
    }
    CHECK(m <= legendre_inf_norm_derivative(i) + 1e-12);
    CHECK(m >= legendre_inf_norm_derivative(i) - 1e-6 * legendre_inf_norm_derivative(i));
  }
}

TEST_CASE("orthogonality spot check with Gauss quadrature") {
  const GaussRule& rule = gauss_legendre(12);  // exact through degree 23
  for (int i = 0; i <= 8; ++i) {
    for (int k = 0; k <= 8; ++k) {
      const double v = gauss_integrate(rule, -1.0, 1.0, [&](double z) {
        return legendre_eval(i, z) * legendre_eval(k, z);
      });
      if (i == k) {
        CHECK(v == doctest::Approx(2.0 / (2.0 * i + 1.0)).epsilon(1e-12));
      } else {
        CHECK(std::abs(v) <= 1e-12);
      }
    }
  }
}

TEST_CASE("interval map") {
  const IntervalMap m01 = interval_map(0.0, 1.0);
  CHECK(m01.to_ref(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(m01.to_ref(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  const IntervalMap m24 = interval_map(2.0, 4.0);
  CHECK(m24.to_ref(2.5) == doctest::Approx(-0.5).epsilon(1e-15));
  // round trip
  for (int s = 0; s <= 20; ++s) {
    const double t = 2.0 + 2.0 * s / 20.0;
    CHECK(m24.from_ref(m24.to_ref(t)) == doctest::Approx(t).epsilon(1e-15));
  }
  CHECK_THROWS_AS(interval_map(1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(interval_map(2.0, 1.0), std::invalid_argument);
}
