#include "parex/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace parex {

void validate_problem(const ProblemSpec& p) {
  if (!(p.x_a < p.x_b)) throw std::invalid_argument("problem: x_a must be < x_b");
  if (!(p.T > 0.0)) throw std::invalid_argument("problem: T must be positive");
  if (!p.d || !p.r || !p.u0 || !p.f) throw std::invalid_argument("problem: missing coefficient");
  constexpr int kSamples = 512;
  for (int k = 0; k <= kSamples; ++k) {
    const double x = p.x_a + (p.x_b - p.x_a) * k / kSamples;
    if (!(p.d(x) > 0.0)) {
      throw std::invalid_argument("non-positive-diffusion: d(x) must be strictly positive");
    }
    if (p.r(x) < -1e-12) {
      throw std::invalid_argument("problem: reaction coefficient must be non-negative");
    }
  }
  if (std::abs(p.u0(p.x_a)) > 1e-12 || std::abs(p.u0(p.x_b)) > 1e-12) {
    throw std::invalid_argument("problem: u0 must vanish on the boundary");
  }
  if (p.green.kappa0 < 0 || p.green.kappa1 < 0 || p.green.kappa1_prime < 0 || p.green.gamma < 0) {
    throw std::invalid_argument("problem: Green's-function constants must be non-negative");
  }
}

ProblemSpec builtin_test_problem() {
  ProblemSpec p;
  p.x_a = -1.0;
  p.x_b = 1.0;
  p.T = 1.0;
  p.d = [](double) { return 1.0; };
  p.r = [](double x) { return 5.0 * x + 6.0; };
  p.f = [](double x, double t) {
    const double s = x + t;
    return std::exp(-4.0 * t) + std::cos(M_PI * s * s);
  };
  p.u0 = [](double x) { return std::sin(M_PI * (1.0 + x) / 2.0); };
  p.green.kappa0 = 1.0;
  p.green.kappa1 = 3.0 / std::pow(2.0, 1.5);
  p.green.kappa1_prime = 0.0;
  p.green.gamma = 0.5;
  return p;
}

ManufacturedProblem manufactured_problem() {
  ManufacturedProblem m;
  m.spec.x_a = 0.0;
  m.spec.x_b = 1.0;
  m.spec.T = 1.0;
  m.spec.d = [](double) { return 1.0; };
  m.spec.r = [](double) { return 1.0; };
  // u = exp(-t) sin(pi x):  u_t - u_xx + u = pi^2 u
  m.spec.f = [](double x, double t) {
    return M_PI * M_PI * std::exp(-t) * std::sin(M_PI * x);
  };
  m.spec.u0 = [](double x) { return std::sin(M_PI * x); };
  m.spec.green.kappa0 = 1.0;
  m.spec.green.kappa1 = 3.0 / std::pow(2.0, 1.5);
  m.spec.green.kappa1_prime = 0.0;
  m.spec.green.gamma = 1.0;
  m.exact = [](double x, double t) { return std::exp(-t) * std::sin(M_PI * x); };
  return m;
}

}  // namespace parex
