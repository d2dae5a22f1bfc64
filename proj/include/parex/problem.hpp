#pragma once

#include <functional>

namespace parex {

using SpatialFn = std::function<double(double x)>;
using SpaceTimeFn = std::function<double(double x, double t)>;

// L1-in-space bounds on the parabolic Green's function and its time
// derivative:  ||G(t)||_1 <= kappa0 e^{-gamma t},
//              ||dG/dt(t)||_1 <= (kappa1/t + kappa1_prime) e^{-gamma t}.
// These constants are inputs of the estimator, not computed here.
struct GreenFunctionBounds {
  double kappa0 = 1.0;
  double kappa1 = 0.0;
  double kappa1_prime = 0.0;
  double gamma = 0.0;
};

// Data of  du/dt - (d(x) u')' + r(x) u = f(x,t)  on (x_a, x_b) x (0, T],
// u = 0 on the boundary, u(.,0) = u0.
struct ProblemSpec {
  double x_a = 0.0;
  double x_b = 1.0;
  double T = 1.0;
  SpatialFn d;
  SpatialFn r;
  SpatialFn u0;
  SpaceTimeFn f;
  GreenFunctionBounds green;
};

// Sampled sanity checks: d > 0 and r >= 0 on the domain, u0 vanishing at the
// endpoints. Throws std::invalid_argument on violation.
void validate_problem(const ProblemSpec& p);

// Reaction-diffusion benchmark on (-1,1) x (0,1]:
//   du/dt - u_xx + (5x+6) u = exp(-4t) + cos(pi (x+t)^2),
//   u(x,0) = sin(pi (1+x)/2),
// with Green's-function constants kappa0 = 1, kappa1 = 3/2^{3/2},
// kappa1' = 0, gamma = 1/2.
ProblemSpec builtin_test_problem();

struct ManufacturedProblem {
  ProblemSpec spec;
  SpaceTimeFn exact;  // closed-form solution, for verification
};

// Smooth problem with known solution u = exp(-t) sin(pi x) on (0,1),
// d = 1, r = 1, f = pi^2 exp(-t) sin(pi x).
ManufacturedProblem manufactured_problem();

}  // namespace parex
