#pragma once

#include <functional>
#include <vector>

namespace parex {

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Returns the n-point rule; results are cached. Exact for polynomials of
// degree <= 2n-1. Thread safe, but hoist the lookup out of hot loops.
const GaussRule& gauss_legendre(int n);

// Integrate f over [a, b] with the given rule.
template <class F>
double gauss_integrate(const GaussRule& rule, double a, double b, F&& f) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    s += rule.weights[q] * f(mid + half * rule.nodes[q]);
  }
  return half * s;
}

// Adaptive Simpson quadrature. Termination: local error estimate below
// max(abs_tol, rel_tol * |first whole-interval estimate|), halved per split.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-12,
                        double abs_tol = 1e-15, int max_depth = 48);

}  // namespace parex
