#include "parex/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "parex/polybasis.hpp"

namespace parex {

namespace {

GaussRule make_rule(int n) {
  GaussRule rule;
  rule.nodes = legendre_roots(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    const double x = rule.nodes[k];
    const double dp = legendre_derivative(n, x);
    rule.weights[k] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double simpson(double fa, double fm, double fb, double h) {
  return (fa + 4.0 * fm + fb) * (h / 6.0);
}

double adapt(const std::function<double(double)>& f, double a, double m, double b,
             double fa, double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, m - a);
  const double right = simpson(fm, frm, fb, b - m);
  const double err = left + right - whole;
  if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
    return left + right + err / 15.0;
  }
  return adapt(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  static std::map<int, GaussRule> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol, double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = simpson(fa, fm, fb, b - a);
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
  return adapt(f, a, m, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace parex
