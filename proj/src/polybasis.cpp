#include "parex/polybasis.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace parex {

double legendre_eval(int i, double xi) {
  assert(i >= 0);
  assert(xi >= -1.0 - 1e-12 && xi <= 1.0 + 1e-12);
  if (i == 0) return 1.0;
  if (i == 1) return xi;
  double pm = 1.0;   // P_0
  double pc = xi;    // P_1
  for (int k = 1; k < i; ++k) {
    const double pn = ((2.0 * k + 1.0) * xi * pc - k * pm) / (k + 1.0);
    pm = pc;
    pc = pn;
  }
  return pc;
}

void legendre_eval_all(int n, double xi, std::span<double> out) {
  assert(static_cast<int>(out.size()) >= n + 1);
  out[0] = 1.0;
  if (n == 0) return;
  out[1] = xi;
  for (int k = 1; k < n; ++k) {
    out[k + 1] = ((2.0 * k + 1.0) * xi * out[k] - k * out[k - 1]) / (k + 1.0);
  }
}

double legendre_derivative(int i, double xi) {
  assert(i >= 0);
  if (i == 0) return 0.0;
  const double endpoint = 0.5 * i * (i + 1.0);
  if (xi >= 1.0) return endpoint;
  if (xi <= -1.0) return (i % 2 == 0) ? -endpoint : endpoint;
  const double pi_ = legendre_eval(i, xi);
  const double pim1 = legendre_eval(i - 1, xi);
  return i * (xi * pi_ - pim1) / (xi * xi - 1.0);
}

double integrated_legendre_eval(int i, double xi) {
  if (i < 2) throw std::invalid_argument("invalid-degree: integrated Legendre N_i needs i >= 2");
  // N_i = (P_i - P_{i-2}) / (2i - 1); vanishes identically at xi = +-1.
  return (legendre_eval(i, xi) - legendre_eval(i - 2, xi)) / (2.0 * i - 1.0);
}

std::vector<double> legendre_roots(int i) {
  std::vector<double> roots(i);
  for (int k = 1; k <= i; ++k) {
    // Chebyshev initial guess, then Newton; the roots are simple and well
    // separated so this converges in a handful of iterations.
    double x = std::cos(M_PI * (k - 0.25) / (i + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double p = legendre_eval(i, x);
      const double dp = legendre_derivative(i, x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    roots[i - k] = x;  // guesses come out descending
  }
  return roots;
}

double legendre_l1_norm(int i) {
  if (i < 0) throw std::invalid_argument("legendre_l1_norm: i must be >= 0");
  if (i == 0) return 2.0;
  // P_i has constant sign between consecutive roots; integrate exactly with
  // the antiderivative N_{i+1} and sum absolute panel values.
  const std::vector<double> roots = legendre_roots(i);
  auto anti = [i](double xi) {
    return (legendre_eval(i + 1, xi) - legendre_eval(i - 1, xi)) / (2.0 * i + 1.0);
  };
  double total = 0.0;
  double prev_x = -1.0;
  double prev_a = anti(-1.0);
  for (double rx : roots) {
    const double a = anti(rx);
    total += std::abs(a - prev_a);
    prev_x = rx;
    prev_a = a;
  }
  (void)prev_x;
  total += std::abs(anti(1.0) - prev_a);
  return total;
}

double legendre_inf_norm_derivative(int i) {
  if (i < 1) throw std::invalid_argument("legendre_inf_norm_derivative: i must be >= 1");
  return 0.5 * i * (i + 1.0);
}

IntervalMap::IntervalMap(double t_left, double t_right) : left_(t_left), right_(t_right) {
  if (!(t_left < t_right)) {
    throw std::invalid_argument("degenerate-interval: t_left must be < t_right");
  }
}

IntervalMap interval_map(double t_left, double t_right) { return IntervalMap(t_left, t_right); }

}  // namespace parex
