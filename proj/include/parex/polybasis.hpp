#pragma once

#include <span>
#include <vector>

namespace parex {

// Legendre polynomial P_i on [-1, 1], three-term recurrence.
double legendre_eval(int i, double xi);

// Fills out[0..n] with P_0(xi)..P_n(xi).
void legendre_eval_all(int n, double xi, std::span<double> out);

// P_i'(xi) for |xi| < 1 via the derivative identity; endpoint values by the
// closed form +-i(i+1)/2.
double legendre_derivative(int i, double xi);

// Integrated Legendre polynomial N_i(xi) = (P_i - P_{i-2})/(2i - 1), i >= 2.
// Vanishes at xi = +-1. Throws std::invalid_argument for i < 2.
double integrated_legendre_eval(int i, double xi);

// The i real roots of P_i, ascending (Newton from Chebyshev guesses).
std::vector<double> legendre_roots(int i);

// ||P_i||_{L1(-1,1)}: exact piecewise integration between consecutive roots.
double legendre_l1_norm(int i);

// ||P_i'||_{inf,(-1,1)} = i(i+1)/2, i >= 1.
double legendre_inf_norm_derivative(int i);

// Affine map between a mesh interval [t_left, t_right] and the reference
// interval [-1, 1]. Throws std::invalid_argument ("degenerate-interval")
// unless t_left < t_right.
class IntervalMap {
 public:
  IntervalMap(double t_left, double t_right);

  double left() const { return left_; }
  double right() const { return right_; }
  double length() const { return right_ - left_; }

  double to_ref(double t) const { return (2.0 * t - (left_ + right_)) / (right_ - left_); }
  double from_ref(double xi) const { return 0.5 * (left_ + right_) + 0.5 * xi * (right_ - left_); }

 private:
  double left_;
  double right_;
};

IntervalMap interval_map(double t_left, double t_right);

}  // namespace parex
