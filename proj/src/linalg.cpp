#include "parex/linalg.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace parex {

void SymTridiag::multiply(const std::vector<double>& x, std::vector<double>& y) const {
  const std::size_t n = diag.size();
  y.resize(n);
  if (n == 0) return;
  if (n == 1) {
    y[0] = diag[0] * x[0];
    return;
  }
  y[0] = diag[0] * x[0] + off[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    y[i] = off[i - 1] * x[i - 1] + diag[i] * x[i] + off[i] * x[i + 1];
  }
  y[n - 1] = off[n - 2] * x[n - 2] + diag[n - 1] * x[n - 1];
}

SymTridiag combine(double a, const SymTridiag& A, double b, const SymTridiag& B) {
  SymTridiag c;
  const std::size_t n = A.diag.size();
  c.diag.resize(n);
  c.off.resize(A.off.size());
  for (std::size_t i = 0; i < n; ++i) c.diag[i] = a * A.diag[i] + b * B.diag[i];
  for (std::size_t i = 0; i < A.off.size(); ++i) c.off[i] = a * A.off[i] + b * B.off[i];
  return c;
}

TridiagFactor::TridiagFactor(const SymTridiag& a) {
  const std::size_t n = a.size();
  d_.resize(n);
  l_.resize(n > 0 ? n - 1 : 0);
  double scale = 0.0;
  for (double v : a.diag) scale = std::max(scale, std::abs(v));
  const double tiny = 1e-300 + 1e-14 * scale * 1e-2;
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double di = a.diag[i];
    if (i > 0) {
      const double li = a.off[i - 1] / prev;
      l_[i - 1] = li;
      di -= li * a.off[i - 1];
    }
    if (!(std::abs(di) > tiny)) {
      throw std::runtime_error("singular-matrix: tridiagonal pivot underflow");
    }
    d_[i] = di;
    prev = di;
  }
}

void TridiagFactor::solve(const std::vector<double>& b, std::vector<double>& x) const {
  const std::size_t n = d_.size();
  x.resize(n);
  if (n == 0) return;
  x[0] = b[0];
  for (std::size_t i = 1; i < n; ++i) x[i] = b[i] - l_[i - 1] * x[i - 1];
  x[n - 1] /= d_[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = x[i] / d_[i] - l_[i] * x[i + 1];
}

void TridiagFactor::solve_refined(const SymTridiag& a, const std::vector<double>& b,
                                  std::vector<double>& x) const {
  solve(b, x);
  const std::size_t n = d_.size();
  std::vector<double> r(n), dx(n);
  a.multiply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  solve(r, dx);
  for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
}

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  const std::vector<double> a0 = a;
  const std::vector<double> b0 = b;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;

  auto lu_solve = [&](std::vector<double>& rhs) {
    // apply permutation, forward/backward substitution on the stored LU
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = rhs[perm[i]];
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < i; ++k) y[i] -= a[i * n + k] * y[k];
    }
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t k = i + 1; k < n; ++k) y[i] -= a[i * n + k] * y[k];
      y[i] /= a[i * n + i];
    }
    rhs = y;
  };

  // LU with partial pivoting (rows swapped in place, pivot order in perm)
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    double best = std::abs(a[col * n + col]);
    for (std::size_t rr = col + 1; rr < n; ++rr) {
      const double v = std::abs(a[rr * n + col]);
      if (v > best) {
        best = v;
        piv = rr;
      }
    }
    if (!(best > 0.0)) throw std::runtime_error("singular-collocation: dense pivot is zero");
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
      std::swap(perm[col], perm[piv]);
    }
    for (std::size_t rr = col + 1; rr < n; ++rr) {
      const double m = a[rr * n + col] / a[col * n + col];
      a[rr * n + col] = m;
      for (std::size_t k = col + 1; k < n; ++k) a[rr * n + k] -= m * a[col * n + k];
    }
  }

  std::vector<double> x = b0;
  lu_solve(x);
  // one refinement sweep
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b0[i];
    for (std::size_t k = 0; k < n; ++k) s -= a0[i * n + k] * x[k];
    r[i] = s;
  }
  lu_solve(r);
  for (std::size_t i = 0; i < n; ++i) x[i] += r[i];
  return x;
}

}  // namespace parex
