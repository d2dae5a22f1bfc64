#pragma once

#include <cstddef>
#include <vector>

namespace parex {

// Symmetric tridiagonal matrix: diag has n entries, off has n-1.
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> off;

  std::size_t size() const { return diag.size(); }

  // y = A x
  void multiply(const std::vector<double>& x, std::vector<double>& y) const;
};

// C = a*A + b*B (same sparsity).
SymTridiag combine(double a, const SymTridiag& A, double b, const SymTridiag& B);

// LDL^T factorisation of a symmetric positive definite tridiagonal matrix
// (the symmetric form of the Thomas algorithm). Throws std::runtime_error
// ("singular-matrix") when a pivot underflows.
class TridiagFactor {
 public:
  explicit TridiagFactor(const SymTridiag& a);

  void solve(const std::vector<double>& b, std::vector<double>& x) const;

  // Solve followed by one step of iterative refinement against `a`.
  void solve_refined(const SymTridiag& a, const std::vector<double>& b,
                     std::vector<double>& x) const;

 private:
  std::vector<double> d_;  // pivots
  std::vector<double> l_;  // subdiagonal multipliers
};

// Dense solve with partial pivoting plus one step of iterative refinement.
// Intended for the small systems of this library (extrapolation weights,
// collocation), n <= ~12. a is n x n row-major and is consumed.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b);

}  // namespace parex
