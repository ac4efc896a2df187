#pragma once

// Slow reference implementations for tests and the acceptance suite. Nothing
// here touches the FFT/DCT path: only direct cosine sums, explicit stencils
// and dense linear algebra.

#include <cstddef>
#include <span>
#include <vector>

#include "l1spline/grid_tensor.hpp"

namespace l1spline::oracle {

class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  DenseMatrix transpose() const;
  DenseMatrix operator*(const DenseMatrix& other) const;
  std::vector<double> operator*(std::span<const double> v) const;
  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator*=(double factor);

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// Second-difference matrix with repeated borders: tridiagonal, diagonal
/// (−1, −2, …, −2, −1), off-diagonals 1. Requires n >= 2.
DenseMatrix dense_D(std::size_t n);

/// Kronecker-sum operator Σ_j I ⊗ … ⊗ D_{n_j} ⊗ … ⊗ I acting on row-major
/// flattened tensors. Axes of extent 1 contribute nothing.
DenseMatrix kronecker_sum_D(const Shape& shape);

/// Solve A x = b for symmetric positive definite A by unpivoted Cholesky.
/// Throws std::runtime_error if a pivot is not positive.
std::vector<double> cholesky_solve(DenseMatrix a, std::span<const double> b);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted in
/// descending order.
std::vector<double> symmetric_eigenvalues(DenseMatrix a);

/// (I + sDᵀD)⁻¹ y.
std::vector<double> dense_l2_solve(std::span<const double> y, double s);
/// (W + sDᵀD)⁻¹ W y with W = diag(w).
std::vector<double> dense_weighted_solve(std::span<const double> y, std::span<const double> w, double s);
/// m-D versions using the Kronecker-sum operator; dense-feasible sizes only (n <= 4096).
GridTensor dense_l2_solve_nd(const GridTensor& y, double s);
GridTensor dense_weighted_solve_nd(const GridTensor& y, const GridTensor& w, double s);

/// Orthonormal DCT-II / inverse by direct O(n²) cosine summation.
std::vector<double> naive_dct(std::span<const double> v);
std::vector<double> naive_idct(std::span<const double> v);

/// Apply the m-D second-difference operator (sum of per-axis stencils).
GridTensor apply_D(const GridTensor& z);

/// F(z) = ‖z − y‖₁ + s‖Dz‖₂².
double l1_objective(const GridTensor& y, const GridTensor& z, double s);

/// Distance of 0 from the subdifferential of F at z, with g = 2s·DᵀDz:
/// max over i of |g_i + sign(z_i − y_i)| where |z_i − y_i| > 1e-9, and
/// max(|g_i| − 1, 0) where z_i and y_i coincide.
double l1_optimality_residual(const GridTensor& y, const GridTensor& z, double s);

struct ProxResult {
  GridTensor z;
  int iterations = 0;
  bool diverged = false;
  /// F after every iteration.
  std::vector<double> objective;
};

/// Monotone accelerated proximal gradient (MFISTA) on F: gradient step on
/// s‖Dz‖², then shrinkage of z − y with threshold `step`. Requires
/// 0 < step < 1/(16s); monotone descent is guaranteed for step <= 1/(32s·m²)
/// on an m-dimensional grid.
ProxResult prox_gradient_reference(const GridTensor& y, double s, double step, int iters);

}  // namespace l1spline::oracle
