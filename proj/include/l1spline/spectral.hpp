#pragma once

#include <cstddef>
#include <vector>

#include "l1spline/grid_tensor.hpp"

namespace l1spline {

/// Eigenvalues of the second-difference operator with repeated-border
/// boundaries: −2 + 2cos(kπ/n) for k = 0..n−1, in DCT frequency order.
std::vector<double> eigenvalues_1d(std::size_t n);

/// Eigenvalues of the m-dimensional operator: the sum over axes of the 1-D
/// eigenvalues at each frequency multi-index.
GridTensor lambda_tensor(const Shape& shape);

/// Per-frequency gains 1 / (1 + s·Λ²) of a smoothing spline, built for one
/// (shape, s) pair.
class SpectralFilter {
 public:
  SpectralFilter(GridTensor gains, double s) : gains_(std::move(gains)), s_(s) {}

  const Shape& shape() const { return gains_.shape(); }
  const GridTensor& gains() const { return gains_; }
  double s() const { return s_; }

  /// Σ of all gains; equals the trace of the smoother matrix.
  double trace() const;

 private:
  GridTensor gains_;
  double s_;
};

/// Throws std::invalid_argument for negative or non-finite s.
SpectralFilter gamma_tensor(const Shape& shape, double s);

GridTensor apply_filter(const SpectralFilter& filter, const GridTensor& spectrum);
void apply_filter_inplace(const SpectralFilter& filter, GridTensor& spectrum);

}  // namespace l1spline
