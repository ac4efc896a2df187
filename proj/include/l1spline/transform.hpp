#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "l1spline/grid_tensor.hpp"

namespace l1spline {

/// Orthonormal DCT-II / inverse DCT-II of one fixed length.
///
/// Uses Makhoul's reordering so that a length-n DCT costs one real FFT of
/// length n (FFTW); any n >= 1 is accepted. A plan is immutable after
/// construction and may be shared between threads; scratch space is
/// thread-local.
class TransformPlan {
 public:
  explicit TransformPlan(std::size_t length);
  ~TransformPlan();
  TransformPlan(const TransformPlan&) = delete;
  TransformPlan& operator=(const TransformPlan&) = delete;

  std::size_t length() const { return n_; }

  void forward(std::span<double> v) const;
  void inverse(std::span<double> v) const;

  /// Transform the fiber `line` of the flat buffer `data` in place.
  void forward(std::span<double> data, const LineDescriptor& line) const;
  void inverse(std::span<double> data, const LineDescriptor& line) const;

  /// Forward transform of a fiber, each coefficient multiplied by the entry
  /// of `gains` at the same flat index.
  void forward(std::span<double> data, const LineDescriptor& line, std::span<const double> gains) const;

 private:
  void forward_strided(double* base, std::size_t stride, const double* gains = nullptr) const;
  void inverse_strided(double* base, std::size_t stride) const;

  struct RealFft;

  std::size_t n_;
  std::unique_ptr<RealFft> fft_;
  std::vector<double> cos_;  // cos(πk/2n), k <= n/2
  std::vector<double> sin_;  // sin(πk/2n), k <= n/2
};

/// Shared, lazily built plan for a length. Thread-safe.
const TransformPlan& plan_for(std::size_t length);

std::vector<double> dct_1d(std::span<const double> v);
std::vector<double> idct_1d(std::span<const double> v);

/// Transform every fiber along one axis in place.
void dct_along_axis(GridTensor& t, std::size_t axis);
void idct_along_axis(GridTensor& t, std::size_t axis);

/// Separable m-dimensional transforms: the 1-D transform applied along every axis.
void dct_nd_inplace(GridTensor& t);
void idct_nd_inplace(GridTensor& t);

/// dct_nd_inplace followed by an element-wise product with `gains` (same
/// shape), fused into the last axis pass.
void dct_nd_scaled_inplace(GridTensor& t, const GridTensor& gains);
GridTensor dct_nd(GridTensor t);
GridTensor idct_nd(GridTensor t);

}  // namespace l1spline
