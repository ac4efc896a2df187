#include "l1spline/spectral.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace l1spline {

std::vector<double> eigenvalues_1d(std::size_t n) {
  if (n == 0) throw std::invalid_argument("eigenvalues requested for an empty axis");
  std::vector<double> lambda(n);
  for (std::size_t k = 0; k < n; ++k) {
    lambda[k] = -2.0 + 2.0 * std::cos(static_cast<double>(k) * std::numbers::pi / static_cast<double>(n));
  }
  return lambda;
}

GridTensor lambda_tensor(const Shape& shape) {
  GridTensor out(shape, 0.0);
  const auto strides = row_major_strides(shape);
  for (std::size_t axis = 0; axis < shape.size(); ++axis) {
    const auto axis_lambda = eigenvalues_1d(shape[axis]);
    for (std::size_t i = 0; i < out.size(); ++i) {
      out[i] += axis_lambda[(i / strides[axis]) % shape[axis]];
    }
  }
  return out;
}

double SpectralFilter::trace() const {
  const auto v = gains_.values();
  return std::accumulate(v.begin(), v.end(), 0.0);
}

SpectralFilter gamma_tensor(const Shape& shape, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    throw std::invalid_argument("smoothing parameter s must be finite and nonnegative");
  }
  GridTensor gains = lambda_tensor(shape);
  for (double& g : gains.values()) g = 1.0 / (1.0 + s * g * g);
  return SpectralFilter(std::move(gains), s);
}

void apply_filter_inplace(const SpectralFilter& filter, GridTensor& spectrum) {
  if (spectrum.shape() != filter.shape()) throw std::invalid_argument("filter/spectrum shape mismatch");
  const auto gains = filter.gains().values();
  auto values = spectrum.values();
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= gains[i];
}

GridTensor apply_filter(const SpectralFilter& filter, const GridTensor& spectrum) {
  GridTensor out = spectrum;
  apply_filter_inplace(filter, out);
  return out;
}

}  // namespace l1spline
