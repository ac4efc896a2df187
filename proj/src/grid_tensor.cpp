#include "l1spline/grid_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace l1spline {

std::size_t element_count(const Shape& shape) {
  if (shape.empty()) throw std::invalid_argument("grid shape must have at least one axis");
  std::size_t n = 1;
  for (std::size_t extent : shape) {
    if (extent == 0) throw std::invalid_argument("grid extents must be positive");
    n *= extent;
  }
  return n;
}

std::vector<std::size_t> row_major_strides(const Shape& shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t j = shape.size(); j-- > 1;) strides[j - 1] = strides[j] * shape[j];
  return strides;
}

AxisLines::AxisLines(const Shape& shape, std::size_t axis) {
  const std::size_t n = element_count(shape);
  if (axis >= shape.size()) {
    throw std::out_of_range("axis " + std::to_string(axis) + " out of range for rank " +
                            std::to_string(shape.size()));
  }
  length_ = shape[axis];
  stride_ = row_major_strides(shape)[axis];
  count_ = n / length_;
}

AxisLines lines_along_axis(const Shape& shape, std::size_t axis) { return AxisLines(shape, axis); }

GridTensor::GridTensor(Shape shape, double fill)
    : shape_(std::move(shape)), data_(element_count(shape_), fill) {}

GridTensor::GridTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != element_count(shape_)) {
    throw std::invalid_argument("tensor data length " + std::to_string(data_.size()) +
                                " does not match shape product " +
                                std::to_string(element_count(shape_)));
  }
}

GridTensor GridTensor::from_vector(std::vector<double> values) {
  Shape shape{values.size()};
  return GridTensor(std::move(shape), std::move(values));
}

std::size_t GridTensor::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size()) throw std::out_of_range("multi-index rank mismatch");
  std::size_t flat = 0;
  for (std::size_t j = 0; j < shape_.size(); ++j) {
    if (index[j] >= shape_[j]) throw std::out_of_range("multi-index out of bounds");
    flat = flat * shape_[j] + index[j];
  }
  return flat;
}

double& GridTensor::at(std::initializer_list<std::size_t> index) {
  return data_[flat_index(std::span<const std::size_t>(index.begin(), index.size()))];
}

double GridTensor::at(std::initializer_list<std::size_t> index) const {
  return data_[flat_index(std::span<const std::size_t>(index.begin(), index.size()))];
}

bool GridTensor::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

namespace {

void require_same_shape(const GridTensor& a, const GridTensor& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("tensor shape mismatch");
}

}  // namespace

GridTensor& GridTensor::operator+=(const GridTensor& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

GridTensor& GridTensor::operator-=(const GridTensor& other) {
  require_same_shape(*this, other);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

GridTensor& GridTensor::operator*=(double factor) {
  for (double& v : data_) v *= factor;
  return *this;
}

GridTensor operator+(GridTensor a, const GridTensor& b) { return a += b; }
GridTensor operator-(GridTensor a, const GridTensor& b) { return a -= b; }
GridTensor operator*(GridTensor a, double factor) { return a *= factor; }

GridTensor hadamard(const GridTensor& a, const GridTensor& b) {
  require_same_shape(a, b);
  GridTensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

double norm2(const GridTensor& t) {
  double sum = 0.0;
  for (double v : t.values()) sum += v * v;
  return std::sqrt(sum);
}

double distance2(const GridTensor& a, const GridTensor& b) {
  require_same_shape(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

double relative_change(const GridTensor& a, const GridTensor& b) {
  require_same_shape(a, b);
  double diff = 0.0;
  double base = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double delta = a[i] - b[i];
    diff += delta * delta;
    base += b[i] * b[i];
  }
  if (base == 0.0) return norm2(a);
  return std::sqrt(diff) / std::sqrt(base);
}

Mask::Mask(Shape shape, bool observed)
    : shape_(std::move(shape)), flags_(element_count(shape_), observed ? 1 : 0) {}

Mask::Mask(Shape shape, std::vector<std::uint8_t> flags)
    : shape_(std::move(shape)), flags_(std::move(flags)) {
  if (flags_.size() != element_count(shape_)) {
    throw std::invalid_argument("mask length does not match shape product");
  }
  for (auto& f : flags_) f = f ? 1 : 0;
}

std::size_t Mask::observed_count() const {
  return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), std::uint8_t{1}));
}

GridTensor Mask::to_weights() const {
  GridTensor w(shape_, 0.0);
  for (std::size_t i = 0; i < flags_.size(); ++i) w[i] = flags_[i] ? 1.0 : 0.0;
  return w;
}

void require_usable_mask(const Mask& mask, const Shape& shape) {
  if (mask.shape() != shape) throw std::invalid_argument("mask shape does not match data shape");
  if (mask.observed_count() == 0) throw std::invalid_argument("every sample is missing");
}

Observation split_missing(GridTensor raw) {
  Mask mask(raw.shape(), true);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (std::isnan(raw[i])) {
      raw[i] = 0.0;
      mask.set(i, false);
    }
  }
  return {std::move(raw), std::move(mask)};
}

}  // namespace l1spline
