#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <span>
#include <vector>

namespace l1spline {

/// Extents n_1..n_m of a rectangular grid, outermost axis first.
using Shape = std::vector<std::size_t>;

/// Number of elements addressed by a shape. Throws if the shape is empty or has a zero extent.
std::size_t element_count(const Shape& shape);

/// Row-major strides of a shape, in elements.
std::vector<std::size_t> row_major_strides(const Shape& shape);

/// One fiber of a tensor along a fixed axis: `length` elements starting at
/// flat index `offset`, spaced `stride` apart.
struct LineDescriptor {
  std::size_t offset = 0;
  std::size_t stride = 1;
  std::size_t length = 0;

  std::size_t index(std::size_t i) const { return offset + i * stride; }
  bool operator==(const LineDescriptor&) const = default;
};

/// Lazy range over every fiber of a shape along one axis. Yields
/// element_count(shape) / shape[axis] descriptors that together cover each
/// flat index exactly once.
class AxisLines {
 public:
  AxisLines(const Shape& shape, std::size_t axis);

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = LineDescriptor;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = LineDescriptor;

    iterator() = default;
    iterator(const AxisLines* owner, std::size_t k) : owner_(owner), k_(k) {}
    LineDescriptor operator*() const { return (*owner_)[k_]; }
    iterator& operator++() {
      ++k_;
      return *this;
    }
    iterator operator++(int) {
      iterator tmp = *this;
      ++k_;
      return tmp;
    }
    bool operator==(const iterator& o) const { return k_ == o.k_; }

   private:
    const AxisLines* owner_ = nullptr;
    std::size_t k_ = 0;
  };

  std::size_t size() const { return count_; }
  std::size_t line_length() const { return length_; }
  LineDescriptor operator[](std::size_t k) const {
    const std::size_t outer = k / stride_;
    const std::size_t inner = k % stride_;
    return {outer * length_ * stride_ + inner, stride_, length_};
  }
  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, count_}; }

 private:
  std::size_t length_;
  std::size_t stride_;
  std::size_t count_;
};

/// Fibers of `shape` along `axis`. Throws std::out_of_range for a bad axis.
AxisLines lines_along_axis(const Shape& shape, std::size_t axis);

/// Dense real-valued m-dimensional array in row-major order.
class GridTensor {
 public:
  GridTensor() = default;
  explicit GridTensor(Shape shape, double fill = 0.0);
  GridTensor(Shape shape, std::vector<double> data);

  /// 1-D tensor holding `values`.
  static GridTensor from_vector(std::vector<double> values);

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  const std::vector<double>& vector() const { return data_; }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  /// Flat offset of a multi-index. Throws on rank or bound violations.
  std::size_t flat_index(std::span<const std::size_t> index) const;
  double& at(std::initializer_list<std::size_t> index);
  double at(std::initializer_list<std::size_t> index) const;

  bool same_shape(const GridTensor& other) const { return shape_ == other.shape_; }
  bool all_finite() const;

  GridTensor& operator+=(const GridTensor& other);
  GridTensor& operator-=(const GridTensor& other);
  GridTensor& operator*=(double factor);

  bool operator==(const GridTensor&) const = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

GridTensor operator+(GridTensor a, const GridTensor& b);
GridTensor operator-(GridTensor a, const GridTensor& b);
GridTensor operator*(GridTensor a, double factor);
GridTensor hadamard(const GridTensor& a, const GridTensor& b);

double norm2(const GridTensor& t);
double distance2(const GridTensor& a, const GridTensor& b);

/// ‖a − b‖₂ / ‖b‖₂. When ‖b‖₂ = 0 the result is ‖a‖₂.
double relative_change(const GridTensor& a, const GridTensor& b);

/// Observed/missing flags for a grid; true marks an observed sample.
class Mask {
 public:
  Mask() = default;
  explicit Mask(Shape shape, bool observed = true);
  Mask(Shape shape, std::vector<std::uint8_t> flags);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return flags_.size(); }
  bool observed(std::size_t i) const { return flags_[i] != 0; }
  void set(std::size_t i, bool observed) { flags_[i] = observed ? 1 : 0; }
  std::size_t observed_count() const;
  bool all_observed() const { return observed_count() == flags_.size(); }
  std::span<const std::uint8_t> flags() const { return flags_; }

  /// 0/1 weight tensor with the mask's shape.
  GridTensor to_weights() const;

  bool operator==(const Mask&) const = default;

 private:
  Shape shape_;
  std::vector<std::uint8_t> flags_;
};

/// Throws std::invalid_argument when the mask does not match `shape` or
/// marks every sample missing.
void require_usable_mask(const Mask& mask, const Shape& shape);

/// Observation with missing samples split out: NaN entries become
/// (value 0, flag false).
struct Observation {
  GridTensor values;
  Mask mask;
};

Observation split_missing(GridTensor raw);

}  // namespace l1spline
