#include "l1spline/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace l1spline {

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "smooth-1d") return SyntheticKind::smooth_1d;
  if (name == "step-1d" || name == "step-outliers") return SyntheticKind::step_1d;
  if (name == "peaks-2d") return SyntheticKind::peaks_2d;
  if (name == "ramp") return SyntheticKind::ramp;
  if (name == "climate-1d") return SyntheticKind::climate_1d;
  throw std::invalid_argument("unknown synthetic kind '" + std::string(name) + "'");
}

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::smooth_1d:
      return "smooth-1d";
    case SyntheticKind::step_1d:
      return "step-1d";
    case SyntheticKind::peaks_2d:
      return "peaks-2d";
    case SyntheticKind::ramp:
      return "ramp";
    case SyntheticKind::climate_1d:
      return "climate-1d";
  }
  return "unknown";
}

SyntheticSpec outlier_protocol_1d(SyntheticKind kind, std::size_t n, std::uint64_t seed, double lo, double hi) {
  SyntheticSpec spec;
  spec.kind = kind;
  spec.shape = {n};
  spec.noise_sigma = 0.1;
  spec.outlier_fraction = 0.3;
  spec.outlier_lo = lo;
  spec.outlier_hi = hi;
  spec.clip_lo = lo;
  spec.clip_hi = hi;
  spec.segment_begin = 0.4;
  spec.segment_end = 0.6;
  spec.seed = seed;
  return spec;
}

namespace {

Shape resolve_shape(const SyntheticSpec& spec) {
  Shape shape = spec.shape;
  switch (spec.kind) {
    case SyntheticKind::smooth_1d:
    case SyntheticKind::step_1d:
      if (shape.empty()) shape = {4096};
      shape.resize(1);
      break;
    case SyntheticKind::climate_1d:
      if (shape.empty()) shape = {163};
      shape.resize(1);
      break;
    case SyntheticKind::peaks_2d:
      if (shape.empty()) shape = {256, 256};
      if (shape.size() == 1) shape.push_back(shape[0]);
      if (shape.size() != 2) throw std::invalid_argument("peaks-2d needs a 2-D shape");
      break;
    case SyntheticKind::ramp:
      if (shape.empty()) shape = {64};
      break;
  }
  element_count(shape);
  return shape;
}

double unit(std::size_t i, std::size_t n) {
  return n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
}

double peaks(double x, double y) {
  return 3.0 * (1.0 - x) * (1.0 - x) * std::exp(-x * x - (y + 1.0) * (y + 1.0)) -
         10.0 * (x / 5.0 - x * x * x - std::pow(y, 5)) * std::exp(-x * x - y * y) -
         std::exp(-(x + 1.0) * (x + 1.0) - y * y) / 3.0;
}

GridTensor ground_truth(SyntheticKind kind, const Shape& shape) {
  GridTensor truth(shape, 0.0);
  const std::size_t n0 = shape[0];
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (kind) {
    case SyntheticKind::smooth_1d:
      for (std::size_t i = 0; i < n0; ++i) {
        const double t = unit(i, n0);
        truth[i] = 2.0 * std::sin(two_pi * 1.5 * t) + 0.5 * std::cos(two_pi * 4.0 * t) + t;
      }
      break;
    case SyntheticKind::step_1d:
      // Three periods of a ±1 square wave.
      for (std::size_t i = 0; i < n0; ++i) {
        const auto segment = static_cast<std::size_t>(6.0 * static_cast<double>(i) / static_cast<double>(n0));
        truth[i] = segment % 2 == 0 ? 1.0 : -1.0;
      }
      break;
    case SyntheticKind::climate_1d:
      // Annual temperature-anomaly-like series starting in 1850.
      for (std::size_t i = 0; i < n0; ++i) {
        const double year = 1850.0 + static_cast<double>(i);
        truth[i] = -0.35 + 0.15 * (1.0 + std::tanh((year - 1925.0) / 10.0)) + 0.016 * std::max(0.0, year - 1975.0);
      }
      break;
    case SyntheticKind::peaks_2d: {
      const std::size_t cols = shape[1];
      for (std::size_t r = 0; r < n0; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
          truth[r * cols + c] = peaks(-3.0 + 6.0 * unit(c, cols), -3.0 + 6.0 * unit(r, n0));
        }
      }
      break;
    }
    case SyntheticKind::ramp: {
      const auto strides = row_major_strides(shape);
      for (std::size_t i = 0; i < truth.size(); ++i) {
        double v = 0.0;
        for (std::size_t j = 0; j < shape.size(); ++j) {
          v += static_cast<double>((i / strides[j]) % shape[j]) / static_cast<double>(shape[j]);
        }
        truth[i] = v;
      }
      break;
    }
  }
  return truth;
}

}  // namespace

SyntheticData generate_synthetic(const SyntheticSpec& spec) {
  if (!(spec.noise_sigma >= 0.0)) throw std::invalid_argument("noise sigma must be nonnegative");
  if (!(spec.outlier_fraction >= 0.0 && spec.outlier_fraction <= 1.0)) {
    throw std::invalid_argument("outlier fraction must lie in [0, 1]");
  }
  if (!(spec.outlier_lo <= spec.outlier_hi)) throw std::invalid_argument("outlier range is inverted");
  if (spec.clip_lo && spec.clip_hi && !(*spec.clip_lo <= *spec.clip_hi)) {
    throw std::invalid_argument("clip bounds are inverted");
  }
  if (!(spec.segment_begin >= 0.0 && spec.segment_begin <= spec.segment_end && spec.segment_end <= 1.0)) {
    throw std::invalid_argument("outlier segment must satisfy 0 <= begin <= end <= 1");
  }

  const Shape shape = resolve_shape(spec);
  GridTensor truth = ground_truth(spec.kind, shape);
  SyntheticData out{truth, std::move(truth), Mask(shape, false)};

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_real_distribution<double> outlier(spec.outlier_lo, spec.outlier_hi);

  const std::size_t n0 = shape[0];
  const std::size_t per_row = out.observed.size() / n0;
  for (std::size_t i = 0; i < out.observed.size(); ++i) {
    double v = out.truth[i] + spec.noise_sigma * gauss(rng);
    const double position = static_cast<double>(i / per_row) / static_cast<double>(n0);
    const bool in_segment = position >= spec.segment_begin && position < spec.segment_end;
    if (in_segment && spec.outlier_fraction > 0.0 && coin(rng) < spec.outlier_fraction) {
      v += outlier(rng);
      if (spec.clip_lo) v = std::max(v, *spec.clip_lo);
      if (spec.clip_hi) v = std::min(v, *spec.clip_hi);
      out.corrupted.set(i, true);
    }
    out.observed[i] = v;
  }
  return out;
}

}  // namespace l1spline
