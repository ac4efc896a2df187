#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "l1spline/grid_tensor.hpp"

namespace l1spline {

enum class SyntheticKind { smooth_1d, step_1d, peaks_2d, ramp, climate_1d };

/// Parses "smooth-1d", "step-1d", "peaks-2d", "ramp", "climate-1d"; also
/// "step-outliers" (step-1d with the default outlier corruption).
SyntheticKind parse_synthetic_kind(std::string_view name);
std::string_view to_string(SyntheticKind kind);

/// Corruption model: y = ŷ + r₁ for every sample, and for the outlier subset
/// y = min(max(ŷ + r₁ + r₂, clip_lo), clip_hi) with r₂ ~ U[outlier_lo, outlier_hi].
/// Outliers are drawn with probability `outlier_fraction` among the samples
/// whose first-axis position falls in [segment_begin, segment_end) (fractions
/// of the axis length).
struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::smooth_1d;
  /// Grid shape; 1-D kinds use shape[0] only. Empty means the kind's default.
  Shape shape{};
  double noise_sigma = 0.0;
  double outlier_fraction = 0.0;
  double outlier_lo = -5.0;
  double outlier_hi = 5.0;
  std::optional<double> clip_lo{};
  std::optional<double> clip_hi{};
  double segment_begin = 0.0;
  double segment_end = 1.0;
  std::uint64_t seed = 0;
};

/// 1-D outlier benchmark settings: σ = 0.1 Gaussian noise and
/// 30% of the samples in the middle fifth hit by U[lo, hi] outliers, with
/// corrupted values clipped to [lo, hi].
SyntheticSpec outlier_protocol_1d(SyntheticKind kind, std::size_t n, std::uint64_t seed, double lo = -5.0,
                                  double hi = 5.0);

struct SyntheticData {
  GridTensor observed;
  GridTensor truth;
  /// True where an outlier was injected.
  Mask corrupted;
};

/// Deterministic for a fixed SyntheticSpec, seed included.
SyntheticData generate_synthetic(const SyntheticSpec& spec);

}  // namespace l1spline
