#include "l1spline/l2_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "l1spline/transform.hpp"

namespace l1spline {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::tolerance:
      return "tolerance";
    case StopReason::iteration_cap:
      return "iteration_cap";
  }
  return "unknown";
}

namespace {

void require_finite(const GridTensor& y) {
  if (y.empty()) throw std::invalid_argument("empty input tensor");
  if (!y.all_finite()) throw std::invalid_argument("input contains non-finite values");
}

void require_weights(const GridTensor& weights, const Shape& shape) {
  if (weights.shape() != shape) throw std::invalid_argument("weight shape does not match data shape");
  bool any_positive = false;
  for (double w : weights.values()) {
    if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("weights must lie in [0, 1]");
    any_positive = any_positive || w > 0.0;
  }
  if (!any_positive) throw std::invalid_argument("every sample is missing");
}

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    m = 0.5 * (m + lower);
  }
  return m;
}

GridTensor zero_filled(const GridTensor& y, const GridTensor& weights) {
  GridTensor out = y;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (weights[i] <= 0.0) out[i] = 0.0;
  }
  return out;
}

constexpr int kGcvSweeps = 100;
constexpr double kGcvSweepTol = 1e-3;

// W(y − z) + z. Unit weights take y verbatim so a fully observed problem
// reproduces the unweighted spline bit for bit.
void blend_pseudo_data(const GridTensor& y, const GridTensor& weights, const GridTensor& current, GridTensor& out) {
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = weights[i];
    out[i] = w == 1.0 ? y[i] : w * (y[i] - current[i]) + current[i];
  }
}

bool all_ones(const GridTensor& weights) {
  return std::all_of(weights.values().begin(), weights.values().end(), [](double w) { return w == 1.0; });
}

}  // namespace

GridTensor smooth(const SpectralFilter& filter, const GridTensor& y) {
  if (filter.shape() != y.shape()) throw std::invalid_argument("filter shape does not match data");
  if (filter.s() == 0.0) return y;
  GridTensor out = y;
  dct_nd_scaled_inplace(out, filter.gains());
  idct_nd_inplace(out);
  return out;
}

GridTensor l2_spline(const GridTensor& y, double s) {
  require_finite(y);
  return smooth(gamma_tensor(y.shape(), s), y);
}

WeightedResult weighted_l2_iterate(const SpectralFilter& filter, const GridTensor& y,
                                   const GridTensor& weights, const GridTensor& start, double tol,
                                   int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (start.shape() != y.shape()) throw std::invalid_argument("initial guess shape mismatch");

  WeightedResult result{start, {}};
  GridTensor& current = result.fit;
  GridTensor blended(y.shape());
  for (int k = 1; k <= max_iter; ++k) {
    blend_pseudo_data(y, weights, current, blended);
    GridTensor next = smooth(filter, blended);
    const double change = relative_change(next, current);
    current = std::move(next);
    result.report.trace.push_back(change);
    result.report.iterations = k;
    if (change < tol) {
      result.report.converged = true;
      result.report.stop_reason = StopReason::tolerance;
      return result;
    }
  }
  result.report.stop_reason = StopReason::iteration_cap;
  return result;
}

WeightedResult weighted_l2_spline(const GridTensor& y, const GridTensor& weights,
                                  const WeightedSolveParams& params) {
  require_finite(y);
  require_weights(weights, y.shape());
  const SpectralFilter filter = gamma_tensor(y.shape(), params.s);
  GridTensor start = params.initial_guess ? *params.initial_guess : zero_filled(y, weights);
  return weighted_l2_iterate(filter, y, weights, start, params.tol, params.max_iter);
}

WeightedResult weighted_l2_spline(const GridTensor& y, const Mask& mask, const WeightedSolveParams& params) {
  require_usable_mask(mask, y.shape());
  return weighted_l2_spline(y, mask.to_weights(), params);
}

GridTensor bisquare_weights(const GridTensor& residuals, const Mask& mask, double tuning) {
  if (!(tuning > 0.0)) throw std::invalid_argument("bisquare tuning constant must be positive");
  require_usable_mask(mask, residuals.shape());
  std::vector<double> observed;
  observed.reserve(mask.observed_count());
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (mask.observed(i)) observed.push_back(residuals[i]);
  }
  const double center = median_of(observed);
  std::vector<double> deviations(observed.size());
  double mean_abs = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    deviations[i] = std::abs(observed[i] - center);
    mean_abs += std::abs(observed[i]);
  }
  mean_abs /= static_cast<double>(observed.size());
  double scale = 1.4826 * median_of(deviations);
  // More than half the residuals identical: fall back to the mean absolute
  // residual, scaled to a Gaussian σ.
  if (scale <= 0.0) scale = 1.2533 * mean_abs;

  GridTensor weights(residuals.shape(), 0.0);
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    if (!mask.observed(i)) continue;
    if (scale <= 0.0) {
      weights[i] = 1.0;
      continue;
    }
    const double u = residuals[i] / (tuning * scale);
    weights[i] = std::abs(u) < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
  }
  return weights;
}

namespace {

// Shared IRLS loop; `choose_s` picks the smoothing parameter for the next
// weighted solve given the current combined weights.
template <typename ChooseS>
RobustResult run_irls(const GridTensor& y, const Mask& mask, int rounds, double tuning, double tol,
                      int max_iter, ChooseS choose_s) {
  require_finite(y);
  require_usable_mask(mask, y.shape());
  if (rounds < 1) throw std::invalid_argument("IRLS needs at least one round");

  RobustResult result;
  GridTensor weights = mask.to_weights();
  std::optional<GridTensor> previous;
  for (int round = 0; round < rounds; ++round) {
    WeightedSolveParams p;
    p.s = choose_s(weights);
    p.tol = tol;
    p.max_iter = max_iter;
    p.initial_guess = previous;
    WeightedResult solved = weighted_l2_spline(y, weights, p);
    if (previous) result.round_changes.push_back(relative_change(solved.fit, *previous));
    result.s = p.s;

    GridTensor robust = bisquare_weights(y - solved.fit, mask, tuning);
    bool any_positive = false;
    for (double w : robust.values()) any_positive = any_positive || w > 0.0;
    weights = any_positive ? std::move(robust) : mask.to_weights();
    previous = std::move(solved.fit);
  }
  result.fit = std::move(*previous);
  result.weights = std::move(weights);
  return result;
}

}  // namespace

RobustResult robust_l2_spline(const GridTensor& y, const Mask& mask, const RobustParams& params) {
  if (!(params.s >= 0.0)) throw std::invalid_argument("smoothing parameter s must be nonnegative");
  return run_irls(y, mask, params.irls_rounds, params.tuning, params.inner_tol, params.inner_max_iter,
                  [&](const GridTensor&) { return params.s; });
}

RobustResult robust_l2_spline(const GridTensor& y, const RobustParams& params) {
  return robust_l2_spline(y, Mask(y.shape(), true), params);
}

std::vector<double> GcvGrid::values() const {
  if (points < 2) throw std::invalid_argument("GCV grid needs at least two points");
  if (!std::isfinite(log10_lo) || !std::isfinite(log10_hi) || !(log10_lo < log10_hi)) {
    throw std::invalid_argument("degenerate GCV range");
  }
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = log10_lo + (log10_hi - log10_lo) * static_cast<double>(i) / (points - 1);
    out[static_cast<std::size_t>(i)] = std::pow(10.0, t);
  }
  return out;
}

double gcv_score(const GridTensor& y, const GridTensor& fit, const GridTensor& weights,
                 const SpectralFilter& filter) {
  double rss = 0.0;
  std::size_t observed = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    const double r = y[i] - fit[i];
    rss += weights[i] * r * r;
    ++observed;
  }
  const double n = static_cast<double>(y.size());
  const double denom = 1.0 - filter.trace() / n;
  if (observed == 0 || denom <= 0.0) return std::numeric_limits<double>::infinity();
  return (rss / static_cast<double>(observed)) / (denom * denom);
}

GcvResult gcv_select_s(const GridTensor& y, const GridTensor& weights, const GcvGrid& grid) {
  require_finite(y);
  require_weights(weights, y.shape());
  GcvResult result;
  result.grid = grid.values();
  const double n = static_cast<double>(y.size());

  if (all_ones(weights)) {
    // Parseval: the residual spectrum is (1 − Γ)·DCT(y).
    const GridTensor spectrum = dct_nd(y);
    double best = std::numeric_limits<double>::infinity();
    for (double s : result.grid) {
      const SpectralFilter filter = gamma_tensor(y.shape(), s);
      const auto g = filter.gains().values();
      double rss = 0.0;
      for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double r = (1.0 - g[i]) * spectrum[i];
        rss += r * r;
      }
      const double denom = 1.0 - filter.trace() / n;
      const double score = denom > 0.0 ? (rss / n) / (denom * denom) : std::numeric_limits<double>::infinity();
      result.scores.push_back(score);
      if (score <= best) {
        best = score;
        result.s = s;
      }
    }
    if (!std::isfinite(best)) throw std::runtime_error("GCV score is undefined over the whole grid");
    return result;
  }

  // Weighted data: fixed-point sweeps on the pseudo-data W(y − z) + z. Each
  // sweep transforms the pseudo-data once, scores every grid value against
  // the observed samples and continues from the best-scoring fit.
  std::vector<SpectralFilter> filters;
  filters.reserve(result.grid.size());
  for (double s : result.grid) filters.push_back(gamma_tensor(y.shape(), s));

  GridTensor current = zero_filled(y, weights);
  GridTensor pseudo(y.shape());
  for (int sweep = 0; sweep < kGcvSweeps; ++sweep) {
    blend_pseudo_data(y, weights, current, pseudo);
    const GridTensor spectrum = dct_nd(pseudo);
    result.scores.clear();
    double best = std::numeric_limits<double>::infinity();
    GridTensor best_fit;
    for (std::size_t j = 0; j < filters.size(); ++j) {
      GridTensor fit = apply_filter(filters[j], spectrum);
      idct_nd_inplace(fit);
      const double score = gcv_score(y, fit, weights, filters[j]);
      result.scores.push_back(score);
      if (score <= best) {
        best = score;
        result.s = result.grid[j];
        best_fit = std::move(fit);
      }
    }
    if (!std::isfinite(best)) throw std::runtime_error("GCV score is undefined over the whole grid");
    const double change = relative_change(best_fit, current);
    current = std::move(best_fit);
    if (change < kGcvSweepTol) break;
  }
  return result;
}

GcvResult gcv_select_s(const GridTensor& y, const Mask& mask, const GcvGrid& grid) {
  require_usable_mask(mask, y.shape());
  return gcv_select_s(y, mask.to_weights(), grid);
}

RobustResult robust_l2_spline_gcv(const GridTensor& y, const Mask& mask, const GcvGrid& grid,
                                  int irls_rounds) {
  return run_irls(y, mask, irls_rounds, 4.685, 1e-6, 1000,
                  [&](const GridTensor& weights) { return gcv_select_s(y, weights, grid).s; });
}

}  // namespace l1spline
