#include "l1spline/l1_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "l1spline/l2_solver.hpp"
#include "l1spline/spectral.hpp"
#include "l1spline/transform.hpp"

namespace l1spline {

SolveParams SolveParams::defaults_for(double s) {
  SolveParams p;
  p.s = s;
  p.lambda = std::min(s, 1.0);
  return p;
}

void SolveParams::validate() const {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("s must be positive and finite");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive and finite");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");
  if (inner_iters < 1) throw std::invalid_argument("inner_iters must be at least 1");
}

double shrink(double x, double gamma) {
  const double magnitude = std::abs(x) - gamma;
  if (magnitude <= 0.0) return 0.0;
  return x > 0.0 ? magnitude : -magnitude;
}

GridTensor shrink(const GridTensor& v, double gamma) {
  GridTensor out = v;
  for (double& x : out.values()) x = shrink(x, gamma);
  return out;
}

namespace {

void require_finite_input(const GridTensor& y) {
  if (y.empty()) throw std::invalid_argument("empty input tensor");
  if (!y.all_finite()) throw std::invalid_argument("input contains non-finite values");
}

// ỹ = d + y − b
void shifted_data(const GridTensor& d, const GridTensor& y, const GridTensor& b, GridTensor& out) {
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = d[i] + y[i] - b[i];
}

bool record_change(SolveReport& report, int k, double change, double eps) {
  report.trace.push_back(change);
  report.iterations = k;
  if (change <= eps) {
    report.converged = true;
    report.stop_reason = StopReason::tolerance;
    return true;
  }
  report.converged = false;
  report.stop_reason = StopReason::iteration_cap;
  return false;
}

}  // namespace

L1Result l1_spline(const GridTensor& y, const SolveParams& params, const IterationObserver& observer) {
  params.validate();
  require_finite_input(y);

  const SpectralFilter filter = gamma_tensor(y.shape(), 2.0 * params.s / params.lambda);
  const double threshold = 1.0 / params.lambda;
  const std::size_t n = y.size();

  GridTensor d(y.shape(), 0.0);
  GridTensor b(y.shape(), 0.0);
  GridTensor z(y.shape());
  GridTensor previous = y;
  shifted_data(d, y, b, z);
  L1Result result;

  // z enters each iteration holding d + y − b and leaves holding the new
  // iterate; the closing pass updates d and b, accumulates the relative
  // change and overwrites `previous` with the next right-hand side.
  for (int k = 1; k <= params.max_outer; ++k) {
    for (int inner = 1; inner <= params.inner_iters; ++inner) {
      if (inner > 1) shifted_data(d, y, b, z);
      dct_nd_scaled_inplace(z, filter.gains());
      idct_nd_inplace(z);
      if (inner < params.inner_iters) {
        for (std::size_t i = 0; i < n; ++i) d[i] = shrink(z[i] - y[i] + b[i], threshold);
      }
    }
    double diff = 0.0;
    double base = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double residual = z[i] - y[i];
      d[i] = shrink(residual + b[i], threshold);
      b[i] += residual - d[i];
      const double last = previous[i];
      const double delta = z[i] - last;
      diff += delta * delta;
      base += last * last;
      previous[i] = d[i] + y[i] - b[i];
    }
    const double change = base == 0.0 ? norm2(z) : std::sqrt(diff) / std::sqrt(base);
    if (observer) observer(k, z);
    std::swap(previous, z);
    if (record_change(result.report, k, change, params.eps)) break;
  }
  result.fit = std::move(previous);
  result.outliers = std::move(d);
  return result;
}

L1Result l1_spline_masked(const GridTensor& y_in, const Mask& mask, const SolveParams& params,
                          const MaskedInnerParams& inner, const IterationObserver& observer) {
  params.validate();
  require_finite_input(y_in);
  require_usable_mask(mask, y_in.shape());
  if (!(inner.tol > 0.0) || inner.max_iter < 1) throw std::invalid_argument("invalid inner solve parameters");

  const GridTensor weights = mask.to_weights();
  GridTensor y = y_in;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!mask.observed(i)) y[i] = 0.0;
  }

  const SpectralFilter filter = gamma_tensor(y.shape(), 2.0 * params.s / params.lambda);
  const double threshold = 1.0 / params.lambda;
  const std::size_t n = y.size();

  // Starting iterate: the data where observed, the weighted L2 inpainting elsewhere.
  GridTensor previous = y;
  if (!mask.all_observed()) {
    const WeightedResult prefill = weighted_l2_iterate(filter, y, weights, y, 1e-6, 1000);
    for (std::size_t i = 0; i < n; ++i) {
      if (!mask.observed(i)) previous[i] = prefill.fit[i];
    }
  }

  GridTensor d(y.shape(), 0.0);
  GridTensor b(y.shape(), 0.0);
  GridTensor rhs(y.shape());
  GridTensor z = previous;
  L1Result result;

  for (int k = 1; k <= params.max_outer; ++k) {
    for (int sweep = 0; sweep < params.inner_iters; ++sweep) {
      shifted_data(d, y, b, rhs);
      z = weighted_l2_iterate(filter, rhs, weights, z, inner.tol, inner.max_iter).fit;
      for (std::size_t i = 0; i < n; ++i) {
        d[i] = mask.observed(i) ? shrink(z[i] - y[i] + b[i], threshold) : 0.0;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (mask.observed(i)) b[i] += z[i] - y[i] - d[i];
    }

    const double change = relative_change(z, previous);
    if (observer) observer(k, z);
    previous = z;
    if (record_change(result.report, k, change, params.eps)) break;
  }
  result.fit = std::move(previous);
  result.outliers = std::move(d);
  return result;
}

}  // namespace l1spline
