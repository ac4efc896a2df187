#pragma once

#include <optional>
#include <vector>

#include "l1spline/grid_tensor.hpp"
#include "l1spline/solve_report.hpp"
#include "l1spline/spectral.hpp"

namespace l1spline {

/// Minimizer of ‖z − y‖² + s‖Dz‖²: one DCT round trip with gains 1/(1 + sΛ²).
GridTensor l2_spline(const GridTensor& y, double s);

/// Same, with a prebuilt filter whose shape matches y.
GridTensor smooth(const SpectralFilter& filter, const GridTensor& y);

struct WeightedSolveParams {
  double s = 1.0;
  double tol = 1e-6;
  int max_iter = 1000;
  /// Starting iterate. When absent the iteration starts from the data with
  /// unobserved entries at zero.
  std::optional<GridTensor> initial_guess;
};

struct WeightedResult {
  GridTensor fit;
  SolveReport report;
};

/// Minimizer of ‖W^{1/2}(z − y)‖² + s‖Dz‖² by the fixed-point iteration
/// ŷ ← DCT⁻¹(Γ DCT(W(y − ŷ) + ŷ)). Weights lie in [0, 1]; zero weights are
/// inpainted by the smoothness prior.
WeightedResult weighted_l2_spline(const GridTensor& y, const Mask& mask, const WeightedSolveParams& params);
WeightedResult weighted_l2_spline(const GridTensor& y, const GridTensor& weights,
                                  const WeightedSolveParams& params);

/// The fixed-point loop itself, for callers that reuse one filter across solves.
WeightedResult weighted_l2_iterate(const SpectralFilter& filter, const GridTensor& y,
                                   const GridTensor& weights, const GridTensor& start, double tol,
                                   int max_iter);

/// Bisquare IRLS baseline ("bisquare-IRLS" robust L2 spline).
struct RobustParams {
  double s = 1.0;
  int irls_rounds = 3;
  double tuning = 4.685;
  double inner_tol = 1e-6;
  int inner_max_iter = 1000;
};

struct RobustResult {
  GridTensor fit;
  /// Robust weights after the last round (zero at unobserved samples).
  GridTensor weights;
  /// Smoothing parameter of the final solve.
  double s = 0.0;
  /// Relative change of the fit between consecutive rounds.
  std::vector<double> round_changes;
};

/// Bisquare weights (1 − u²)² for |u| < 1, else 0, with
/// u = r / (tuning · 1.4826 · MAD) computed over observed residuals.
GridTensor bisquare_weights(const GridTensor& residuals, const Mask& mask, double tuning = 4.685);

RobustResult robust_l2_spline(const GridTensor& y, const Mask& mask, const RobustParams& params);
RobustResult robust_l2_spline(const GridTensor& y, const RobustParams& params);

/// Log-spaced search grid for s: `points` values of 10^t, t ∈ [log10_lo, log10_hi].
struct GcvGrid {
  double log10_lo = -6.0;
  double log10_hi = 6.0;
  int points = 61;

  std::vector<double> values() const;
};

/// GCV(s) = (RSS / n_obs) / (1 − tr(H)/n)², RSS over observed samples
/// weighted by `weights`, tr(H) the sum of the spectral gains. With every
/// sample observed this is n·RSS / (n − tr(H))².
double gcv_score(const GridTensor& y, const GridTensor& fit, const GridTensor& weights,
                 const SpectralFilter& filter);

struct GcvResult {
  double s = 0.0;
  std::vector<double> grid;
  std::vector<double> scores;
};

/// Grid search minimizing GCV; ties go to the larger s.
GcvResult gcv_select_s(const GridTensor& y, const Mask& mask, const GcvGrid& grid = {});
GcvResult gcv_select_s(const GridTensor& y, const GridTensor& weights, const GcvGrid& grid = {});

/// Robust protocol: every IRLS round re-selects s by GCV under the current
/// weights, then refits. The chosen s is reported in the result.
RobustResult robust_l2_spline_gcv(const GridTensor& y, const Mask& mask, const GcvGrid& grid = {},
                                  int irls_rounds = 3);

}  // namespace l1spline
