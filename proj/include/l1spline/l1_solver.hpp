#pragma once

#include <functional>

#include "l1spline/grid_tensor.hpp"
#include "l1spline/solve_report.hpp"

namespace l1spline {

/// Parameters of the split-Bregman L1 spline.
struct SolveParams {
  /// Smoothness weight on ‖Dz‖².
  double s = 1.0;
  /// Splitting penalty on ‖d − z + y − b‖².
  double lambda = 1.0;
  /// Stop once ‖z^{k+1} − z^k‖ / ‖z^k‖ drops below eps.
  double eps = 1e-3;
  int max_outer = 100;
  /// (z, d) sweeps per Bregman update.
  int inner_iters = 1;

  /// Defaults used throughout: lambda = min(s, 1), eps = 1e-3, 100 outer
  /// iterations, one inner sweep.
  static SolveParams defaults_for(double s);

  void validate() const;
};

/// Inner weighted solve used by the masked z-update.
struct MaskedInnerParams {
  double tol = 1e-6;
  int max_iter = 50;
};

/// Called after every outer iteration with its 1-based index and the new z.
using IterationObserver = std::function<void(int, const GridTensor&)>;

struct L1Result {
  GridTensor fit;
  /// Split variable d at exit; approximates fit − y and is zero wherever
  /// a sample is treated as an inlier.
  GridTensor outliers;
  SolveReport report;
};

/// Soft threshold sign(x)·max(|x| − gamma, 0); shrink(0, gamma) = 0.
double shrink(double x, double gamma);
GridTensor shrink(const GridTensor& v, double gamma);

/// Minimizes ‖z − y‖₁ + s‖Dz‖² by split-Bregman iteration: each outer step
/// is one spectral L2 solve with s̃ = 2s/λ, one shrinkage and one Bregman
/// update.
L1Result l1_spline(const GridTensor& y, const SolveParams& params, const IterationObserver& observer = {});

/// Masked variant: the fit term only counts observed samples, d and b are
/// only updated there, and the z-update is a warm-started weighted solve.
L1Result l1_spline_masked(const GridTensor& y, const Mask& mask, const SolveParams& params,
                          const MaskedInnerParams& inner = {}, const IterationObserver& observer = {});

}  // namespace l1spline
