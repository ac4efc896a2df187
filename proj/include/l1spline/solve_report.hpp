#pragma once

#include <string_view>
#include <vector>

namespace l1spline {

enum class StopReason { tolerance, iteration_cap };

std::string_view to_string(StopReason reason);

/// Convergence record of an iterative solve. `trace[k]` is the relative
/// change produced by iteration k+1.
struct SolveReport {
  int iterations = 0;
  bool converged = false;
  StopReason stop_reason = StopReason::iteration_cap;
  std::vector<double> trace;
};

}  // namespace l1spline
