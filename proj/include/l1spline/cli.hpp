#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string_view>

#include "l1spline/grid_tensor.hpp"
#include "l1spline/l2_solver.hpp"
#include "l1spline/synthetic.hpp"

namespace l1spline::cli {

enum class Method { l1, l2, robust_l2 };

Method parse_method(std::string_view name);
std::string_view to_string(Method method);

/// Exit statuses of a smoothing job.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitIterationCap = 2;

struct JobConfig {
  Method method = Method::l1;
  std::filesystem::path input;
  std::filesystem::path output;
  std::optional<std::filesystem::path> mask;
  std::optional<std::filesystem::path> trace;
  /// Reshapes csv input into an m-D grid.
  std::optional<Shape> shape;

  /// Exactly one of `s` and `gcv` must be set. With `gcv`, s is chosen by
  /// GCV on the robust L2 problem and reused for the requested method.
  std::optional<double> s;
  bool gcv = false;
  GcvGrid gcv_grid;

  /// Defaults to min(s, 1).
  std::optional<double> lambda;
  double eps = 1e-3;
  int max_outer = 100;
  int inner_iters = 1;
  int irls_rounds = 3;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

/// Runs one job. Diagnostics go to `err`, a one-line summary to `out`.
/// Returns kExitConverged, kExitIterationCap (result still written) or kExitError.
int run(const JobConfig& config, std::ostream& out, std::ostream& err);

struct GenerateConfig {
  SyntheticSpec spec;
  std::filesystem::path output;
  std::optional<std::filesystem::path> truth_output;
};

/// Writes the corrupted observation (csv for 1-D, grid text otherwise) and
/// optionally the clean ground truth.
int run_generate(const GenerateConfig& config, std::ostream& out, std::ostream& err);

/// Command-line entry point: `smooth` and `generate` subcommands.
int run_command_line(int argc, char** argv);

}  // namespace l1spline::cli
