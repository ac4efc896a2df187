#include "l1spline/cli.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l1spline/grid_io.hpp"
#include "l1spline/l1_solver.hpp"

namespace l1spline::cli {

Method parse_method(std::string_view name) {
  if (name == "l1") return Method::l1;
  if (name == "l2") return Method::l2;
  if (name == "robust-l2") return Method::robust_l2;
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected l1, l2 or robust-l2)");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::l1:
      return "l1";
    case Method::l2:
      return "l2";
    case Method::robust_l2:
      return "bisquare-IRLS robust-l2";
  }
  return "unknown";
}

void JobConfig::validate() const {
  if (input.empty()) throw std::invalid_argument("an input path is required");
  if (output.empty()) throw std::invalid_argument("an output path is required");
  if (s.has_value() == gcv) throw std::invalid_argument("give exactly one of --s and --gcv");
  if (s) {
    if (!(*s >= 0.0) || !std::isfinite(*s)) throw std::invalid_argument("s must be finite and nonnegative");
    if (method == Method::l1 && !(*s > 0.0)) throw std::invalid_argument("the l1 method needs s > 0");
  }
  if (gcv) gcv_grid.values();
  if (lambda && !(*lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (max_outer < 1) throw std::invalid_argument("max-outer must be at least 1");
  if (inner_iters < 1) throw std::invalid_argument("inner-iters must be at least 1");
  if (irls_rounds < 1) throw std::invalid_argument("irls-rounds must be at least 1");
  if (shape) element_count(*shape);
  if (output == input || (mask && output == *mask)) throw std::invalid_argument("output would overwrite an input file");
}

namespace {

struct Outcome {
  GridTensor fit;
  std::vector<double> trace;
  bool hit_cap = false;
  double s = 0.0;
  std::string detail;
};

std::string format_trace(const std::vector<double>& trace) {
  std::string text;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    text += std::to_string(k + 1) + ',' + io::format_value(trace[k]) + '\n';
  }
  return text;
}

Outcome solve(const JobConfig& config, const Observation& obs) {
  Outcome outcome;
  const bool complete = obs.mask.all_observed();

  std::optional<RobustResult> robust;
  if (config.gcv) {
    robust = robust_l2_spline_gcv(obs.values, obs.mask, config.gcv_grid, config.irls_rounds);
    outcome.s = robust->s;
  } else {
    outcome.s = *config.s;
  }

  switch (config.method) {
    case Method::l2: {
      if (complete) {
        outcome.fit = l2_spline(obs.values, outcome.s);
      } else {
        WeightedSolveParams p;
        p.s = outcome.s;
        WeightedResult r = weighted_l2_spline(obs.values, obs.mask, p);
        outcome.fit = std::move(r.fit);
        outcome.trace = std::move(r.report.trace);
        outcome.hit_cap = !r.report.converged;
      }
      break;
    }
    case Method::robust_l2: {
      if (!robust) {
        RobustParams p;
        p.s = outcome.s;
        p.irls_rounds = config.irls_rounds;
        robust = robust_l2_spline(obs.values, obs.mask, p);
      }
      outcome.fit = robust->fit;
      outcome.trace = robust->round_changes;
      break;
    }
    case Method::l1: {
      if (!(outcome.s > 0.0)) throw std::runtime_error("GCV selected s = 0; the l1 method needs s > 0");
      SolveParams p = SolveParams::defaults_for(outcome.s);
      if (config.lambda) p.lambda = *config.lambda;
      p.eps = config.eps;
      p.max_outer = config.max_outer;
      p.inner_iters = config.inner_iters;
      L1Result r = complete ? l1_spline(obs.values, p) : l1_spline_masked(obs.values, obs.mask, p);
      outcome.fit = std::move(r.fit);
      outcome.trace = std::move(r.report.trace);
      outcome.hit_cap = !r.report.converged;
      std::ostringstream detail;
      detail << " lambda=" << p.lambda << " iterations=" << r.report.iterations << " stop="
             << l1spline::to_string(r.report.stop_reason);
      outcome.detail = detail.str();
      break;
    }
  }
  return outcome;
}

}  // namespace

int run(const JobConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<std::filesystem::path> written;
  try {
    config.validate();
    io::GridFile file = io::read_grid(config.input, config.shape);
    Observation obs = split_missing(std::move(file.values));
    if (config.mask) {
      const Mask extra = io::read_mask(*config.mask, obs.values.shape());
      for (std::size_t i = 0; i < obs.values.size(); ++i) {
        if (!extra.observed(i)) {
          obs.mask.set(i, false);
          obs.values[i] = 0.0;
        }
      }
    }
    require_usable_mask(obs.mask, obs.values.shape());

    const Outcome outcome = solve(config, obs);

    if (config.trace) {
      io::write_text_atomic(*config.trace, format_trace(outcome.trace));
      written.push_back(*config.trace);
    }
    io::write_grid(config.output, outcome.fit, file.format, file.pgm);
    written.push_back(config.output);

    out << to_string(config.method) << ": s=" << outcome.s << outcome.detail
        << (outcome.hit_cap ? " (iteration cap reached)" : "") << '\n';
    return outcome.hit_cap ? kExitIterationCap : kExitConverged;
  } catch (const std::exception& e) {
    for (const auto& path : written) {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int run_generate(const GenerateConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.output.empty()) throw std::invalid_argument("an output path is required");
    const SyntheticData data = generate_synthetic(config.spec);
    const io::Format format = data.observed.rank() == 1 ? io::Format::csv : io::Format::grid;
    io::write_grid(config.output, data.observed, format);
    if (config.truth_output) io::write_grid(*config.truth_output, data.truth, format);
    out << to_string(config.spec.kind) << ": " << data.observed.size() << " samples, "
        << data.corrupted.observed_count() << " outliers\n";
    return kExitConverged;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int run_command_line(int argc, char** argv) {
  CLI::App app{"Robust smoothing and inpainting of grid data with L1 and L2 splines"};
  app.require_subcommand(1);

  JobConfig job;
  std::string method = "l1";
  std::string input, output, mask, trace;
  std::vector<std::size_t> shape;
  double s = 0.0;
  std::vector<double> gcv_range;
  double lambda = 0.0;

  auto* smooth = app.add_subcommand("smooth", "Smooth a grid file");
  smooth->add_option("-m,--method", method, "l1, l2 or robust-l2")->capture_default_str();
  smooth->add_option("-i,--input", input, "Input grid (csv, #shape text, or PGM)")->required();
  smooth->add_option("-o,--output", output, "Output path; written in the input's format")->required();
  smooth->add_option("--mask", mask, "0/1 mask file, same format; 0 marks missing samples");
  smooth->add_option("--shape", shape, "Extents n1 ... nm for csv input");
  auto* s_opt = smooth->add_option("-s,--s", s, "Smoothing parameter");
  auto* gcv_opt = smooth->add_flag("--gcv", job.gcv, "Select s by GCV on the robust L2 problem");
  s_opt->excludes(gcv_opt);
  smooth->add_option("--gcv-range", gcv_range, "log10 bounds of the GCV grid")->expected(2);
  smooth->add_option("--gcv-points", job.gcv_grid.points, "Number of GCV grid points")->capture_default_str();
  auto* lambda_opt = smooth->add_option("--lambda", lambda, "Split-Bregman penalty (default min(s, 1))");
  smooth->add_option("--eps", job.eps, "Relative-change stopping threshold")->capture_default_str();
  smooth->add_option("--max-outer", job.max_outer, "Outer iteration cap")->capture_default_str();
  smooth->add_option("--inner-iters", job.inner_iters, "Inner sweeps per outer iteration")->capture_default_str();
  smooth->add_option("--irls-rounds", job.irls_rounds, "Bisquare IRLS rounds")->capture_default_str();
  smooth->add_option("--trace", trace, "Write iter,rel_change lines here");

  GenerateConfig gen;
  std::string kind;
  std::size_t n = 0;
  std::vector<std::size_t> gen_shape;
  double sigma = 0.0, fraction = 0.0;
  std::vector<double> outlier_range, clip, segment;
  std::uint64_t seed = 0;
  std::string gen_output, truth_output;

  auto* generate = app.add_subcommand("generate", "Write a seeded synthetic test signal");
  generate->add_option("kind", kind, "smooth-1d, step-1d, step-outliers, peaks-2d, ramp, climate-1d")->required();
  auto* n_opt = generate->add_option("--n", n, "Length of a 1-D signal");
  auto* shape_opt = generate->add_option("--shape", gen_shape, "Grid extents");
  n_opt->excludes(shape_opt);
  auto* sigma_opt = generate->add_option("--sigma", sigma, "Gaussian noise standard deviation");
  auto* fraction_opt = generate->add_option("--outlier-fraction", fraction, "Outlier probability inside the segment");
  auto* range_opt = generate->add_option("--outlier-range", outlier_range, "Uniform outlier bounds")->expected(2);
  auto* clip_opt = generate->add_option("--clip", clip, "Clip bounds a b for corrupted samples")->expected(2);
  auto* segment_opt = generate->add_option("--segment", segment, "Outlier segment as axis fractions")->expected(2);
  generate->add_option("--seed", seed, "RNG seed")->capture_default_str();
  generate->add_option("-o,--output", gen_output, "Observation output path")->required();
  generate->add_option("--truth", truth_output, "Ground-truth output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  if (smooth->parsed()) {
    try {
      job.method = parse_method(method);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kExitError;
    }
    job.input = input;
    job.output = output;
    if (!mask.empty()) job.mask = mask;
    if (!trace.empty()) job.trace = trace;
    if (!shape.empty()) job.shape = shape;
    if (s_opt->count() > 0) job.s = s;
    if (gcv_range.size() == 2) {
      job.gcv_grid.log10_lo = gcv_range[0];
      job.gcv_grid.log10_hi = gcv_range[1];
    }
    if (lambda_opt->count() > 0) job.lambda = lambda;
    return run(job, std::cout, std::cerr);
  }

  try {
    const SyntheticKind parsed = parse_synthetic_kind(kind);
    gen.spec = kind == "step-outliers" ? outlier_protocol_1d(parsed, 4096, seed) : SyntheticSpec{};
    gen.spec.kind = parsed;
    gen.spec.seed = seed;
    if (n_opt->count() > 0) gen.spec.shape = {n};
    if (shape_opt->count() > 0) gen.spec.shape = gen_shape;
    if (sigma_opt->count() > 0) gen.spec.noise_sigma = sigma;
    if (fraction_opt->count() > 0) gen.spec.outlier_fraction = fraction;
    if (range_opt->count() > 0) {
      gen.spec.outlier_lo = outlier_range[0];
      gen.spec.outlier_hi = outlier_range[1];
    }
    if (clip_opt->count() > 0) {
      gen.spec.clip_lo = clip[0];
      gen.spec.clip_hi = clip[1];
    }
    if (segment_opt->count() > 0) {
      gen.spec.segment_begin = segment[0];
      gen.spec.segment_end = segment[1];
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  gen.output = gen_output;
  if (!truth_output.empty()) gen.truth_output = truth_output;
  return run_generate(gen, std::cout, std::cerr);
}

}  // namespace l1spline::cli
