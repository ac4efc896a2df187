// Acceptance suite: one PASS/FAIL line per criterion, detail lines indented
// below it. Exit status is the number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "l1spline/l1_solver.hpp"
#include "l1spline/l2_solver.hpp"
#include "l1spline/oracle.hpp"
#include "l1spline/spectral.hpp"
#include "l1spline/synthetic.hpp"
#include "l1spline/transform.hpp"

using namespace l1spline;
using Clock = std::chrono::steady_clock;

namespace {

namespace tol {
constexpr double kDense1d = 1e-9;
constexpr double kDenseNd = 1e-8;
constexpr double kDenseSeconds = 5.0;
constexpr double kEigen = 1e-10;
constexpr int kMaxIterations = 20;  // strict upper bound
constexpr double kConvergenceEps = 1e-3;
constexpr double kConvergenceSeconds = 2.0;
constexpr double kResidualDefault = 1e-2;
constexpr double kResidualTight = 1e-4;
constexpr double kTightEps = 1e-8;
constexpr double kAgreement = 1e-3;
constexpr double kL2Factor = 0.5;
constexpr double kLambdaSpread = 0.05;
constexpr double kInpaint = 1e-3;
constexpr double kScaling = 2.5;
constexpr double kRoundTrip = 1e-12;
constexpr double kNaive = 1e-11;
constexpr double kOrtho = 1e-12;
constexpr double kLinear = 1e-12;
constexpr double kSeparable = 1e-12;
}  // namespace tol

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok    " : "FAIL  ") + what);
  }
  void note(const std::string& what) { details.push_back("info  " + what); }
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> uniform_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

double rel_l2(std::span<const double> a, std::span<const double> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

double max_abs(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double rmse(const GridTensor& a, const GridTensor& b) {
  return distance2(a, b) / std::sqrt(static_cast<double>(a.size()));
}

double robust_s(const GridTensor& y) { return robust_l2_spline_gcv(y, Mask(y.shape(), true)).s; }

// 1. Spectral solve against dense linear algebra.
Outcome dense_equivalence() {
  Outcome out;
  const auto start = Clock::now();
  double worst1 = 0.0;
  for (std::size_t n : {4u, 16u, 64u, 163u, 256u}) {
    for (double s : {0.1, 1.0, 100.0}) {
      const auto v = uniform_vector(n, 100 + n);
      const GridTensor y = GridTensor::from_vector(v);
      const double e = rel_l2(l2_spline(y, s).values(), oracle::dense_l2_solve(v, s));
      worst1 = std::max(worst1, e);
      if (e > tol::kDense1d) out.check(false, fmt("1-D n=%zu s=%g rel %.3e", n, s, e));
    }
  }
  out.check(worst1 <= tol::kDense1d, fmt("1-D worst relative error %.3e (limit %.0e)", worst1, tol::kDense1d));

  double worst2 = 0.0;
  for (const Shape& shape : {Shape{2, 2}, Shape{3, 5}, Shape{4, 4}, Shape{5, 8}, Shape{8, 8}, Shape{2, 3, 4}}) {
    for (double s : {0.1, 1.0, 100.0}) {
      const GridTensor y(shape, uniform_vector(element_count(shape), 7 + element_count(shape)));
      const double e = rel_l2(l2_spline(y, s).values(), oracle::dense_l2_solve_nd(y, s).values());
      worst2 = std::max(worst2, e);
    }
  }
  out.check(worst2 <= tol::kDenseNd, fmt("m-D worst relative error %.3e (limit %.0e)", worst2, tol::kDenseNd));
  const double t = seconds_since(start);
  out.check(t < tol::kDenseSeconds, fmt("runtime %.2f s (limit %.0f s)", t, tol::kDenseSeconds));
  return out;
}

// 2. Closed-form eigenvalues against a Jacobi eigensolver.
Outcome eigenvalue_formula() {
  Outcome out;
  double worst = 0.0;
  std::size_t worst_n = 0;
  for (std::size_t n = 2; n <= 64; ++n) {
    const auto closed = eigenvalues_1d(n);
    const auto dense = oracle::symmetric_eigenvalues(oracle::dense_D(n));
    const double e = max_abs(closed, dense);
    if (e > worst) {
      worst = e;
      worst_n = n;
    }
  }
  out.check(eigenvalues_1d(1) == std::vector<double>{0.0}, "n=1 gives {0}");
  out.check(worst <= tol::kEigen, fmt("n=2..64 worst abs error %.3e at n=%zu (limit %.0e)", worst, worst_n, tol::kEigen));
  return out;
}

// 3. Outer iterations to reach the stopping threshold on the smooth outlier protocol.
Outcome convergence_speed() {
  Outcome out;
  const auto start = Clock::now();
  const SyntheticData d = generate_synthetic(outlier_protocol_1d(SyntheticKind::smooth_1d, 4096, 7));
  const double s = robust_s(d.observed);
  const L1Result r = l1_spline(d.observed, SolveParams::defaults_for(s));
  const double t = seconds_since(start);
  out.note(fmt("n=4096 seed=7 s=%.4g lambda=%g eps=%g", s, std::min(s, 1.0), tol::kConvergenceEps));
  out.check(r.report.converged && r.report.trace.back() < tol::kConvergenceEps,
            fmt("final relative change %.3e", r.report.trace.back()));
  out.check(r.report.iterations < tol::kMaxIterations,
            fmt("%d outer iterations (limit < %d)", r.report.iterations, tol::kMaxIterations));
  out.check(t < tol::kConvergenceSeconds, fmt("runtime %.2f s including s selection (limit %.0f s)", t, tol::kConvergenceSeconds));
  return out;
}

// 4. First-order optimality and agreement with the reference solver.
Outcome optimality() {
  Outcome out;
  const double s = 1.0;
  for (std::size_t n : {64u, 256u}) {
    const SyntheticData d = generate_synthetic(outlier_protocol_1d(SyntheticKind::smooth_1d, n, 1));
    const GridTensor& y = d.observed;

    const L1Result plain = l1_spline(y, SolveParams::defaults_for(s));
    const double r_default = oracle::l1_optimality_residual(y, y + plain.outliers, s);
    out.check(r_default <= tol::kResidualDefault,
              fmt("n=%zu default eps: residual %.3e after %d iterations (limit %.0e)", n, r_default,
                  plain.report.iterations, tol::kResidualDefault));

    SolveParams tight = SolveParams::defaults_for(s);
    tight.eps = tol::kTightEps;
    tight.max_outer = 100000;
    const L1Result precise = l1_spline(y, tight);
    const double r_tight = oracle::l1_optimality_residual(y, y + precise.outliers, s);
    out.check(r_tight <= tol::kResidualTight, fmt("n=%zu eps=1e-8: residual %.3e after %d iterations (limit %.0e)", n,
                                                   r_tight, precise.report.iterations, tol::kResidualTight));

    const oracle::ProxResult ref = oracle::prox_gradient_reference(y, s, 1.0 / (32.0 * s), 200000);
    const double agree = distance2(precise.fit, ref.z) / norm2(ref.z);
    out.check(!ref.diverged && agree <= tol::kAgreement,
              fmt("n=%zu agreement with proximal gradient %.3e (limit %.0e)", n, agree, tol::kAgreement));
  }
  out.note("residuals are evaluated at y + d, the split variable");
  return out;
}

// 5. Accuracy against plain and bisquare-IRLS robust L2 splines.
Outcome robustness() {
  Outcome out;
  struct Row {
    const char* name;
    double lo;
    double hi;
  };
  for (const Row row : {Row{"a=-5 b=5", -5.0, 5.0}, Row{"a=0 b=5", 0.0, 5.0}}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const SyntheticData d = generate_synthetic(outlier_protocol_1d(SyntheticKind::smooth_1d, 4096, seed, row.lo, row.hi));
      const double s = robust_s(d.observed);
      const double e_l1 = rmse(l1_spline(d.observed, SolveParams::defaults_for(s)).fit, d.truth);
      const double e_l2 = rmse(l2_spline(d.observed, s), d.truth);
      RobustParams rp;
      rp.s = s;
      const double e_rob = rmse(robust_l2_spline(d.observed, rp).fit, d.truth);
      out.check(e_l1 < tol::kL2Factor * e_l2 && e_l1 < e_rob,
                fmt("%s seed %llu s=%.3g: RMSE L1 %.4f, L2 %.4f, robust L2 %.4f", row.name,
                    static_cast<unsigned long long>(seed), s, e_l1, e_l2, e_rob));
    }
  }
  return out;
}

// 6. Sensitivity of the output to lambda at fixed s.
Outcome lambda_insensitivity() {
  Outcome out;
  SyntheticSpec spec{.kind = SyntheticKind::climate_1d, .shape = {163}};
  spec.noise_sigma = 0.1;
  spec.seed = 1;
  const SyntheticData d = generate_synthetic(spec);
  const double s = 200.0;
  const double lambdas[] = {0.1, 1.0, 10.0, 100.0};
  std::vector<GridTensor> fits;
  for (double lambda : lambdas) {
    SolveParams p = SolveParams::defaults_for(s);
    p.lambda = lambda;
    const L1Result r = l1_spline(d.observed, p);
    out.note(fmt("lambda=%g: %d iterations, %s", lambda, r.report.iterations,
                 r.report.converged ? "converged" : "iteration cap"));
    fits.push_back(r.fit);
  }
  for (std::size_t i = 0; i < fits.size(); ++i) {
    for (std::size_t j = i + 1; j < fits.size(); ++j) {
      const double e = std::max(rel_l2(fits[i].values(), fits[j].values()), rel_l2(fits[j].values(), fits[i].values()));
      out.check(e < tol::kLambdaSpread, fmt("lambda %g vs %g: relative difference %.4f (limit %.2f)", lambdas[i], lambdas[j], e,
                                            tol::kLambdaSpread));
    }
  }
  return out;
}

// 7. Inpainting of a linear ramp and full-mask equivalence.
Outcome missing_data() {
  Outcome out;
  for (const Shape& shape : {Shape{64}, Shape{24, 24}}) {
    const SyntheticData d = generate_synthetic({.kind = SyntheticKind::ramp, .shape = shape});
    const std::size_t rows = shape[0];
    const std::size_t per_row = d.truth.size() / rows;
    Mask mask(shape, true);
    GridTensor y = d.truth;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const std::size_t r = i / per_row;
      const std::size_t c = i % per_row;
      const bool hole = r >= rows / 3 && r < rows / 2 && (shape.size() == 1 || (c >= 8 && c < 14));
      if (hole) {
        mask.set(i, false);
        y[i] = 0.0;
      }
    }
    WeightedSolveParams wp;
    wp.s = 1.0;
    wp.tol = 1e-10;
    wp.max_iter = 100000;
    const WeightedResult w = weighted_l2_spline(y, mask, wp);
    const L1Result l1 = l1_spline_masked(y, mask, SolveParams::defaults_for(1.0));
    double e_w = 0.0, e_l1 = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (mask.observed(i)) continue;
      e_w = std::max(e_w, std::abs(w.fit[i] - d.truth[i]));
      e_l1 = std::max(e_l1, std::abs(l1.fit[i] - d.truth[i]));
    }
    const std::size_t missing = y.size() - mask.observed_count();
    out.check(e_w <= tol::kInpaint, fmt("rank %zu, %zu missing: weighted L2 max error %.3e", shape.size(), missing, e_w));
    out.check(e_l1 <= tol::kInpaint, fmt("rank %zu, %zu missing: masked L1 max error %.3e", shape.size(), missing, e_l1));

    SyntheticSpec noisy{.kind = SyntheticKind::ramp, .shape = shape};
    noisy.noise_sigma = 0.05;
    noisy.outlier_fraction = 0.2;
    noisy.seed = 3;
    const GridTensor z = generate_synthetic(noisy).observed;
    std::vector<GridTensor> a, b;
    const SolveParams p = SolveParams::defaults_for(4.0);
    const L1Result ra = l1_spline(z, p, [&](int, const GridTensor& it) { a.push_back(it); });
    const L1Result rb = l1_spline_masked(z, Mask(shape, true), p, {}, [&](int, const GridTensor& it) { b.push_back(it); });
    bool same = a.size() == b.size() && ra.fit == rb.fit && ra.outliers == rb.outliers;
    for (std::size_t k = 0; same && k < a.size(); ++k) same = a[k] == b[k];
    out.check(same, fmt("rank %zu full mask: %zu iterates bitwise identical", shape.size(), a.size()));
  }
  return out;
}

// 8. Wall time of one outer iteration as n doubles.
Outcome complexity_scaling() {
  Outcome out;
  constexpr int kFirst = 14;
  constexpr int kLast = 20;
  constexpr int kRounds = 3;
  constexpr int kIterations = 21;  // the first gap is discarded
  std::vector<std::vector<double>> gaps(kLast - kFirst + 1);
  std::vector<GridTensor> inputs;
  for (int e = kFirst; e <= kLast; ++e) {
    inputs.push_back(generate_synthetic(outlier_protocol_1d(SyntheticKind::smooth_1d, std::size_t{1} << e, 1)).observed);
  }
  SolveParams p = SolveParams::defaults_for(10.0);
  p.eps = 1e-300;
  p.max_outer = kIterations;
  for (int round = 0; round < kRounds; ++round) {
    for (int e = kFirst; e <= kLast; ++e) {
      auto& g = gaps[e - kFirst];
      Clock::time_point last;
      l1_spline(inputs[e - kFirst], p, [&](int k, const GridTensor&) {
        const auto now = Clock::now();
        if (k > 1) g.push_back(std::chrono::duration<double>(now - last).count());
        last = now;
      });
    }
  }
  std::vector<double> median;
  for (auto& g : gaps) {
    std::sort(g.begin(), g.end());
    median.push_back(g[g.size() / 2]);
  }
  for (int e = kFirst; e <= kLast; ++e) out.note(fmt("n=2^%d: median %.3f ms per outer iteration", e, 1e3 * median[e - kFirst]));
  for (std::size_t i = 1; i < median.size(); ++i) {
    const double ratio = median[i] / median[i - 1];
    out.check(ratio <= tol::kScaling, fmt("2^%zu -> 2^%zu: ratio %.2f (limit %.1f)", kFirst + i - 1, kFirst + i, ratio, tol::kScaling));
  }
  return out;
}

// 9. Transform invariants.
Outcome transform_suite() {
  Outcome out;
  const std::size_t sizes[] = {1, 2, 3, 4, 8, 17, 64, 163, 501, 1000};
  double rt = 0.0, naive = 0.0, norm = 0.0, gram = 0.0, linear = 0.0, sep = 0.0;
  for (std::size_t n : sizes) {
    const auto v = uniform_vector(n, 31 * n);
    const auto w = uniform_vector(n, 37 * n + 1);
    rt = std::max({rt, max_abs(idct_1d(dct_1d(v)), v), max_abs(dct_1d(idct_1d(v)), v)});
    naive = std::max({naive, max_abs(dct_1d(v), oracle::naive_dct(v)), max_abs(idct_1d(v), oracle::naive_idct(v))});

    const auto c = dct_1d(v);
    double nv = 0.0, nc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nv += v[i] * v[i];
      nc += c[i] * c[i];
    }
    norm = std::max(norm, std::abs(std::sqrt(nc) - std::sqrt(nv)) / std::sqrt(nv));

    if (n <= 163) {
      std::vector<std::vector<double>> basis;
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<double> e(n, 0.0);
        e[j] = 1.0;
        basis.push_back(dct_1d(e));
      }
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
          double dot = 0.0;
          for (std::size_t k = 0; k < n; ++k) dot += basis[a][k] * basis[b][k];
          gram = std::max(gram, std::abs(dot - (a == b ? 1.0 : 0.0)));
        }
      }
    }

    std::vector<double> combo(n), expected(n);
    const auto cw = dct_1d(w);
    for (std::size_t i = 0; i < n; ++i) {
      combo[i] = 1.5 * v[i] - 2.0 * w[i];
      expected[i] = 1.5 * c[i] - 2.0 * cw[i];
    }
    linear = std::max(linear, max_abs(dct_1d(combo), expected));

    const GridTensor t({n, 7}, uniform_vector(7 * n, 41 * n));
    GridTensor a = t, b = t;
    dct_along_axis(a, 0);
    dct_along_axis(a, 1);
    dct_along_axis(b, 1);
    dct_along_axis(b, 0);
    sep = std::max({sep, max_abs(a.values(), b.values()), max_abs(idct_nd(a).values(), t.values())});
  }
  out.note("sizes 1 2 3 4 8 17 64 163 501 1000");
  out.check(rt <= tol::kRoundTrip, fmt("round trip max error %.3e", rt));
  out.check(naive <= tol::kNaive, fmt("agreement with direct summation %.3e", naive));
  out.check(norm <= tol::kOrtho, fmt("norm preservation %.3e", norm));
  out.check(gram <= tol::kOrtho, fmt("basis Gram matrix deviation %.3e (n <= 163)", gram));
  out.check(linear <= tol::kLinear, fmt("linearity %.3e", linear));
  out.check(sep <= tol::kSeparable, fmt("axis-order independence and m-D round trip %.3e", sep));
  return out;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"spectral/dense equivalence", dense_equivalence},
      {"eigenvalue formula", eigenvalue_formula},
      {"convergence speed", convergence_speed},
      {"optimality", optimality},
      {"robustness", robustness},
      {"lambda insensitivity", lambda_insensitivity},
      {"missing data", missing_data},
      {"complexity scaling", complexity_scaling},
      {"transform suite", transform_suite},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::printf("%s criterion %d: %s\n", o.pass ? "PASS" : "FAIL", index, name);
    for (const auto& line : o.details) std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", index - failed, index);
  return failed;
}
