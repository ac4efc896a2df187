#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "l1spline/l2_solver.hpp"
#include "l1spline/oracle.hpp"
#include "l1spline/spectral.hpp"
#include "l1spline/synthetic.hpp"

using namespace l1spline;
using namespace l1spline::oracle;

namespace {

GridTensor uniform(const Shape& shape, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridTensor t(shape);
  for (auto& x : t.values()) x = u(rng);
  return t;
}

}  // namespace

TEST_CASE("second-difference matrix") {
  const DenseMatrix d2 = dense_D(2);
  CHECK(d2(0, 0) == -1.0);
  CHECK(d2(0, 1) == 1.0);
  CHECK(d2(1, 0) == 1.0);
  CHECK(d2(1, 1) == -1.0);

  const DenseMatrix d = dense_D(9);
  const std::vector<double> ones(9, 1.0);
  for (double v : d * std::span<const double>(ones)) CHECK(v == 0.0);
  CHECK(d(4, 4) == -2.0);
  CHECK(d(4, 5) == 1.0);
  CHECK(d(4, 6) == 0.0);
  CHECK_THROWS_AS(dense_D(1), std::invalid_argument);

  const auto eig = symmetric_eigenvalues(dense_D(4));
  const double expected[] = {0.0, -2.0 + std::sqrt(2.0), -2.0, -2.0 - std::sqrt(2.0)};
  for (int k = 0; k < 4; ++k) CHECK(eig[k] == doctest::Approx(expected[k]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("Kronecker-sum operator matches the stencil") {
  const GridTensor t = uniform({3, 4}, 2);
  const DenseMatrix k = kronecker_sum_D({3, 4});
  const auto dense = k * t.values();
  const GridTensor stencil = apply_D(t);
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(stencil[i] == doctest::Approx(dense[i]).epsilon(1e-14).scale(1.0));

  const DenseMatrix flat = kronecker_sum_D({1, 5});
  const DenseMatrix d5 = dense_D(5);
  for (std::size_t r = 0; r < 5; ++r) {
    for (std::size_t c = 0; c < 5; ++c) CHECK(flat(r, c) == d5(r, c));
  }
}

TEST_CASE("dense L2 solves") {
  const GridTensor y = uniform({16}, 3);
  const auto same = dense_l2_solve(y.values(), 0.0);
  for (std::size_t i = 0; i < 16; ++i) CHECK(same[i] == doctest::Approx(y[i]).epsilon(1e-14));

  const double s = 2.5;
  const auto z = dense_l2_solve(y.values(), s);
  const DenseMatrix d = dense_D(16);
  DenseMatrix a = d.transpose() * d;
  a *= s;
  a += DenseMatrix::identity(16);
  const auto back = a * std::span<const double>(z);
  double res = 0.0;
  for (std::size_t i = 0; i < 16; ++i) res += (back[i] - y[i]) * (back[i] - y[i]);
  CHECK(std::sqrt(res) < 1e-10);

  const GridTensor fast = l2_spline(y, s);
  for (std::size_t i = 0; i < 16; ++i) CHECK(fast[i] == doctest::Approx(z[i]).epsilon(1e-9).scale(1.0));

  const std::vector<double> w(16, 1.0);
  const auto weighted = dense_weighted_solve(y.values(), w, s);
  for (std::size_t i = 0; i < 16; ++i) CHECK(weighted[i] == doctest::Approx(z[i]).epsilon(1e-12).scale(1.0));

  CHECK_THROWS_AS(dense_weighted_solve(y.values(), std::vector<double>(3, 1.0), s), std::invalid_argument);
  CHECK_THROWS_AS(cholesky_solve(DenseMatrix(2, 2, 0.0), std::vector<double>{1.0, 1.0}), std::runtime_error);
}

TEST_CASE("naive DCT pair") {
  const std::vector<double> v{0.3, -1.2, 2.0, 0.7, 0.0};
  const auto back = naive_idct(naive_dct(v));
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(back[i] == doctest::Approx(v[i]).epsilon(1e-13).scale(1.0));
  const auto c = naive_dct(std::vector<double>(4, 1.0));
  CHECK(c[0] == doctest::Approx(2.0));
  for (std::size_t k = 1; k < 4; ++k) CHECK(std::abs(c[k]) < 1e-14);
}

TEST_CASE("optimality residual") {
  // Small s keeps |2s·DᵀDy| below 1 everywhere: y itself is optimal.
  const GridTensor y = uniform({32}, 4);
  CHECK(l1_optimality_residual(y, y, 0.01) == 0.0);

  GridTensor far = y;
  for (std::size_t i = 0; i < far.size(); ++i) far[i] += (i % 2 == 0 ? 10.0 : -10.0);
  CHECK(l1_optimality_residual(y, far, 1.0) > 10.0);

  const SyntheticData d = generate_synthetic(outlier_protocol_1d(SyntheticKind::smooth_1d, 64, 2));
  const ProxResult ref = prox_gradient_reference(d.observed, 1.0, 1.0 / 32.0, 200000);
  CHECK(l1_optimality_residual(d.observed, ref.z, 1.0) < 1e-4);
}

TEST_CASE("proximal-gradient reference") {
  const GridTensor c({10}, 0.75);
  const ProxResult flat = prox_gradient_reference(c, 2.0, 1.0 / 64.0, 50);
  for (double v : flat.z.values()) CHECK(v == doctest::Approx(0.75).epsilon(1e-14));

  const SyntheticData d = generate_synthetic(outlier_protocol_1d(SyntheticKind::step_1d, 64, 9));
  const ProxResult r = prox_gradient_reference(d.observed, 3.0, 1.0 / 96.0, 5000);
  CHECK_FALSE(r.diverged);
  REQUIRE(r.objective.size() == 5000);
  for (std::size_t k = 1; k < r.objective.size(); ++k) CHECK(r.objective[k] <= r.objective[k - 1]);
  CHECK(r.objective.back() == doctest::Approx(l1_objective(d.observed, r.z, 3.0)));

  CHECK_THROWS_AS(prox_gradient_reference(c, 1.0, 0.1, 10), std::invalid_argument);
  CHECK_THROWS_AS(prox_gradient_reference(c, 0.0, 0.01, 10), std::invalid_argument);
}

TEST_CASE("objective") {
  const GridTensor y = GridTensor::from_vector({0, 1, 0});
  const GridTensor z({3}, 0.0);
  CHECK(l1_objective(y, z, 5.0) == 1.0);
  // D·y = (1, −2, 1); ‖Dy‖² = 6.
  CHECK(l1_objective(y, y, 0.5) == doctest::Approx(3.0));
}
