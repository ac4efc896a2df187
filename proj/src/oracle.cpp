#include "l1spline/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace l1spline::oracle {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const {
  if (cols_ != other.rows_) throw std::invalid_argument("matrix dimension mismatch");
  DenseMatrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(r, k);
      if (a == 0.0) continue;
      for (std::size_t c = 0; c < other.cols_; ++c) out(r, c) += a * other(k, c);
    }
  return out;
}

std::vector<double> DenseMatrix::operator*(std::span<const double> v) const {
  if (v.size() != cols_) throw std::invalid_argument("matrix/vector dimension mismatch");
  std::vector<double> out(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) sum += (*this)(r, c) * v[c];
    out[r] = sum;
  }
  return out;
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw std::invalid_argument("matrix dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double factor) {
  for (double& v : data_) v *= factor;
  return *this;
}

DenseMatrix dense_D(std::size_t n) {
  if (n < 2) throw std::invalid_argument("dense_D needs n >= 2");
  DenseMatrix d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d(i, i) = (i == 0 || i == n - 1) ? -1.0 : -2.0;
    if (i > 0) d(i, i - 1) = 1.0;
    if (i + 1 < n) d(i, i + 1) = 1.0;
  }
  return d;
}

namespace {

constexpr std::size_t kDenseLimit = 4096;

std::vector<std::size_t> strides_of(const Shape& shape) {
  std::vector<std::size_t> strides(shape.size(), 1);
  for (std::size_t j = shape.size(); j-- > 1;) strides[j - 1] = strides[j] * shape[j];
  return strides;
}

std::size_t count_of(const Shape& shape) {
  std::size_t n = 1;
  for (auto e : shape) n *= e;
  return n;
}

// Visit every nonzero (row, col, value) of the Kronecker-sum operator.
void for_each_stencil_entry(const Shape& shape, const std::function<void(std::size_t, std::size_t, double)>& f) {
  const auto strides = strides_of(shape);
  const std::size_t n = count_of(shape);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < shape.size(); ++j) {
      const std::size_t len = shape[j];
      if (len < 2) continue;
      const std::size_t a = (i / strides[j]) % len;
      const bool border = (a == 0 || a == len - 1);
      f(i, i, border ? -1.0 : -2.0);
      if (a > 0) f(i, i - strides[j], 1.0);
      if (a + 1 < len) f(i, i + strides[j], 1.0);
    }
  }
}

void require_dense_feasible(std::size_t n) {
  if (n > kDenseLimit) throw std::invalid_argument("problem too large for the dense oracle");
}

}  // namespace

DenseMatrix kronecker_sum_D(const Shape& shape) {
  const std::size_t n = count_of(shape);
  require_dense_feasible(n);
  DenseMatrix l(n, n);
  for_each_stencil_entry(shape, [&](std::size_t r, std::size_t c, double v) { l(r, c) += v; });
  return l;
}

std::vector<double> cholesky_solve(DenseMatrix a, std::span<const double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("cholesky_solve dimension mismatch");
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= a(j, k) * a(j, k);
    if (!(diag > 0.0)) throw std::runtime_error("matrix is not positive definite");
    const double ljj = std::sqrt(diag);
    a(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= a(i, k) * a(j, k);
      a(i, j) = v / ljj;
    }
  }
  std::vector<double> x(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) x[i] -= a(i, k) * x[k];
    x[i] /= a(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) x[i] -= a(k, i) * x[k];
    x[i] /= a(i, i);
  }
  return x;
}

std::vector<double> symmetric_eigenvalues(DenseMatrix a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("eigenvalues of a non-square matrix");
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

namespace {

// W + sLᵀL for the operator L of `shape`.
DenseMatrix normal_matrix(const Shape& shape, std::span<const double> w, double s) {
  const DenseMatrix l = kronecker_sum_D(shape);
  DenseMatrix a = l.transpose() * l;
  a *= s;
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += w[i];
  return a;
}

}  // namespace

std::vector<double> dense_l2_solve(std::span<const double> y, double s) {
  const std::vector<double> ones(y.size(), 1.0);
  return dense_weighted_solve(y, ones, s);
}

std::vector<double> dense_weighted_solve(std::span<const double> y, std::span<const double> w, double s) {
  if (w.size() != y.size()) throw std::invalid_argument("weight length mismatch");
  if (s < 0.0) throw std::invalid_argument("negative s");
  if (y.size() == 1) return {y[0]};
  const Shape shape{y.size()};
  std::vector<double> rhs(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) rhs[i] = w[i] * y[i];
  return cholesky_solve(normal_matrix(shape, w, s), rhs);
}

GridTensor dense_l2_solve_nd(const GridTensor& y, double s) {
  return dense_weighted_solve_nd(y, GridTensor(y.shape(), 1.0), s);
}

GridTensor dense_weighted_solve_nd(const GridTensor& y, const GridTensor& w, double s) {
  if (!y.same_shape(w)) throw std::invalid_argument("weight shape mismatch");
  if (s < 0.0) throw std::invalid_argument("negative s");
  std::vector<double> rhs(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) rhs[i] = w[i] * y[i];
  auto x = cholesky_solve(normal_matrix(y.shape(), w.values(), s), rhs);
  return GridTensor(y.shape(), std::move(x));
}

std::vector<double> naive_dct(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      sum += v[j] * std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * static_cast<double>(j) + 1.0) /
                             (2.0 * static_cast<double>(n)));
    }
    out[k] = sum * std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
  }
  return out;
}

std::vector<double> naive_idct(std::span<const double> v) {
  const std::size_t n = v.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
      sum += scale * v[k] *
             std::cos(std::numbers::pi * static_cast<double>(k) * (2.0 * static_cast<double>(j) + 1.0) /
                      (2.0 * static_cast<double>(n)));
    }
    out[j] = sum;
  }
  return out;
}

GridTensor apply_D(const GridTensor& z) {
  GridTensor out(z.shape(), 0.0);
  for_each_stencil_entry(z.shape(), [&](std::size_t r, std::size_t c, double v) { out[r] += v * z[c]; });
  return out;
}

double l1_objective(const GridTensor& y, const GridTensor& z, double s) {
  if (!y.same_shape(z)) throw std::invalid_argument("shape mismatch");
  double fit = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) fit += std::abs(z[i] - y[i]);
  const GridTensor dz = apply_D(z);
  double smooth = 0.0;
  for (double v : dz.values()) smooth += v * v;
  return fit + s * smooth;
}

namespace {

// 2s·DᵀDz; D is symmetric.
GridTensor smooth_gradient(const GridTensor& z, double s) {
  GridTensor g = apply_D(apply_D(z));
  g *= 2.0 * s;
  return g;
}

}  // namespace

double l1_optimality_residual(const GridTensor& y, const GridTensor& z, double s) {
  if (!y.same_shape(z)) throw std::invalid_argument("shape mismatch");
  require_dense_feasible(y.size());
  const GridTensor g = smooth_gradient(z, s);
  double worst = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double diff = z[i] - y[i];
    double r;
    if (std::abs(diff) > 1e-9) {
      r = std::abs(g[i] + (diff > 0.0 ? 1.0 : -1.0));
    } else {
      r = std::max(std::abs(g[i]) - 1.0, 0.0);
    }
    worst = std::max(worst, r);
  }
  return worst;
}

ProxResult prox_gradient_reference(const GridTensor& y, double s, double step, int iters) {
  if (!(s > 0.0)) throw std::invalid_argument("s must be positive");
  if (!(step > 0.0) || !(step < 1.0 / (16.0 * s))) throw std::invalid_argument("step must lie in (0, 1/(16s))");
  if (iters < 1) throw std::invalid_argument("iters must be positive");

  auto prox = [&](const GridTensor& v) {
    GridTensor out = v;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double r = v[i] - y[i];
      const double mag = std::abs(r) - step;
      out[i] = y[i] + (mag > 0.0 ? (r > 0.0 ? mag : -mag) : 0.0);
    }
    return out;
  };

  ProxResult result{y, 0, false, {}};
  GridTensor x = y;
  GridTensor extrapolated = y;
  double fx = l1_objective(y, x, s);
  double t = 1.0;
  const double blowup = 1e6 * (norm2(y) + 1.0);
  for (int k = 1; k <= iters; ++k) {
    GridTensor g = smooth_gradient(extrapolated, s);
    GridTensor candidate = extrapolated;
    for (std::size_t i = 0; i < candidate.size(); ++i) candidate[i] -= step * g[i];
    candidate = prox(candidate);
    const double fc = l1_objective(y, candidate, s);
    if (!std::isfinite(fc) || norm2(candidate) > blowup) {
      result.diverged = true;
      break;
    }
    const GridTensor previous = x;
    if (fc <= fx) {
      x = candidate;
      fx = fc;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    extrapolated = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      extrapolated[i] += (t / t_next) * (candidate[i] - x[i]) + ((t - 1.0) / t_next) * (x[i] - previous[i]);
    }
    t = t_next;
    result.objective.push_back(fx);
    result.iterations = k;
  }
  result.z = std::move(x);
  return result;
}

}  // namespace l1spline::oracle
