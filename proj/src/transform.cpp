#include "l1spline/transform.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace l1spline {

namespace {

// FFTW planning is not thread-safe; execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// In-place real FFT buffer: n reals in, n/2 + 1 complex values out.
std::vector<std::complex<double>>& line_scratch(std::size_t n) {
  thread_local std::vector<std::complex<double>> buf;
  buf.resize(n / 2 + 1);
  return buf;
}

double* as_real(std::vector<std::complex<double>>& buf) { return reinterpret_cast<double*>(buf.data()); }
fftw_complex* as_fftw(std::vector<std::complex<double>>& buf) { return reinterpret_cast<fftw_complex*>(buf.data()); }

}  // namespace

struct TransformPlan::RealFft {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit RealFft(std::size_t n) {
    if (n > static_cast<std::size_t>(std::numeric_limits<int>::max())) {
      throw std::invalid_argument("DCT length exceeds FFT limits");
    }
    const int len = static_cast<int>(n);
    std::vector<std::complex<double>> buf(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward = fftw_plan_dft_r2c_1d(len, as_real(buf), as_fftw(buf), flags);
    backward = fftw_plan_dft_c2r_1d(len, as_fftw(buf), as_real(buf), flags);
    if (!forward || !backward) {
      release();
      throw std::runtime_error("FFTW failed to plan a transform");
    }
  }
  ~RealFft() {
    std::lock_guard lock(planner_mutex());
    release();
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

 private:
  void release() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    forward = backward = nullptr;
  }
};

TransformPlan::TransformPlan(std::size_t length)
    : n_(length), cos_(length / 2 + 1), sin_(length / 2 + 1) {
  if (length == 0) throw std::invalid_argument("DCT length must be positive");
  if (length > 1) fft_ = std::make_unique<RealFft>(length);
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    const double angle = std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n_));
    cos_[k] = std::cos(angle);
    sin_[k] = std::sin(angle);
  }
}

TransformPlan::~TransformPlan() = default;

void TransformPlan::forward(std::span<double> v) const {
  if (v.size() != n_) throw std::invalid_argument("DCT input length does not match plan");
  forward_strided(v.data(), 1);
}

void TransformPlan::inverse(std::span<double> v) const {
  if (v.size() != n_) throw std::invalid_argument("DCT input length does not match plan");
  inverse_strided(v.data(), 1);
}

void TransformPlan::forward(std::span<double> data, const LineDescriptor& line) const {
  if (line.length != n_) throw std::invalid_argument("line length does not match plan");
  if (line.index(n_ - 1) >= data.size()) throw std::out_of_range("line exceeds buffer");
  forward_strided(data.data() + line.offset, line.stride);
}

void TransformPlan::forward(std::span<double> data, const LineDescriptor& line,
                            std::span<const double> gains) const {
  if (line.length != n_) throw std::invalid_argument("line length does not match plan");
  if (line.index(n_ - 1) >= data.size()) throw std::out_of_range("line exceeds buffer");
  if (gains.size() != data.size()) throw std::invalid_argument("gain buffer does not match data");
  forward_strided(data.data() + line.offset, line.stride, gains.data() + line.offset);
}

void TransformPlan::inverse(std::span<double> data, const LineDescriptor& line) const {
  if (line.length != n_) throw std::invalid_argument("line length does not match plan");
  if (line.index(n_ - 1) >= data.size()) throw std::out_of_range("line exceeds buffer");
  inverse_strided(data.data() + line.offset, line.stride);
}

// Unnormalized C_k = Σ_j x_j cos(πk(2j+1)/2n) equals Re(exp(−iπk/2n) V_k), where
// V is the DFT of v = (x_0, x_2, x_4, …, x_5, x_3, x_1). V_{n−k} = conj(V_k).
void TransformPlan::forward_strided(double* base, std::size_t stride, const double* gains) const {
  const std::size_t n = n_;
  if (n == 1) {
    if (gains) base[0] *= gains[0];
    return;
  }
  auto& buf = line_scratch(n);
  double* real = as_real(buf);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) real[i] = base[2 * i * stride];
  for (std::size_t i = 0; i < n / 2; ++i) real[n - 1 - i] = base[(2 * i + 1) * stride];
  fftw_execute_dft_r2c(fft_->forward, real, as_fftw(buf));

  // cos(π(n−k)/2n) = sin(πk/2n), so k and n − k share one table entry.
  const auto& v = buf;
  const double scale0 = std::sqrt(1.0 / static_cast<double>(n));
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  base[0] = v[0].real() * scale0;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double re = v[k].real();
    const double im = v[k].imag();
    base[k * stride] = (re * cos_[k] + im * sin_[k]) * scale;
    if (k != n - k) base[(n - k) * stride] = (re * sin_[k] - im * cos_[k]) * scale;
  }
  if (gains) {
    for (std::size_t k = 0; k < n; ++k) base[k * stride] *= gains[k * stride];
  }
}

// Inverse of the above: V_k = exp(iπk/2n)(C_k − i C_{n−k}), C_n = 0.
void TransformPlan::inverse_strided(double* base, std::size_t stride) const {
  const std::size_t n = n_;
  if (n == 1) return;
  auto& buf = line_scratch(n);
  const double unscale0 = std::sqrt(static_cast<double>(n));
  const double unscale = std::sqrt(static_cast<double>(n) / 2.0);
  buf[0] = {base[0] * unscale0, 0.0};
  for (std::size_t k = 1; k <= n / 2; ++k) {
    const double ck = base[k * stride] * unscale;
    const double cnk = base[(n - k) * stride] * unscale;
    // (cos + i sin)(ck − i cnk)
    buf[k] = {cos_[k] * ck + sin_[k] * cnk, sin_[k] * ck - cos_[k] * cnk};
  }
  double* real = as_real(buf);
  fftw_execute_dft_c2r(fft_->backward, as_fftw(buf), real);
  const double norm = 1.0 / static_cast<double>(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) base[2 * i * stride] = real[i] * norm;
  for (std::size_t i = 0; i < n / 2; ++i) base[(2 * i + 1) * stride] = real[n - 1 - i] * norm;
}

const TransformPlan& plan_for(std::size_t length) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<TransformPlan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[length];
  if (!slot) slot = std::make_unique<TransformPlan>(length);
  return *slot;
}

std::vector<double> dct_1d(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("DCT of an empty vector");
  std::vector<double> out(v.begin(), v.end());
  plan_for(out.size()).forward(out);
  return out;
}

std::vector<double> idct_1d(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("inverse DCT of an empty vector");
  std::vector<double> out(v.begin(), v.end());
  plan_for(out.size()).inverse(out);
  return out;
}

void dct_along_axis(GridTensor& t, std::size_t axis) {
  const AxisLines lines = lines_along_axis(t.shape(), axis);
  if (lines.line_length() == 1) return;
  const TransformPlan& plan = plan_for(lines.line_length());
  for (const LineDescriptor line : lines) plan.forward(t.values(), line);
}

void idct_along_axis(GridTensor& t, std::size_t axis) {
  const AxisLines lines = lines_along_axis(t.shape(), axis);
  if (lines.line_length() == 1) return;
  const TransformPlan& plan = plan_for(lines.line_length());
  for (const LineDescriptor line : lines) plan.inverse(t.values(), line);
}

void dct_nd_inplace(GridTensor& t) {
  for (std::size_t axis = 0; axis < t.rank(); ++axis) dct_along_axis(t, axis);
}

void dct_nd_scaled_inplace(GridTensor& t, const GridTensor& gains) {
  if (!t.same_shape(gains)) throw std::invalid_argument("gain tensor shape does not match data");
  const std::size_t last = t.rank() - 1;
  for (std::size_t axis = 0; axis < last; ++axis) dct_along_axis(t, axis);
  const AxisLines lines = lines_along_axis(t.shape(), last);
  const TransformPlan& plan = plan_for(lines.line_length());
  for (const LineDescriptor line : lines) plan.forward(t.values(), line, gains.values());
}

void idct_nd_inplace(GridTensor& t) {
  for (std::size_t axis = t.rank(); axis-- > 0;) idct_along_axis(t, axis);
}

GridTensor dct_nd(GridTensor t) {
  dct_nd_inplace(t);
  return t;
}

GridTensor idct_nd(GridTensor t) {
  idct_nd_inplace(t);
  return t;
}

}  // namespace l1spline
