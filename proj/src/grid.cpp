#include "abfdns/grid.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace abfdns {

namespace {

// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

GridSpec::GridSpec(int n_h, int n_v, const std::array<double, 3>& box_lengths)
    : n_{n_h, n_h, n_v}, box_(box_lengths) {
  for (int axis = 0; axis < 3; ++axis) {
    const int n = n_[axis];
    if (n < 8 || n % 2 != 0) {
      throw std::invalid_argument("GridSpec: resolutions must be even and >= 8");
    }
    if (!(box_[axis] > 0.0)) {
      throw std::invalid_argument("GridSpec: box lengths must be > 0");
    }
  }

  for (int axis = 0; axis < 3; ++axis) {
    const int n = n_[axis];
    const int stored = (axis == 0) ? n / 2 + 1 : n;
    const double base = 2.0 * std::numbers::pi / box_[axis];
    mode_[axis].resize(stored);
    wav_[axis].resize(stored);
    deriv_[axis].resize(stored);
    keep_[axis].resize(stored);
    for (int i = 0; i < stored; ++i) {
      int j = i;
      if (axis != 0 && i >= n / 2) j = i - n;   // full axes wrap to negatives
      if (axis == 0 && i == n / 2) j = -n / 2;  // stored Nyquist of the r2c axis
      mode_[axis][i] = j;
      wav_[axis][i] = base * j;
      deriv_[axis][i] = (std::abs(j) == n / 2) ? 0.0 : base * j;
      keep_[axis][i] = (3 * std::abs(j) <= n) ? 1 : 0;  // |j| <= n/3
    }
  }

  mask_.resize(spec_size());
  for (int i3 = 0; i3 < n_[2]; ++i3) {
    for (int i2 = 0; i2 < n_[1]; ++i2) {
      for (int i1 = 0; i1 < nk1(); ++i1) {
        mask_[spec_index(i1, i2, i3)] =
            (keep_[0][i1] && keep_[1][i2] && keep_[2][i3]) ? 1 : 0;
      }
    }
  }

  // Plan on throwaway aligned buffers; execution uses the new-array API.
  AlignedVector<double> real(phys_size());
  AlignedVector<Complex> spec(spec_size());
  const int dims[3] = {n_[2], n_[1], n_[0]};  // row-major, x1 fastest
  std::lock_guard<std::mutex> lock(planner_mutex());
  r2c_ = fftw_plan_dft_r2c(3, dims, real.data(),
                           reinterpret_cast<fftw_complex*>(spec.data()), FFTW_ESTIMATE);
  c2r_ = fftw_plan_dft_c2r(3, dims, reinterpret_cast<fftw_complex*>(spec.data()),
                           real.data(), FFTW_ESTIMATE);
  if (r2c_ == nullptr || c2r_ == nullptr) {
    throw std::runtime_error("GridSpec: FFTW planning failed");
  }
}

GridSpec::~GridSpec() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (r2c_ != nullptr) fftw_destroy_plan(r2c_);
  if (c2r_ != nullptr) fftw_destroy_plan(c2r_);
}

void GridSpec::execute_r2c(double* in, Complex* out) const {
  fftw_execute_dft_r2c(r2c_, in, reinterpret_cast<fftw_complex*>(out));
}

void GridSpec::execute_c2r(Complex* in, double* out) const {
  fftw_execute_dft_c2r(c2r_, reinterpret_cast<fftw_complex*>(in), out);
}

std::shared_ptr<const GridSpec> make_grid(int n_h, int n_v,
                                          const std::array<double, 3>& box_lengths) {
  return std::make_shared<const GridSpec>(n_h, n_v, box_lengths);
}

}  // namespace abfdns
