#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <memory>
#include <vector>

#include "abfdns/aligned.hpp"

namespace abfdns {

/// Periodic box [0,L1) x [0,L2) x [0,L3) sampled on n_h x n_h x n_v points.
///
/// Real-space arrays are stored row-major with x1 fastest:
///     value(i1,i2,i3) = data[(i3*n2 + i2)*n1 + i1].
/// Spectral arrays use the half-complex r2c layout: the x1 axis is truncated
/// to n1/2+1 entries and the missing modes are the complex conjugates of the
/// stored ones. The wavenumber along axis i for integer mode j is 2*pi*j/L_i
/// with j in {-n/2, ..., n/2-1}; on the truncated axis the stored indices
/// 0..n1/2 carry j = 0..n1/2 with the last entry being the Nyquist mode.
///
/// The dealias mask keeps a mode exactly when |j| <= n/3 on every axis
/// (two-thirds rule). Grids are immutable and hold the FFTW plans shared by
/// every field living on them; create them through make_grid and pass them
/// around as shared_ptr<const GridSpec>.
class GridSpec {
 public:
  GridSpec(int n_h, int n_v, const std::array<double, 3>& box_lengths);
  ~GridSpec();

  GridSpec(const GridSpec&) = delete;
  GridSpec& operator=(const GridSpec&) = delete;

  int n1() const { return n_[0]; }
  int n2() const { return n_[1]; }
  int n3() const { return n_[2]; }
  int n(int axis) const { return n_[axis - 1]; }  // axis in 1..3
  int nk1() const { return n_[0] / 2 + 1; }

  double length(int axis) const { return box_[axis - 1]; }
  const std::array<double, 3>& box_lengths() const { return box_; }
  double volume() const { return box_[0] * box_[1] * box_[2]; }
  double dx(int axis) const { return box_[axis - 1] / n_[axis - 1]; }

  std::size_t phys_size() const {
    return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
  }
  std::size_t spec_size() const {
    return static_cast<std::size_t>(nk1()) * n_[1] * n_[2];
  }

  std::size_t phys_index(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i3) * n_[1] + i2) * n_[0] + i1;
  }
  std::size_t spec_index(int i1, int i2, int i3) const {
    return (static_cast<std::size_t>(i3) * n_[1] + i2) * nk1() + i1;
  }

  /// Collocation coordinate along an axis (axis in 1..3).
  double coord(int axis, int i) const { return dx(axis) * i; }

  /// Signed integer mode index along each axis for a stored position.
  int mode1(int i1) const { return mode_[0][i1]; }
  int mode2(int i2) const { return mode_[1][i2]; }
  int mode3(int i3) const { return mode_[2][i3]; }

  /// Physical wavenumber 2*pi*j/L at a stored position.
  double k1(int i1) const { return wav_[0][i1]; }
  double k2(int i2) const { return wav_[1][i2]; }
  double k3(int i3) const { return wav_[2][i3]; }

  /// Derivative multiplier: equals the wavenumber except that the Nyquist
  /// mode is zeroed (odd derivatives of the Nyquist mode are ill-defined on
  /// a real grid).
  double dk1(int i1) const { return deriv_[0][i1]; }
  double dk2(int i2) const { return deriv_[1][i2]; }
  double dk3(int i3) const { return deriv_[2][i3]; }

  bool keep1(int i1) const { return keep_[0][i1] != 0; }
  bool keep2(int i2) const { return keep_[1][i2] != 0; }
  bool keep3(int i3) const { return keep_[2][i3] != 0; }

  /// Two-thirds-rule mask over stored spectral positions; true = kept.
  const std::vector<std::uint8_t>& dealias_mask() const { return mask_; }
  bool dealias_keep(int i1, int i2, int i3) const {
    return mask_[spec_index(i1, i2, i3)] != 0;
  }

  /// Mode-count weight for reductions over the truncated layout: interior
  /// i1 planes stand for themselves plus their unstored conjugates.
  double mode_weight(int i1) const {
    return (i1 == 0 || i1 == nk1() - 1) ? 1.0 : 2.0;
  }

  bool same_layout(const GridSpec& other) const {
    return n_ == other.n_ && box_ == other.box_;
  }

  // FFTW plans (unnormalized, out-of-place); execute via the new-array API
  // on fftw_malloc-aligned buffers only.
  void execute_r2c(double* in, Complex* out) const;
  void execute_c2r(Complex* in, double* out) const;

 private:
  std::array<int, 3> n_;
  std::array<double, 3> box_;
  std::array<std::vector<int>, 3> mode_;
  std::array<std::vector<double>, 3> wav_;
  std::array<std::vector<double>, 3> deriv_;
  std::array<std::vector<std::uint8_t>, 3> keep_;
  std::vector<std::uint8_t> mask_;
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
};

/// Build a grid. Rejects odd or <8 resolutions and non-positive lengths.
std::shared_ptr<const GridSpec> make_grid(int n_h, int n_v,
                                          const std::array<double, 3>& box_lengths);

}  // namespace abfdns
