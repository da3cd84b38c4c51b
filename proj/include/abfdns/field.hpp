#pragma once

#include <array>
#include <memory>
#include <stdexcept>

#include "abfdns/aligned.hpp"
#include "abfdns/grid.hpp"

namespace abfdns {

/// Real samples on the collocation grid, 1 or 3 components, component-major.
class PhysicalField {
 public:
  PhysicalField(std::shared_ptr<const GridSpec> grid, int components)
      : grid_(std::move(grid)), components_(components) {
    if (components_ != 1 && components_ != 3) {
      throw std::invalid_argument("PhysicalField: components must be 1 or 3");
    }
    data_.assign(static_cast<std::size_t>(components_) * grid_->phys_size(), 0.0);
  }

  const std::shared_ptr<const GridSpec>& grid() const { return grid_; }
  int components() const { return components_; }

  double* component(int c) { return data_.data() + static_cast<std::size_t>(c) * grid_->phys_size(); }
  const double* component(int c) const {
    return data_.data() + static_cast<std::size_t>(c) * grid_->phys_size();
  }

  double& at(int c, int i1, int i2, int i3) {
    return component(c)[grid_->phys_index(i1, i2, i3)];
  }
  double at(int c, int i1, int i2, int i3) const {
    return component(c)[grid_->phys_index(i1, i2, i3)];
  }

  AlignedVector<double>& data() { return data_; }
  const AlignedVector<double>& data() const { return data_; }

 private:
  std::shared_ptr<const GridSpec> grid_;
  int components_;
  AlignedVector<double> data_;
};

/// Scalar spectral field in the half-complex layout.
class SpectralField {
 public:
  explicit SpectralField(std::shared_ptr<const GridSpec> grid) : grid_(std::move(grid)) {
    data_.assign(grid_->spec_size(), Complex(0.0, 0.0));
  }

  const std::shared_ptr<const GridSpec>& grid() const { return grid_; }

  Complex* data() { return data_.data(); }
  const Complex* data() const { return data_.data(); }

  Complex& at(int i1, int i2, int i3) { return data_[grid_->spec_index(i1, i2, i3)]; }
  Complex at(int i1, int i2, int i3) const { return data_[grid_->spec_index(i1, i2, i3)]; }

  AlignedVector<Complex>& coeffs() { return data_; }
  const AlignedVector<Complex>& coeffs() const { return data_; }

 private:
  std::shared_ptr<const GridSpec> grid_;
  AlignedVector<Complex> data_;
};

/// Three-component spectral velocity. `projected` records that the field has
/// passed through the Leray projector (or is divergence-free by
/// construction): every nonzero stored mode then satisfies
/// |k·u(k)| <= 1e-12 |k| |u(k)|.
class SpectralVelocityField {
 public:
  explicit SpectralVelocityField(std::shared_ptr<const GridSpec> grid)
      : grid_(std::move(grid)) {
    for (auto& c : data_) c.assign(grid_->spec_size(), Complex(0.0, 0.0));
  }

  const std::shared_ptr<const GridSpec>& grid() const { return grid_; }

  Complex* component(int c) { return data_[c].data(); }
  const Complex* component(int c) const { return data_[c].data(); }

  Complex& at(int c, int i1, int i2, int i3) {
    return data_[c][grid_->spec_index(i1, i2, i3)];
  }
  Complex at(int c, int i1, int i2, int i3) const {
    return data_[c][grid_->spec_index(i1, i2, i3)];
  }

  AlignedVector<Complex>& coeffs(int c) { return data_[c]; }
  const AlignedVector<Complex>& coeffs(int c) const { return data_[c]; }

  bool projected() const { return projected_; }
  void set_projected(bool p) { projected_ = p; }

 private:
  std::shared_ptr<const GridSpec> grid_;
  std::array<AlignedVector<Complex>, 3> data_;
  bool projected_ = false;
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!a.same_layout(b)) {
    throw std::invalid_argument("grid mismatch between fields");
  }
}

}  // namespace abfdns
