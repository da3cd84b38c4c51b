#pragma once

#include <array>
#include <cstdint>
#include <memory>

#include "abfdns/field.hpp"
#include "abfdns/grid.hpp"

namespace abfdns {

/// Taylor-Green vortex (sin k1 x1 cos k2 x2, -(k1/k2) cos k1 x1 sin k2 x2, 0)
/// with k_i the fundamental wavenumber of each axis; on a (2pi)^3 box this is
/// (sin x1 cos x2, -cos x1 sin x2, 0). Divergence-free by construction.
SpectralVelocityField taylor_green(std::shared_ptr<const GridSpec> grid);

/// Vertical shear (sin k3 x3, 0, 0); set exactly in spectral space.
SpectralVelocityField vertical_shear(std::shared_ptr<const GridSpec> grid);

/// Spatially uniform velocity (zero mode only).
SpectralVelocityField uniform_velocity(std::shared_ptr<const GridSpec> grid,
                                       const std::array<double, 3>& value);

/// Random divergence-free field, deterministic in `seed`. Every
/// dealias-kept nonzero integer mode j of the full signed lattice receives
/// energy |j|^spectrum_slope, so ||u||_{L2}^2 equals the sum of those
/// per-mode energies exactly (modulo rounding).
SpectralVelocityField random_divergence_free(std::shared_ptr<const GridSpec> grid,
                                             double spectrum_slope,
                                             std::uint64_t seed);

/// Random scalar trigonometric polynomial with the same per-mode energy law;
/// always mean-zero. With horizontal_mean_free every xi' = 0 mode is dropped
/// as well (fields mean-free on each horizontal slice).
SpectralField random_scalar(std::shared_ptr<const GridSpec> grid, double spectrum_slope,
                            std::uint64_t seed, bool horizontal_mean_free = false);

}  // namespace abfdns
