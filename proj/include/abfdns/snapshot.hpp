#pragma once

#include <memory>
#include <string>

#include "abfdns/field.hpp"

namespace abfdns {

/// Snapshot file layout (all little-endian):
///   8 bytes  magic "ABFDNS01"
///   u32      n_h
///   u32      n_v
///   3 x f64  box lengths
///   f64      time t
///   u32      component count
/// followed by components * n_h * n_h * n_v f64 payload values. Each
/// component stores the spectral coefficients losslessly: interior x1
/// planes as re/im pairs (xi1-fastest), the Hermitian-redundant boundary
/// planes (xi1 index 0 and n_h/2) packed through their internal conjugate
/// symmetry so the float count per component equals the number of grid
/// points exactly. Write-then-read reproduces canonical coefficients bit
/// for bit.
struct LoadedSnapshot {
  SpectralVelocityField u;
  double t = 0.0;
};

void write_snapshot(const std::string& path, const SpectralVelocityField& u, double t);

LoadedSnapshot read_snapshot(const std::string& path);

}  // namespace abfdns
