#include "abfdns/initial_conditions.hpp"

#include <cmath>
#include <random>

#include "abfdns/spectral.hpp"

namespace abfdns {

SpectralVelocityField taylor_green(std::shared_ptr<const GridSpec> grid) {
  const GridSpec& g = *grid;
  const double k1 = 2.0 * std::numbers::pi / g.length(1);
  const double k2 = 2.0 * std::numbers::pi / g.length(2);
  const double ratio = k1 / k2;
  PhysicalField f(grid, 3);
  for (int i3 = 0; i3 < g.n3(); ++i3) {
    for (int i2 = 0; i2 < g.n2(); ++i2) {
      const double x2 = g.coord(2, i2);
      for (int i1 = 0; i1 < g.n1(); ++i1) {
        const double x1 = g.coord(1, i1);
        const std::size_t idx = g.phys_index(i1, i2, i3);
        f.component(0)[idx] = std::sin(k1 * x1) * std::cos(k2 * x2);
        f.component(1)[idx] = -ratio * std::cos(k1 * x1) * std::sin(k2 * x2);
        f.component(2)[idx] = 0.0;
      }
    }
  }
  SpectralVelocityField u = forward_transform_vector(f);
  u.set_projected(true);
  return u;
}

SpectralVelocityField vertical_shear(std::shared_ptr<const GridSpec> grid) {
  SpectralVelocityField u(grid);
  const GridSpec& g = *grid;
  // sin(k3 x3) = -i/2 e^{i k3 x3} + i/2 e^{-i k3 x3}, set exactly.
  u.at(0, 0, 0, 1) = Complex(0.0, -0.5);
  u.at(0, 0, 0, g.n3() - 1) = Complex(0.0, 0.5);
  u.set_projected(true);
  return u;
}

SpectralVelocityField uniform_velocity(std::shared_ptr<const GridSpec> grid,
                                       const std::array<double, 3>& value) {
  SpectralVelocityField u(grid);
  for (int c = 0; c < 3; ++c) u.at(c, 0, 0, 0) = Complex(value[c], 0.0);
  u.set_projected(true);
  return u;
}

namespace {

struct ModeDraw {
  std::mt19937_64 rng;
  std::normal_distribution<double> normal{0.0, 1.0};
  std::uniform_real_distribution<double> angle{0.0, 2.0 * std::numbers::pi};

  explicit ModeDraw(std::uint64_t seed) : rng(seed) {}

  Complex phase() {
    const double th = angle(rng);
    return Complex(std::cos(th), std::sin(th));
  }

  std::array<Complex, 3> gaussian3() {
    std::array<Complex, 3> v;
    for (auto& z : v) z = Complex(normal(rng), normal(rng));
    return v;
  }
};

double mode_energy(int j1, int j2, int j3, double slope) {
  const double jj = std::sqrt(double(j1) * j1 + double(j2) * j2 + double(j3) * j3);
  return std::pow(jj, slope);
}

// Visit every stored, dealias-kept, nonzero mode exactly once, pairing each
// boundary-plane mode with its in-plane conjugate partner. fn(i1,i2,i3,
// mirror_i2, mirror_i3, has_mirror).
template <class F>
void for_each_canonical_mode(const GridSpec& g, F&& fn) {
  const int nk1 = g.nk1();
  const int n2 = g.n2();
  const int n3 = g.n3();
  for (int i3 = 0; i3 < n3; ++i3) {
    if (!g.keep3(i3)) continue;
    for (int i2 = 0; i2 < n2; ++i2) {
      if (!g.keep2(i2)) continue;
      for (int i1 = 0; i1 < nk1; ++i1) {
        if (!g.keep1(i1)) continue;
        if (i1 == 0 && g.mode2(i2) == 0 && g.mode3(i3) == 0) continue;  // zero mode
        if (i1 == 0) {
          const int i2p = (n2 - i2) % n2;
          const int i3p = (n3 - i3) % n3;
          if (i3 > i3p || (i3 == i3p && i2 > i2p)) continue;  // mirror slot
          // Self-conjugate kept modes cannot occur: they carry a Nyquist
          // index, which the two-thirds mask removes.
          fn(i1, i2, i3, i2p, i3p, true);
        } else {
          fn(i1, i2, i3, 0, 0, false);
        }
      }
    }
  }
}

}  // namespace

SpectralVelocityField random_divergence_free(std::shared_ptr<const GridSpec> grid,
                                             double spectrum_slope, std::uint64_t seed) {
  const GridSpec& g = *grid;
  SpectralVelocityField u(grid);
  ModeDraw draw(seed);
  const double vol = g.volume();

  for_each_canonical_mode(g, [&](int i1, int i2, int i3, int i2p, int i3p, bool mirror) {
    const double k[3] = {g.k1(i1), g.k2(i2), g.k3(i3)};
    const double kk = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    auto v = draw.gaussian3();
    // Project onto the complex plane orthogonal to k.
    Complex dot = k[0] * v[0] + k[1] * v[1] + k[2] * v[2];
    for (int c = 0; c < 3; ++c) v[c] -= k[c] * (dot / kk);
    double norm2 = 0.0;
    for (const auto& z : v) norm2 += std::norm(z);
    if (norm2 < 1e-24) {
      // Degenerate draw: fall back to a deterministic unit vector normal to k.
      const double a[3] = {-k[1], k[0], 0.0};
      const double b[3] = {0.0, -k[2], k[1]};
      const double* w = (a[0] * a[0] + a[1] * a[1] > kk * 1e-12) ? a : b;
      for (int c = 0; c < 3; ++c) v[c] = Complex(w[c], 0.0);
      norm2 = 0.0;
      for (const auto& z : v) norm2 += std::norm(z);
    }
    const int j1 = g.mode1(i1);
    const int j2 = g.mode2(i2);
    const int j3 = g.mode3(i3);
    const double amp = std::sqrt(mode_energy(j1, j2, j3, spectrum_slope) / vol);
    const double scale = amp / std::sqrt(norm2);
    for (int c = 0; c < 3; ++c) {
      const Complex z = v[c] * scale;
      u.at(c, i1, i2, i3) = z;
      if (mirror) u.at(c, i1, i2p, i3p) = std::conj(z);
    }
  });

  u.set_projected(true);
  return u;
}

SpectralField random_scalar(std::shared_ptr<const GridSpec> grid, double spectrum_slope,
                            std::uint64_t seed, bool horizontal_mean_free) {
  const GridSpec& g = *grid;
  SpectralField f(grid);
  ModeDraw draw(seed);
  const double vol = g.volume();

  for_each_canonical_mode(g, [&](int i1, int i2, int i3, int i2p, int i3p, bool mirror) {
    const int j1 = g.mode1(i1);
    const int j2 = g.mode2(i2);
    const int j3 = g.mode3(i3);
    const Complex ph = draw.phase();  // consume the stream unconditionally
    if (horizontal_mean_free && j1 == 0 && j2 == 0) return;
    const double amp = std::sqrt(mode_energy(j1, j2, j3, spectrum_slope) / vol);
    const Complex z = amp * ph;
    f.at(i1, i2, i3) = z;
    if (mirror) f.at(i1, i2p, i3p) = std::conj(z);
  });

  return f;
}

}  // namespace abfdns
