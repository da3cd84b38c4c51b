#include "abfdns/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace abfdns {

namespace detail {

void canonicalize_hermitian(const GridSpec& g, Complex* c) {
  const int n2 = g.n2();
  const int n3 = g.n3();
  const int planes[2] = {0, g.nk1() - 1};
  for (int p = 0; p < 2; ++p) {
    const int i1 = planes[p];
    for (int i3 = 0; i3 < n3; ++i3) {
      const int i3p = (n3 - i3) % n3;
      for (int i2 = 0; i2 < n2; ++i2) {
        const int i2p = (n2 - i2) % n2;
        if (i3 < i3p || (i3 == i3p && i2 < i2p)) {
          c[g.spec_index(i1, i2p, i3p)] = std::conj(c[g.spec_index(i1, i2, i3)]);
        } else if (i3 == i3p && i2 == i2p) {
          Complex& self = c[g.spec_index(i1, i2, i3)];
          self = Complex(self.real(), 0.0);  // self-conjugate modes are real
        }
      }
    }
  }
}

}  // namespace detail

namespace {

void forward_one(const GridSpec& g, const double* in, Complex* out) {
  // Out-of-place r2c preserves its input; the const_cast is safe.
  g.execute_r2c(const_cast<double*>(in), out);
  const double scale = 1.0 / static_cast<double>(g.phys_size());
  const std::size_t m = g.spec_size();
  for (std::size_t i = 0; i < m; ++i) out[i] *= scale;
  detail::canonicalize_hermitian(g, out);
}

void inverse_one(const GridSpec& g, const Complex* in, double* out) {
  // Multi-dimensional c2r destroys its input; feed it a scratch copy.
  AlignedVector<Complex> scratch(in, in + g.spec_size());
  g.execute_c2r(scratch.data(), out);
}

}  // namespace

SpectralField forward_transform(const PhysicalField& f) {
  if (f.components() != 1) {
    throw std::invalid_argument("forward_transform: expected a scalar field");
  }
  SpectralField out(f.grid());
  forward_one(*f.grid(), f.component(0), out.data());
  return out;
}

SpectralVelocityField forward_transform_vector(const PhysicalField& f) {
  if (f.components() != 3) {
    throw std::invalid_argument("forward_transform_vector: expected 3 components");
  }
  SpectralVelocityField out(f.grid());
  for (int c = 0; c < 3; ++c) forward_one(*f.grid(), f.component(c), out.component(c));
  return out;
}

PhysicalField inverse_transform(const SpectralField& c) {
  PhysicalField out(c.grid(), 1);
  inverse_one(*c.grid(), c.data(), out.component(0));
  return out;
}

PhysicalField inverse_transform(const SpectralVelocityField& u) {
  PhysicalField out(u.grid(), 3);
  for (int c = 0; c < 3; ++c) inverse_one(*u.grid(), u.component(c), out.component(c));
  return out;
}

namespace {

void derivative_one(const GridSpec& g, const Complex* in, Complex* out, int axis) {
  const int nk1 = g.nk1();
  const int n2 = g.n2();
  const int n3 = g.n3();
  for (int i3 = 0; i3 < n3; ++i3) {
    for (int i2 = 0; i2 < n2; ++i2) {
      const std::size_t row = g.spec_index(0, i2, i3);
      for (int i1 = 0; i1 < nk1; ++i1) {
        double k = 0.0;
        switch (axis) {
          case 1: k = g.dk1(i1); break;
          case 2: k = g.dk2(i2); break;
          case 3: k = g.dk3(i3); break;
        }
        const Complex v = in[row + i1];
        out[row + i1] = Complex(-k * v.imag(), k * v.real());  // i*k*v
      }
    }
  }
}

}  // namespace

SpectralField derivative(const SpectralField& c, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("derivative: axis must be 1..3");
  SpectralField out(c.grid());
  derivative_one(*c.grid(), c.data(), out.data(), axis);
  return out;
}

SpectralVelocityField derivative(const SpectralVelocityField& u, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("derivative: axis must be 1..3");
  SpectralVelocityField out(u.grid());
  for (int c = 0; c < 3; ++c) derivative_one(*u.grid(), u.component(c), out.component(c), axis);
  out.set_projected(false);
  return out;
}

SpectralVelocityField leray_project(const SpectralVelocityField& u) {
  const GridSpec& g = *u.grid();
  SpectralVelocityField out = u;
  Complex* c0 = out.component(0);
  Complex* c1 = out.component(1);
  Complex* c2 = out.component(2);
  const int nk1 = g.nk1();
  const int n2 = g.n2();
  const int n3 = g.n3();
  for (int i3 = 0; i3 < n3; ++i3) {
    const bool ny3 = std::abs(g.mode3(i3)) == n3 / 2;
    for (int i2 = 0; i2 < n2; ++i2) {
      const bool ny2 = std::abs(g.mode2(i2)) == n2 / 2;
      const std::size_t row = g.spec_index(0, i2, i3);
      for (int i1 = 0; i1 < nk1; ++i1) {
        const bool ny1 = i1 == nk1 - 1;
        const std::size_t idx = row + i1;
        if (i1 == 0 && g.mode2(i2) == 0 && g.mode3(i3) == 0) {
          continue;  // mean flow untouched
        }
        if (ny1 || ny2 || ny3) {
          c0[idx] = c1[idx] = c2[idx] = Complex(0.0, 0.0);
          continue;
        }
        const double k1 = g.k1(i1);
        const double k2 = g.k2(i2);
        const double k3 = g.k3(i3);
        const double kk = k1 * k1 + k2 * k2 + k3 * k3;
        const Complex dot = k1 * c0[idx] + k2 * c1[idx] + k3 * c2[idx];
        const Complex s = dot / kk;
        c0[idx] -= k1 * s;
        c1[idx] -= k2 * s;
        c2[idx] -= k3 * s;
      }
    }
  }
  out.set_projected(true);
  return out;
}

namespace {

void dealias_one(const GridSpec& g, Complex* c) {
  const auto& mask = g.dealias_mask();
  const std::size_t m = g.spec_size();
  for (std::size_t i = 0; i < m; ++i) {
    if (mask[i] == 0) c[i] = Complex(0.0, 0.0);
  }
}

}  // namespace

void dealias_in_place(SpectralField& c) { dealias_one(*c.grid(), c.data()); }

void dealias_in_place(SpectralVelocityField& u) {
  for (int c = 0; c < 3; ++c) dealias_one(*u.grid(), u.component(c));
}

SpectralField dealias(const SpectralField& c) {
  SpectralField out = c;
  dealias_in_place(out);
  return out;
}

SpectralVelocityField dealias(const SpectralVelocityField& u) {
  SpectralVelocityField out = u;
  dealias_in_place(out);
  return out;
}

SpectralField divergence(const SpectralVelocityField& u) {
  const GridSpec& g = *u.grid();
  SpectralField out(u.grid());
  Complex* d = out.data();
  const Complex* c0 = u.component(0);
  const Complex* c1 = u.component(1);
  const Complex* c2 = u.component(2);
  const int nk1 = g.nk1();
  const int n2 = g.n2();
  const int n3 = g.n3();
  for (int i3 = 0; i3 < n3; ++i3) {
    for (int i2 = 0; i2 < n2; ++i2) {
      const std::size_t row = g.spec_index(0, i2, i3);
      for (int i1 = 0; i1 < nk1; ++i1) {
        const std::size_t idx = row + i1;
        const Complex dot =
            g.dk1(i1) * c0[idx] + g.dk2(i2) * c1[idx] + g.dk3(i3) * c2[idx];
        d[idx] = Complex(-dot.imag(), dot.real());  // i * (k . u)
      }
    }
  }
  return out;
}

}  // namespace abfdns
