#include "abfdns/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace abfdns {

namespace {

void require_projected(const SpectralVelocityField& u, const char* op) {
  if (!u.projected()) {
    throw std::invalid_argument(std::string(op) + ": velocity must be projected");
  }
}

/// Collocation-space samples of (u.grad)u, plus a_eff |u|^{2 alpha} u when
/// requested. Left in physical space so callers choose what to do next.
PhysicalField nonlinear_physical(const SpectralVelocityField& u, double a_eff,
                                 double alpha, bool include_damping) {
  const GridSpec& g = *u.grid();
  const std::size_t n = g.phys_size();
  PhysicalField v = inverse_transform(u);
  PhysicalField nl(u.grid(), 3);

  for (int j = 1; j <= 3; ++j) {
    PhysicalField dj = inverse_transform(derivative(u, j));
    const double* vj = v.component(j - 1);
    for (int i = 0; i < 3; ++i) {
      double* out = nl.component(i);
      const double* d = dj.component(i);
      for (std::size_t x = 0; x < n; ++x) out[x] += vj[x] * d[x];
    }
  }

  if (include_damping && a_eff != 0.0) {
    const double* v0 = v.component(0);
    const double* v1 = v.component(1);
    const double* v2 = v.component(2);
    for (std::size_t x = 0; x < n; ++x) {
      const double s2 = v0[x] * v0[x] + v1[x] * v1[x] + v2[x] * v2[x];
      const double f = a_eff * std::pow(s2, alpha);
      nl.component(0)[x] += f * v0[x];
      nl.component(1)[x] += f * v1[x];
      nl.component(2)[x] += f * v2[x];
    }
  }
  return nl;
}

/// Explicit tendency N(u) = -P[dealias(F(nonlinear))].
SpectralVelocityField explicit_tendency(const SpectralVelocityField& u,
                                        const PhysicsParams& p, double a_eff,
                                        bool include_damping) {
  PhysicalField nl = nonlinear_physical(u, a_eff, p.alpha, include_damping);
  SpectralVelocityField s = forward_transform_vector(nl);
  dealias_in_place(s);
  SpectralVelocityField out = leray_project(s);
  for (int c = 0; c < 3; ++c) {
    for (auto& z : out.coeffs(c)) z = -z;
  }
  return out;
}

/// exp(-nu (k1^2+k2^2) s) over the (i2,i1) plane, shared by every k3 row.
std::vector<double> viscous_factor(const GridSpec& g, double nu, double s) {
  const int nk1 = g.nk1();
  std::vector<double> f(static_cast<std::size_t>(g.n2()) * nk1);
  for (int i2 = 0; i2 < g.n2(); ++i2) {
    for (int i1 = 0; i1 < nk1; ++i1) {
      const double kh2 = g.k1(i1) * g.k1(i1) + g.k2(i2) * g.k2(i2);
      f[static_cast<std::size_t>(i2) * nk1 + i1] = std::exp(-nu * kh2 * s);
    }
  }
  return f;
}

void scale_by_plane(SpectralVelocityField& u, const std::vector<double>& f) {
  const GridSpec& g = *u.grid();
  const int nk1 = g.nk1();
  for (int c = 0; c < 3; ++c) {
    Complex* d = u.component(c);
    for (int i3 = 0; i3 < g.n3(); ++i3) {
      for (int i2 = 0; i2 < g.n2(); ++i2) {
        const std::size_t row = g.spec_index(0, i2, i3);
        const double* fr = f.data() + static_cast<std::size_t>(i2) * nk1;
        for (int i1 = 0; i1 < nk1; ++i1) d[row + i1] *= fr[i1];
      }
    }
  }
}

void add_scaled(SpectralVelocityField& y, const SpectralVelocityField& x, double s) {
  for (int c = 0; c < 3; ++c) {
    Complex* yd = y.component(c);
    const Complex* xd = x.component(c);
    const std::size_t n = y.grid()->spec_size();
    for (std::size_t i = 0; i < n; ++i) yd[i] += s * xd[i];
  }
}

SpectralVelocityField combine(const SpectralVelocityField& u, const SpectralVelocityField& k,
                              double s) {
  SpectralVelocityField out = u;
  add_scaled(out, k, s);
  return out;
}

bool finite_state(const SpectralVelocityField& u) {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (const auto& z : u.coeffs(c)) acc += std::norm(z);
  }
  return std::isfinite(acc);
}

/// Integrating-factor RK advance of du/dt = L u + N(u) with L the diagonal
/// horizontal-viscous symbol; every exponential factor is forward in time.
SpectralVelocityField advance_rk(const SpectralVelocityField& u, const PhysicsParams& p,
                                 const StepperConfig& cfg, double a_eff,
                                 bool include_damping) {
  const GridSpec& g = *u.grid();
  const double dt = cfg.dt;
  const auto e_full = viscous_factor(g, p.nu, dt);

  if (cfg.scheme == TimeScheme::imex_rk2) {
    // Heun on the transformed variable:
    //   u* = E(u0 + dt K1), u1 = E(u0 + dt/2 K1) + dt/2 N(u*)
    SpectralVelocityField k1 = explicit_tendency(u, p, a_eff, include_damping);
    SpectralVelocityField ua = combine(u, k1, dt);
    scale_by_plane(ua, e_full);
    ua.set_projected(true);
    SpectralVelocityField k2 = explicit_tendency(ua, p, a_eff, include_damping);
    SpectralVelocityField out = combine(u, k1, 0.5 * dt);
    scale_by_plane(out, e_full);
    add_scaled(out, k2, 0.5 * dt);
    out.set_projected(true);
    return out;
  }

  // Kutta's third-order method in integrating-factor form:
  //   ub = E_2(u0 + dt/2 K1)
  //   uc = E(u0 - dt K1) + 2 dt E_2 K2
  //   u1 = E(u0 + dt/6 K1) + (2dt/3) E_2 K2 + dt/6 K3
  const auto e_half = viscous_factor(g, p.nu, 0.5 * dt);
  SpectralVelocityField k1 = explicit_tendency(u, p, a_eff, include_damping);
  SpectralVelocityField ub = combine(u, k1, 0.5 * dt);
  scale_by_plane(ub, e_half);
  ub.set_projected(true);
  SpectralVelocityField k2h = explicit_tendency(ub, p, a_eff, include_damping);
  scale_by_plane(k2h, e_half);  // E_2 K2, reused twice
  SpectralVelocityField uc = combine(u, k1, -dt);
  scale_by_plane(uc, e_full);
  add_scaled(uc, k2h, 2.0 * dt);
  uc.set_projected(true);
  SpectralVelocityField k3 = explicit_tendency(uc, p, a_eff, include_damping);
  SpectralVelocityField out = combine(u, k1, dt / 6.0);
  scale_by_plane(out, e_full);
  add_scaled(out, k2h, 2.0 * dt / 3.0);
  add_scaled(out, k3, dt / 6.0);
  out.set_projected(true);
  return out;
}

SpectralVelocityField damping_exact_with(const SpectralVelocityField& u, double a_eff,
                                         double alpha, double t) {
  if (a_eff == 0.0 || t == 0.0) return u;
  const GridSpec& g = *u.grid();
  PhysicalField v = inverse_transform(u);
  const std::size_t n = g.phys_size();
  double* v0 = v.component(0);
  double* v1 = v.component(1);
  double* v2 = v.component(2);
  const double expo = -1.0 / (2.0 * alpha);
  for (std::size_t x = 0; x < n; ++x) {
    const double s2 = v0[x] * v0[x] + v1[x] * v1[x] + v2[x] * v2[x];
    // |u(t)|/|u0| = (1 + 2 a alpha t |u0|^{2 alpha})^{-1/(2 alpha)}
    const double phi = std::pow(1.0 + 2.0 * a_eff * alpha * t * std::pow(s2, alpha), expo);
    v0[x] *= phi;
    v1[x] *= phi;
    v2[x] *= phi;
  }
  SpectralVelocityField s = forward_transform_vector(v);
  dealias_in_place(s);
  return leray_project(s);
}

}  // namespace

SpectralVelocityField convection_term(const SpectralVelocityField& u) {
  require_projected(u, "convection_term");
  PhysicalField nl = nonlinear_physical(u, 0.0, 1.0, false);
  SpectralVelocityField out = forward_transform_vector(nl);
  dealias_in_place(out);
  out.set_projected(false);
  return out;
}

SpectralVelocityField damping_term(const SpectralVelocityField& u, const PhysicsParams& p) {
  require_projected(u, "damping_term");
  const GridSpec& g = *u.grid();
  PhysicalField v = inverse_transform(u);
  PhysicalField w(u.grid(), 3);
  const std::size_t n = g.phys_size();
  const double* v0 = v.component(0);
  const double* v1 = v.component(1);
  const double* v2 = v.component(2);
  for (std::size_t x = 0; x < n; ++x) {
    const double s2 = v0[x] * v0[x] + v1[x] * v1[x] + v2[x] * v2[x];
    const double f = p.a * std::pow(s2, p.alpha);
    w.component(0)[x] = f * v0[x];
    w.component(1)[x] = f * v1[x];
    w.component(2)[x] = f * v2[x];
  }
  SpectralVelocityField out = forward_transform_vector(w);
  dealias_in_place(out);
  out.set_projected(false);
  return out;
}

SpectralVelocityField rhs(const SpectralVelocityField& u, const PhysicsParams& p) {
  require_projected(u, "rhs");
  SpectralVelocityField out = explicit_tendency(u, p, p.a, true);
  const GridSpec& g = *u.grid();
  const int nk1 = g.nk1();
  for (int c = 0; c < 3; ++c) {
    Complex* d = out.component(c);
    const Complex* s = u.component(c);
    for (int i3 = 0; i3 < g.n3(); ++i3) {
      for (int i2 = 0; i2 < g.n2(); ++i2) {
        const std::size_t row = g.spec_index(0, i2, i3);
        for (int i1 = 0; i1 < nk1; ++i1) {
          const double kh2 = g.k1(i1) * g.k1(i1) + g.k2(i2) * g.k2(i2);
          d[row + i1] -= p.nu * kh2 * s[row + i1];
        }
      }
    }
  }
  out.set_projected(true);
  return out;
}

SpectralVelocityField damping_exact_substep(const SpectralVelocityField& u,
                                            const PhysicsParams& p, double t) {
  require_projected(u, "damping_exact_substep");
  if (!(t >= 0.0)) throw std::invalid_argument("damping_exact_substep: t must be >= 0");
  return damping_exact_with(u, p.a, p.alpha, t);
}

SpectralVelocityField step(const SpectralVelocityField& u, const PhysicsParams& p,
                           const StepperConfig& cfg) {
  require_projected(u, "step");
  cfg.validate();
  const double a_eff = cfg.flip_damping_sign ? -p.a : p.a;

  SpectralVelocityField out(u.grid());
  if (p.a > 0.0 && cfg.damping_mode == DampingMode::exact_split) {
    SpectralVelocityField half = damping_exact_with(u, a_eff, p.alpha, 0.5 * cfg.dt);
    SpectralVelocityField mid = advance_rk(half, p, cfg, a_eff, false);
    out = damping_exact_with(mid, a_eff, p.alpha, 0.5 * cfg.dt);
  } else {
    out = advance_rk(u, p, cfg, a_eff, p.a > 0.0);
  }

  if (!finite_state(out)) {
    throw blowup_error("step: non-finite velocity state");
  }
  return out;
}

double cfl_dt(const SpectralVelocityField& u, const PhysicsParams& p,
              const StepperConfig& cfg) {
  const GridSpec& g = *u.grid();
  PhysicalField v = inverse_transform(u);
  const std::size_t n = g.phys_size();
  double vmax[3] = {0.0, 0.0, 0.0};
  double s2max = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double s2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double a = std::abs(v.component(c)[x]);
      if (a > vmax[c]) vmax[c] = a;
      s2 += a * a;
    }
    if (s2 > s2max) s2max = s2;
  }
  if (s2max == 0.0) return cfg.dt_max;

  double limit = std::numeric_limits<double>::infinity();
  for (int c = 0; c < 3; ++c) {
    if (vmax[c] > 0.0) limit = std::min(limit, g.dx(c + 1) / vmax[c]);
  }
  if (p.a > 0.0 && cfg.damping_mode == DampingMode::explicit_term) {
    limit = std::min(limit, 1.0 / (p.a * std::pow(s2max, p.alpha)));
  }
  return std::min(cfg.cfl_safety * limit, cfg.dt_max);
}

PressureField solve_pressure(const SpectralVelocityField& u, const PhysicsParams& p) {
  require_projected(u, "solve_pressure");
  const GridSpec& g = *u.grid();
  PhysicalField nl = nonlinear_physical(u, p.a, p.alpha, true);
  SpectralVelocityField s = forward_transform_vector(nl);
  dealias_in_place(s);

  SpectralField ph(u.grid());
  const int nk1 = g.nk1();
  for (int i3 = 0; i3 < g.n3(); ++i3) {
    const bool ny3 = std::abs(g.mode3(i3)) == g.n3() / 2;
    for (int i2 = 0; i2 < g.n2(); ++i2) {
      const bool ny2 = std::abs(g.mode2(i2)) == g.n2() / 2;
      const std::size_t row = g.spec_index(0, i2, i3);
      for (int i1 = 0; i1 < nk1; ++i1) {
        if (i1 == 0 && g.mode2(i2) == 0 && g.mode3(i3) == 0) continue;  // zero mean
        if (i1 == nk1 - 1 || ny2 || ny3) continue;
        const std::size_t idx = row + i1;
        const double k1 = g.k1(i1);
        const double k2 = g.k2(i2);
        const double k3 = g.k3(i3);
        const double kk = k1 * k1 + k2 * k2 + k3 * k3;
        const Complex dot = k1 * s.component(0)[idx] + k2 * s.component(1)[idx] +
                            k3 * s.component(2)[idx];
        // Lap p = -div(nl)  =>  p_hat = i (k . nl_hat) / |k|^2
        ph.data()[idx] = Complex(-dot.imag(), dot.real()) / kk;
      }
    }
  }
  return PressureField{inverse_transform(ph)};
}

}  // namespace abfdns
