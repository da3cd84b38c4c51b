#include "abfdns/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace abfdns {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class W>
double mode_sum(const GridSpec& g, const Complex* c, W&& weight) {
  double acc = 0.0;
  const int nk1 = g.nk1();
  for (int i3 = 0; i3 < g.n3(); ++i3) {
    for (int i2 = 0; i2 < g.n2(); ++i2) {
      const std::size_t row = g.spec_index(0, i2, i3);
      for (int i1 = 0; i1 < nk1; ++i1) {
        acc += g.mode_weight(i1) * weight(i1, i2, i3) * std::norm(c[row + i1]);
      }
    }
  }
  return acc;
}

template <class W>
double mode_sum(const GridSpec& g, const SpectralVelocityField& u, W&& weight) {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) acc += mode_sum(g, u.component(c), weight);
  return acc;
}

double magnitude(const PhysicalField& f, std::size_t x) {
  if (f.components() == 1) return std::abs(f.component(0)[x]);
  const double a = f.component(0)[x];
  const double b = f.component(1)[x];
  const double c = f.component(2)[x];
  return std::sqrt(a * a + b * b + c * c);
}

}  // namespace

double l2_norm_sq(const SpectralField& c) {
  const GridSpec& g = *c.grid();
  return g.volume() * mode_sum(g, c.data(), [](int, int, int) { return 1.0; });
}

double l2_norm_sq(const SpectralVelocityField& u) {
  const GridSpec& g = *u.grid();
  return g.volume() * mode_sum(g, u, [](int, int, int) { return 1.0; });
}

double grad_h_norm_sq(const SpectralVelocityField& u) {
  const GridSpec& g = *u.grid();
  return g.volume() * mode_sum(g, u, [&g](int i1, int i2, int) {
    return g.dk1(i1) * g.dk1(i1) + g.dk2(i2) * g.dk2(i2);
  });
}

double grad_h_norm_sq(const SpectralField& c) {
  const GridSpec& g = *c.grid();
  return g.volume() * mode_sum(g, c.data(), [&g](int i1, int i2, int) {
    return g.dk1(i1) * g.dk1(i1) + g.dk2(i2) * g.dk2(i2);
  });
}

double dz_norm_sq(const SpectralVelocityField& u) {
  const GridSpec& g = *u.grid();
  return g.volume() *
         mode_sum(g, u, [&g](int, int, int i3) { return g.dk3(i3) * g.dk3(i3); });
}

double dz_norm_sq(const SpectralField& c) {
  const GridSpec& g = *c.grid();
  return g.volume() *
         mode_sum(g, c.data(), [&g](int, int, int i3) { return g.dk3(i3) * g.dk3(i3); });
}

double grad_h_dz_norm_sq(const SpectralVelocityField& u) {
  const GridSpec& g = *u.grid();
  return g.volume() * mode_sum(g, u, [&g](int i1, int i2, int i3) {
    const double kh2 = g.dk1(i1) * g.dk1(i1) + g.dk2(i2) * g.dk2(i2);
    return kh2 * g.dk3(i3) * g.dk3(i3);
  });
}

double grad_norm_sq(const SpectralVelocityField& u) {
  const GridSpec& g = *u.grid();
  return g.volume() * mode_sum(g, u, [&g](int i1, int i2, int i3) {
    return g.dk1(i1) * g.dk1(i1) + g.dk2(i2) * g.dk2(i2) + g.dk3(i3) * g.dk3(i3);
  });
}

double grad_norm_sq(const SpectralField& c) {
  const GridSpec& g = *c.grid();
  return g.volume() * mode_sum(g, c.data(), [&g](int i1, int i2, int i3) {
    return g.dk1(i1) * g.dk1(i1) + g.dk2(i2) * g.dk2(i2) + g.dk3(i3) * g.dk3(i3);
  });
}

double lp_norm(const PhysicalField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  const GridSpec& g = *f.grid();
  const std::size_t n = g.phys_size();
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t x = 0; x < n; ++x) m = std::max(m, magnitude(f, x));
    return m;
  }
  const double cell = g.volume() / static_cast<double>(n);
  double acc = 0.0;
  if (p == 2.0) {
    for (std::size_t x = 0; x < n; ++x) {
      const double m = magnitude(f, x);
      acc += m * m;
    }
  } else {
    for (std::size_t x = 0; x < n; ++x) acc += std::pow(magnitude(f, x), p);
  }
  return std::pow(acc * cell, 1.0 / p);
}

double anisotropic_sobolev_norm(const SpectralField& c, double s, double s_prime,
                                bool homogeneous) {
  const GridSpec& g = *c.grid();
  const double sum = mode_sum(g, c.data(), [&](int i1, int i2, int i3) {
    const double kh2 = g.k1(i1) * g.k1(i1) + g.k2(i2) * g.k2(i2);
    const double kv2 = g.k3(i3) * g.k3(i3);
    if (homogeneous) {
      if (kh2 == 0.0 && kv2 == 0.0) return 0.0;  // zero mode excluded
      return std::pow(kh2, s) * std::pow(kv2, s_prime);
    }
    return std::pow(1.0 + kh2, s) * std::pow(1.0 + kv2, s_prime);
  });
  return std::sqrt(g.volume() * sum);
}

double anisotropic_sobolev_norm(const SpectralVelocityField& u, double s, double s_prime,
                                bool homogeneous) {
  double acc = 0.0;
  for (int c = 0; c < 3; ++c) {
    SpectralField comp(u.grid());
    std::copy(u.component(c), u.component(c) + u.grid()->spec_size(), comp.data());
    const double nc = anisotropic_sobolev_norm(comp, s, s_prime, homogeneous);
    acc += nc * nc;
  }
  return std::sqrt(acc);
}

namespace {

double outer_accumulate(const std::vector<double>& inner, double p, double cell) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : inner) m = std::max(m, v);
    return m;
  }
  double acc = 0.0;
  for (double v : inner) acc += std::pow(v, p);
  return std::pow(acc * cell, 1.0 / p);
}

}  // namespace

double mixed_norm(const PhysicalField& f, double p, double q, MixedOrder order) {
  if (!(p >= 1.0) || !(q >= 1.0)) {
    throw std::invalid_argument("mixed_norm: exponents must be >= 1 (or infinity)");
  }
  const GridSpec& g = *f.grid();
  const int n1 = g.n1();
  const int n2 = g.n2();
  const int n3 = g.n3();
  const double d3 = g.dx(3);
  const double dA = g.dx(1) * g.dx(2);

  if (order == MixedOrder::h_then_v) {
    // inner L^q over x3 per horizontal position, outer L^p over (x1,x2)
    std::vector<double> inner(static_cast<std::size_t>(n1) * n2, 0.0);
    for (int i2 = 0; i2 < n2; ++i2) {
      for (int i1 = 0; i1 < n1; ++i1) {
        double acc = 0.0;
        double sup = 0.0;
        for (int i3 = 0; i3 < n3; ++i3) {
          const double m = magnitude(f, g.phys_index(i1, i2, i3));
          if (std::isinf(q)) {
            sup = std::max(sup, m);
          } else {
            acc += std::pow(m, q);
          }
        }
        inner[static_cast<std::size_t>(i2) * n1 + i1] =
            std::isinf(q) ? sup : std::pow(acc * d3, 1.0 / q);
      }
    }
    return outer_accumulate(inner, p, dA);
  }

  // inner L^p over (x1,x2) per slice, outer L^q over x3
  std::vector<double> inner(n3, 0.0);
  for (int i3 = 0; i3 < n3; ++i3) {
    double acc = 0.0;
    double sup = 0.0;
    for (int i2 = 0; i2 < n2; ++i2) {
      for (int i1 = 0; i1 < n1; ++i1) {
        const double m = magnitude(f, g.phys_index(i1, i2, i3));
        if (std::isinf(p)) {
          sup = std::max(sup, m);
        } else {
          acc += std::pow(m, p);
        }
      }
    }
    inner[i3] = std::isinf(p) ? sup : std::pow(acc * dA, 1.0 / p);
  }
  return outer_accumulate(inner, q, d3);
}

std::vector<double> energy_budget(std::span<const DiagnosticsRecord> records,
                                  const PhysicsParams& p) {
  if (records.size() < 2) {
    throw std::invalid_argument("energy_budget: need at least 2 records");
  }
  std::vector<double> res(records.size(), 0.0);
  double ig = 0.0;
  double id = 0.0;
  res[0] = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const double h = records[i].t - records[i - 1].t;
    ig += 0.5 * h * (records[i - 1].grad_h + records[i].grad_h);
    id += 0.5 * h * (records[i - 1].damping_lp + records[i].damping_lp);
    res[i] = records[i].energy + 2.0 * p.nu * ig + 2.0 * p.a * id - records[0].energy;
  }
  return res;
}

VerticalBudgetReport vertical_budget(std::span<const DiagnosticsRecord> records,
                                     const PhysicsParams& p) {
  if (records.size() < 2) {
    throw std::invalid_argument("vertical_budget: need at least 2 records");
  }
  for (const auto& r : records) {
    if (!std::isfinite(r.dz_energy) || !std::isfinite(r.grad_h_dz) ||
        !std::isfinite(r.weighted_dz)) {
      throw std::invalid_argument("vertical_budget: non-finite columns");
    }
  }

  VerticalBudgetReport rep;
  const double dz0 = records[0].dz_energy;
  double peak = 0.0;
  for (const auto& r : records) peak = std::max(peak, r.dz_energy);

  // x3-independent data: the bound degenerates to "stays flat".
  const double scale0 = std::max(records[0].energy, 1.0);
  if (dz0 <= 1e-14 * scale0) {
    rep.eta_empirical = 0.0;
    rep.bound_satisfied = peak <= 1e-10;
    rep.margin = 1e-10 - peak;
    return rep;
  }

  // (i) smallest eta admissible for the discrete differential inequality.
  double eta = 0.0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    const double h = b.t - a.t;
    if (!(h > 0.0)) continue;
    const double lhs = (b.dz_energy - a.dz_energy) / h +
                       p.nu * 0.5 * (a.grad_h_dz + b.grad_h_dz) +
                       p.a * 0.5 * (a.weighted_dz + b.weighted_dz);
    const double bar = 0.5 * (a.dz_energy + b.dz_energy);
    if (bar > 1e-8 * peak) eta = std::max(eta, lhs / bar);
  }
  eta = std::max(eta, 0.0);
  rep.eta_empirical = eta;

  // (ii) integrated bound with (1 + e^{eta t}); 1% allowance absorbs the
  // trapezoid slop of the discrete Gronwall comparison.
  const double t0 = records[0].t;
  double ig = 0.0;
  double iw = 0.0;
  double margin = kInf;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& a = records[i - 1];
    const auto& b = records[i];
    const double h = b.t - a.t;
    ig += 0.5 * h * (a.grad_h_dz + b.grad_h_dz);
    iw += 0.5 * h * (a.weighted_dz + b.weighted_dz);
    const double lhs = b.dz_energy + p.nu * ig + p.a * iw;
    const double bound = (1.0 + std::exp(eta * (b.t - t0))) * dz0 * 1.01;
    margin = std::min(margin, (bound - lhs) / dz0);
  }
  rep.margin = margin;
  rep.bound_satisfied = margin >= 0.0;
  return rep;
}

double divergence_residual(const SpectralVelocityField& u) {
  PhysicalField d = inverse_transform(divergence(u));
  const std::size_t n = u.grid()->phys_size();
  double m = 0.0;
  for (std::size_t x = 0; x < n; ++x) m = std::max(m, std::abs(d.component(0)[x]));
  return m;
}

DiagnosticsRecord measure(const SpectralVelocityField& u, const PhysicsParams& p, double t) {
  const GridSpec& g = *u.grid();
  DiagnosticsRecord r;
  r.t = t;
  r.energy = l2_norm_sq(u);
  r.grad_h = grad_h_norm_sq(u);
  r.dz_energy = dz_norm_sq(u);
  r.grad_h_dz = grad_h_dz_norm_sq(u);

  PhysicalField v = inverse_transform(u);
  PhysicalField dz = inverse_transform(derivative(u, 3));
  const std::size_t n = g.phys_size();
  const double cell = g.volume() / static_cast<double>(n);
  double lp = 0.0;
  double wdz = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    double s2 = 0.0;
    double z2 = 0.0;
    for (int c = 0; c < 3; ++c) {
      s2 += v.component(c)[x] * v.component(c)[x];
      z2 += dz.component(c)[x] * dz.component(c)[x];
    }
    lp += std::pow(s2, p.alpha + 1.0);
    wdz += std::pow(s2, p.alpha) * z2;
  }
  r.damping_lp = lp * cell;
  r.weighted_dz = wdz * cell;
  r.div_residual = divergence_residual(u);
  r.budget_residual = std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace abfdns
