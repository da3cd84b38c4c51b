#include "abfdns/inequalities.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "abfdns/diagnostics.hpp"
#include "abfdns/field.hpp"
#include "abfdns/grid.hpp"
#include "abfdns/initial_conditions.hpp"
#include "abfdns/spectral.hpp"

namespace abfdns {

namespace {

constexpr double kHardTol = 1e-8;  // relative tolerance for constant-1 checks
constexpr double kInf = std::numeric_limits<double>::infinity();

std::shared_ptr<const GridSpec> ensemble_grid(int res) {
  const double L = 2.0 * std::numbers::pi;
  return make_grid(res, res, {L, L, L});
}

template <class F>
void for_each_scalar(const EnsembleConfig& cfg, bool horizontal_mean_free, F&& fn) {
  std::uint64_t seed = cfg.seed;
  for (int res : cfg.resolutions) {
    auto grid = ensemble_grid(res);
    for (int s = 0; s < cfg.samples_per_resolution; ++s) {
      fn(random_scalar(grid, cfg.spectrum_slope, seed++, horizontal_mean_free));
    }
  }
}

template <class F>
void for_each_velocity(const EnsembleConfig& cfg, F&& fn) {
  std::uint64_t seed = cfg.seed;
  for (int res : cfg.resolutions) {
    auto grid = ensemble_grid(res);
    for (int s = 0; s < cfg.samples_per_resolution; ++s) {
      fn(random_divergence_free(grid, cfg.spectrum_slope, seed++));
    }
  }
}

/// Raw pointwise (u.grad)u samples, no dealiasing or re-transform, so the
/// discrete Hoelder chain applies exactly to the sums.
PhysicalField raw_convection_samples(const SpectralVelocityField& u) {
  const GridSpec& g = *u.grid();
  PhysicalField v = inverse_transform(u);
  PhysicalField conv(u.grid(), 3);
  const std::size_t n = g.phys_size();
  for (int j = 1; j <= 3; ++j) {
    PhysicalField dj = inverse_transform(derivative(u, j));
    const double* vj = v.component(j - 1);
    for (int i = 0; i < 3; ++i) {
      double* out = conv.component(i);
      const double* d = dj.component(i);
      for (std::size_t x = 0; x < n; ++x) out[x] += vj[x] * d[x];
    }
  }
  return conv;
}

InequalityReport soft_report(const std::string& name, long n, double max_ratio) {
  InequalityReport r;
  r.name = name;
  r.n_samples = n;
  r.max_ratio = max_ratio;
  r.empirical_constant = max_ratio;
  r.violated = !std::isfinite(max_ratio);
  return r;
}

InequalityReport hard_report(const std::string& name, long n, double max_ratio) {
  InequalityReport r;
  r.name = name;
  r.n_samples = n;
  r.max_ratio = max_ratio;
  r.empirical_constant = max_ratio;
  r.violated = !std::isfinite(max_ratio) || max_ratio > 1.0 + kHardTol;
  return r;
}

}  // namespace

InequalityReport check_ladyzhenskaya(const EnsembleConfig& cfg) {
  double max_ratio = 0.0;
  long n = 0;
  for_each_scalar(cfg, false, [&](const SpectralField& psi) {
    const double n2 = std::sqrt(l2_norm_sq(psi));
    const double ng = std::sqrt(grad_norm_sq(psi));
    if (n2 <= 0.0 || ng <= 0.0) return;  // zero field skipped
    const double n4 = lp_norm(inverse_transform(psi), 4.0);
    max_ratio = std::max(max_ratio, n4 / (std::pow(n2, 0.25) * std::pow(ng, 0.75)));
    ++n;
  });
  return soft_report("ladyzhenskaya", n, max_ratio);
}

InequalityReport check_dual_bound(const EnsembleConfig& cfg) {
  double max_ratio = 0.0;
  long n = 0;
  for_each_velocity(cfg, [&](const SpectralVelocityField& u) {
    const double rhs = lp_norm(inverse_transform(u), 4.0) * std::sqrt(grad_norm_sq(u));
    if (rhs <= 0.0) return;
    const double lhs = lp_norm(raw_convection_samples(u), 4.0 / 3.0);
    max_ratio = std::max(max_ratio, lhs / rhs);
    ++n;
  });
  return hard_report("dual_bound", n, max_ratio);
}

InequalityReport check_interpolation_p1(const EnsembleConfig& cfg) {
  double max_ratio = 0.0;
  long n = 0;
  long skipped = 0;
  for_each_scalar(cfg, true, [&](const SpectralField& psi) {
    const double n2 = std::sqrt(l2_norm_sq(psi));
    const double nh = std::sqrt(grad_h_norm_sq(psi));
    if (n2 <= 0.0 || nh <= 0.0) {
      ++skipped;  // horizontally constant: both sides degenerate
      return;
    }
    const double lhs = mixed_norm(inverse_transform(psi), 4.0, 2.0, MixedOrder::v_then_h);
    max_ratio = std::max(max_ratio, lhs / (std::sqrt(nh) * std::sqrt(n2)));
    ++n;
  });
  return soft_report("interpolation_p1", n, max_ratio);
}

InequalityReport check_trace_p2(const EnsembleConfig& cfg) {
  double max_ratio = 0.0;
  long n = 0;
  for_each_scalar(cfg, false, [&](const SpectralField& psi) {
    const GridSpec& g = *psi.grid();
    const double l2sq = l2_norm_sq(psi);
    const double dzsq = dz_norm_sq(psi);
    const double sup_slice = mixed_norm(inverse_transform(psi), 2.0, kInf, MixedOrder::v_then_h);
    const double lhs = sup_slice * sup_slice;
    const double rhs = l2sq / g.length(3) + 2.0 * std::sqrt(l2sq) * std::sqrt(dzsq);
    if (rhs <= 0.0) return;
    max_ratio = std::max(max_ratio, lhs / rhs);
    ++n;
  });
  return hard_report("trace_p2", n, max_ratio);
}

InequalityReport check_trace_p2_zero_slice(const EnsembleConfig& cfg) {
  double max_ratio = 0.0;
  long n = 0;
  for_each_scalar(cfg, false, [&](const SpectralField& psi) {
    const GridSpec& g = *psi.grid();
    // sin^4 window has spectral width 2, so |windowed|^2 stays resolved and
    // the field vanishes identically on the x3 = 0 plane.
    PhysicalField f = inverse_transform(psi);
    for (int i3 = 0; i3 < g.n3(); ++i3) {
      const double w = std::pow(std::sin(std::numbers::pi * g.coord(3, i3) / g.length(3)), 4);
      for (int i2 = 0; i2 < g.n2(); ++i2) {
        for (int i1 = 0; i1 < g.n1(); ++i1) {
          f.component(0)[g.phys_index(i1, i2, i3)] *= w;
        }
      }
    }
    SpectralField wf = forward_transform(f);
    const double l2sq = l2_norm_sq(wf);
    const double dzsq = dz_norm_sq(wf);
    const double rhs = 2.0 * std::sqrt(l2sq) * std::sqrt(dzsq);
    if (rhs <= 0.0) return;
    const double sup_slice = mixed_norm(f, 2.0, kInf, MixedOrder::v_then_h);
    max_ratio = std::max(max_ratio, sup_slice * sup_slice / rhs);
    ++n;
  });
  return hard_report("trace_p2_zero_slice", n, max_ratio);
}

InequalityReport check_damping_monotonicity(std::uint64_t n_pairs, double alpha,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> logscale(-3.0, 3.0);

  double kappa = kInf;
  bool violated = false;
  long used = 0;
  for (std::uint64_t i = 0; i < n_pairs; ++i) {
    double u[3], v[3];
    for (auto& x : u) x = normal(rng);
    for (auto& x : v) x = normal(rng);
    const double scale = std::exp(logscale(rng));
    double nu2 = 0.0, nv2 = 0.0, d2 = 0.0, dot = 0.0;
    for (int c = 0; c < 3; ++c) {
      u[c] *= scale;
      v[c] *= scale;
      nu2 += u[c] * u[c];
      nv2 += v[c] * v[c];
      const double d = u[c] - v[c];
      d2 += d * d;
    }
    const double fu = std::pow(nu2, alpha);
    const double fv = std::pow(nv2, alpha);
    for (int c = 0; c < 3; ++c) dot += (fu * u[c] - fv * v[c]) * (u[c] - v[c]);
    const double denom = d2 * std::pow(std::sqrt(nu2) + std::sqrt(nv2), 2.0 * alpha);
    if (denom <= 0.0) continue;  // u == v (or both zero): no information
    ++used;
    if (dot < -kHardTol * denom) violated = true;
    kappa = std::min(kappa, dot / denom);
  }

  InequalityReport r;
  r.name = "damping_monotonicity";
  r.n_samples = used;
  r.max_ratio = (used > 0) ? kappa : 0.0;
  r.empirical_constant = r.max_ratio;
  r.violated = violated || used == 0;
  return r;
}

InequalityReport check_triple_product(const EnsembleConfig& cfg, double alpha, double eps0,
                                      double eps1) {
  if (!(eps0 > 0.0) || !(eps1 > 0.0)) {
    throw std::invalid_argument("check_triple_product: eps0, eps1 must be > 0");
  }
  if (!(alpha > 1.0)) {
    throw std::invalid_argument("check_triple_product: alpha must be > 1");
  }

  double max_ratio = 0.0;
  long n = 0;
  std::uint64_t seed = cfg.seed;
  for (int res : cfg.resolutions) {
    auto grid = ensemble_grid(res);
    const GridSpec& g = *grid;
    const double cell = g.volume() / static_cast<double>(g.phys_size());
    for (int s = 0; s < cfg.samples_per_resolution; ++s) {
      PhysicalField f = inverse_transform(random_scalar(grid, cfg.spectrum_slope, seed++));
      PhysicalField gg = inverse_transform(random_scalar(grid, cfg.spectrum_slope, seed++));
      PhysicalField h = inverse_transform(random_scalar(grid, cfg.spectrum_slope, seed++));
      double lhs = 0.0, fg2 = 0.0, g2 = 0.0, h2 = 0.0;
      const std::size_t np = g.phys_size();
      for (std::size_t x = 0; x < np; ++x) {
        const double fa = std::abs(f.component(0)[x]);
        const double ga = gg.component(0)[x];
        const double ha = h.component(0)[x];
        lhs += fa * std::abs(ga) * std::abs(ha);
        fg2 += std::pow(fa, 2.0 * alpha) * ga * ga;
        g2 += ga * ga;
        h2 += ha * ha;
      }
      lhs *= cell;
      fg2 *= cell;
      g2 *= cell;
      h2 *= cell;
      const double rhs = (eps1 / (4.0 * eps0)) * fg2 +
                         (std::pow(eps1, 1.0 / (1.0 - alpha)) / (4.0 * eps0)) * g2 +
                         eps0 * h2;
      if (rhs <= 0.0) continue;
      max_ratio = std::max(max_ratio, lhs / rhs);
      ++n;
    }
  }
  return hard_report("triple_product", n, max_ratio);
}

InequalityReport check_triple_product(const EnsembleConfig& cfg, double alpha,
                                      const PhysicsParams& p, double gamma_hat) {
  if (!(gamma_hat > 0.0)) {
    throw std::invalid_argument("check_triple_product: gamma_hat must be > 0");
  }
  const double eps0 = p.nu / (2.0 * gamma_hat);
  const double eps1 = p.a * p.nu * (1.0 + 4.0 * alpha) / (gamma_hat * gamma_hat);
  return check_triple_product(cfg, alpha, eps0, eps1);
}

double calibrate_gamma(const EnsembleConfig& cfg, double alpha) {
  if (!(alpha > 1.0)) throw std::invalid_argument("calibrate_gamma: alpha must be > 1");
  const double eps_grid[3] = {0.25, 1.0, 4.0};
  double gamma = 0.0;
  for_each_velocity(cfg, [&](const SpectralVelocityField& u) {
    const GridSpec& g = *u.grid();
    const double cell = g.volume() / static_cast<double>(g.phys_size());
    PhysicalField conv = raw_convection_samples(u);
    PhysicalField dzz = inverse_transform(derivative(derivative(u, 3), 3));
    PhysicalField v = inverse_transform(u);
    PhysicalField dz = inverse_transform(derivative(u, 3));
    const std::size_t n = g.phys_size();
    double t = 0.0, wdz = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      double s2 = 0.0, z2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        t += conv.component(c)[x] * dzz.component(c)[x];
        s2 += v.component(c)[x] * v.component(c)[x];
        z2 += dz.component(c)[x] * dz.component(c)[x];
      }
      wdz += std::pow(s2, alpha) * z2;
    }
    t *= cell;
    wdz *= cell;
    if (t <= 0.0) return;  // sign favors the bound; nothing to calibrate
    const double dzsq = dz_norm_sq(u);
    const double ghdz = grad_h_dz_norm_sq(u);
    for (double e0 : eps_grid) {
      for (double e1 : eps_grid) {
        const double bracket = (e1 / (4.0 * e0)) * wdz +
                               (std::pow(e1, 1.0 / (1.0 - alpha)) / (4.0 * e0)) * dzsq +
                               e0 * ghdz;
        if (bracket > 0.0) gamma = std::max(gamma, t / bracket);
      }
    }
  });
  return gamma;
}

void write_reports_csv(const std::string& path, std::span<const InequalityReport> reports) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_reports_csv: cannot open " + path);
  out << "name,n_samples,max_ratio,empirical_constant,violated\n";
  char buf[64];
  for (const auto& r : reports) {
    out << r.name << ',' << r.n_samples << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.max_ratio);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", r.empirical_constant);
    out << buf << ',' << (r.violated ? 1 : 0) << '\n';
  }
}

}  // namespace abfdns
