#include <doctest.h>

#include "abfdns/dynamics.hpp"
#include "abfdns/initial_conditions.hpp"
#include "test_helpers.hpp"

using namespace abfdns;
using namespace abfdns::test;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<DiagnosticsRecord> collect(SpectralVelocityField u, const PhysicsParams& p,
                                       const StepperConfig& cfg, long long steps,
                                       long long cadence) {
  std::vector<DiagnosticsRecord> out;
  out.push_back(measure(u, p, 0.0));
  for (long long k = 1; k <= steps; ++k) {
    u = step(u, p, cfg);
    if (k % cadence == 0 || k == steps) out.push_back(measure(u, p, k * cfg.dt));
  }
  return out;
}

StepperConfig stepper(double dt) {
  StepperConfig cfg;
  cfg.dt = dt;
  return cfg;
}

}  // namespace

TEST_CASE("Lp norms by midpoint quadrature") {
  auto g = grid2pi(16, 16);
  SUBCASE("constants") {
    PhysicalField one = fill_scalar(g, [](double, double, double) { return 1.0; });
    for (double p : {1.0, 2.0, 3.5}) {
      CHECK(lp_norm(one, p) == doctest::Approx(std::pow(2.0 * kPi, 3.0 / p)).epsilon(1e-12));
    }
    CHECK(lp_norm(one, kInf) == doctest::Approx(1.0));
  }
  SUBCASE("cos x1 at p = 2 and p = 4") {
    PhysicalField f = fill_scalar(g, [](double x1, double, double) { return std::cos(x1); });
    CHECK(lp_norm(f, 2.0) ==
          doctest::Approx(std::sqrt(4.0 * std::pow(kPi, 3))).epsilon(1e-12));
    // Hand value: int cos^4 over the box = 3 pi^3, so ||f||_4 = (3 pi^3)^{1/4}.
    CHECK(lp_norm(f, 4.0) == doctest::Approx(std::pow(3.0 * std::pow(kPi, 3), 0.25))
                                 .epsilon(1e-12));
  }
  SUBCASE("p = 4 against a refined 1D quadrature oracle") {
    PhysicalField f = fill_scalar(g, [](double x1, double, double) { return std::cos(x1); });
    const int m = 1000000;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      acc += std::pow(std::cos(2.0 * kPi * (i + 0.5) / m), 4);
    }
    acc *= 2.0 * kPi / m;                       // int_0^{2pi} cos^4 dx1
    const double oracle = std::pow(acc * std::pow(2.0 * kPi, 2), 0.25);
    CHECK(lp_norm(f, 4.0) == doctest::Approx(oracle).epsilon(1e-9));
  }
  SUBCASE("vector fields use the Euclidean magnitude") {
    PhysicalField f = fill_vector(
        g, [](double, double, double) { return 3.0; },
        [](double, double, double) { return 4.0; },
        [](double, double, double) { return 0.0; });
    CHECK(lp_norm(f, 3.0) ==
          doctest::Approx(5.0 * std::pow(2.0 * kPi, 1.0)).epsilon(1e-12));
  }
  SUBCASE("rejects p < 1") {
    PhysicalField f(g, 1);
    CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
  }
}

TEST_CASE("anisotropic Sobolev norms") {
  auto g = grid2pi(16, 16);
  SUBCASE("cos x1 doubles its square at (1,0)") {
    SpectralField c = forward_transform(
        fill_scalar(g, [](double x1, double, double) { return std::cos(x1); }));
    const double l2sq = 4.0 * std::pow(kPi, 3);
    CHECK(anisotropic_sobolev_norm(c, 1.0, 0.0) ==
          doctest::Approx(std::sqrt(2.0 * l2sq)).epsilon(1e-12));
  }
  SUBCASE("cos x3 has no horizontal content") {
    SpectralField c = forward_transform(
        fill_scalar(g, [](double, double, double x3) { return std::cos(x3); }));
    const double l2 = std::sqrt(4.0 * std::pow(kPi, 3));
    for (double s : {0.0, 1.0, 3.7}) {
      CHECK(anisotropic_sobolev_norm(c, s, 0.0) == doctest::Approx(l2).epsilon(1e-12));
    }
  }
  SUBCASE("(0,0) is the L2 norm") {
    SpectralField c = random_scalar(g, -2.0, 41);
    CHECK(anisotropic_sobolev_norm(c, 0.0, 0.0) ==
          doctest::Approx(std::sqrt(l2_norm_sq(c))).epsilon(1e-12));
  }
  SUBCASE("monotone in the weights") {
    SpectralField c = random_scalar(g, -2.0, 42);
    const double n00 = anisotropic_sobolev_norm(c, 0.0, 0.0);
    const double n10 = anisotropic_sobolev_norm(c, 1.0, 0.0);
    const double n11 = anisotropic_sobolev_norm(c, 1.0, 1.0);
    const double n22 = anisotropic_sobolev_norm(c, 2.0, 2.0);
    CHECK(n00 <= n10);
    CHECK(n10 <= n11);
    CHECK(n11 <= n22);
  }
  SUBCASE("homogeneous variant drops the zero mode") {
    PhysicalField f = fill_scalar(
        g, [](double x1, double, double) { return 1.0 + std::cos(x1); });
    SpectralField c = forward_transform(f);
    const double l2sq = 4.0 * std::pow(kPi, 3);  // from the cosine only
    CHECK(anisotropic_sobolev_norm(c, 1.0, 0.0, true) ==
          doctest::Approx(std::sqrt(l2sq)).epsilon(1e-12));
    CHECK(anisotropic_sobolev_norm(c, 0.0, 0.0, false) ==
          doctest::Approx(std::sqrt(12.0 * std::pow(kPi, 3))).epsilon(1e-12));
  }
}

TEST_CASE("mixed norms") {
  auto g = grid2pi(16, 16);
  SUBCASE("constants give the product of length powers") {
    PhysicalField one = fill_scalar(g, [](double, double, double) { return 1.0; });
    CHECK(mixed_norm(one, 2.0, 3.0, MixedOrder::h_then_v) ==
          doctest::Approx(std::pow(2.0 * kPi, 2.0 / 2.0 + 1.0 / 3.0)).epsilon(1e-12));
    CHECK(mixed_norm(one, 4.0, kInf, MixedOrder::h_then_v) ==
          doctest::Approx(std::pow(2.0 * kPi, 0.5)).epsilon(1e-12));
  }
  SUBCASE("separable fields factorize") {
    PhysicalField f = fill_scalar(g, [](double x1, double, double x3) {
      return std::cos(x1) * std::cos(2 * x3);
    });
    // ||f||_{L^p_h(L^q_v)} = ||cos x1||_{L^p_h} ||cos 2x3||_{L^q_v}
    const int m = 4096;
    auto norm1d = [&](double p, double freq, double len) {
      double acc = 0.0;
      for (int i = 0; i < m; ++i) acc += std::pow(std::abs(std::cos(freq * len * (i + 0.5) / m)), p);
      return std::pow(acc * len / m, 1.0 / p);
    };
    const double ph = 3.0, qv = 2.0;
    const double expect_h = norm1d(ph, 1.0, 2.0 * kPi) * std::pow(2.0 * kPi, 1.0 / ph);
    const double expect_v = norm1d(qv, 2.0, 2.0 * kPi);
    CHECK(mixed_norm(f, ph, qv, MixedOrder::h_then_v) ==
          doctest::Approx(expect_h * expect_v).epsilon(1e-6));
  }
  SUBCASE("L^inf_v(L^2_h) of cos x3 is 2 pi") {
    PhysicalField f = fill_scalar(g, [](double, double, double x3) { return std::cos(x3); });
    CHECK(mixed_norm(f, 2.0, kInf, MixedOrder::v_then_h) ==
          doctest::Approx(2.0 * kPi).epsilon(1e-12));
  }
  SUBCASE("brute-force nested-loop oracle on a random field") {
    PhysicalField f = inverse_transform(random_scalar(g, -2.0, 55));
    const GridSpec& gr = *g;
    auto oracle = [&](double p, double q, MixedOrder order) {
      const double d3 = gr.dx(3);
      const double dA = gr.dx(1) * gr.dx(2);
      if (order == MixedOrder::h_then_v) {
        double outer = 0.0, sup_o = 0.0;
        for (int i2 = 0; i2 < gr.n2(); ++i2) {
          for (int i1 = 0; i1 < gr.n1(); ++i1) {
            double inner = 0.0, sup_i = 0.0;
            for (int i3 = 0; i3 < gr.n3(); ++i3) {
              const double a = std::abs(f.at(0, i1, i2, i3));
              if (std::isinf(q)) sup_i = std::max(sup_i, a);
              else inner += std::pow(a, q);
            }
            const double in_val = std::isinf(q) ? sup_i : std::pow(inner * d3, 1.0 / q);
            if (std::isinf(p)) sup_o = std::max(sup_o, in_val);
            else outer += std::pow(in_val, p);
          }
        }
        return std::isinf(p) ? sup_o : std::pow(outer * dA, 1.0 / p);
      }
      double outer = 0.0, sup_o = 0.0;
      for (int i3 = 0; i3 < gr.n3(); ++i3) {
        double inner = 0.0, sup_i = 0.0;
        for (int i2 = 0; i2 < gr.n2(); ++i2) {
          for (int i1 = 0; i1 < gr.n1(); ++i1) {
            const double a = std::abs(f.at(0, i1, i2, i3));
            if (std::isinf(p)) sup_i = std::max(sup_i, a);
            else inner += std::pow(a, p);
          }
        }
        const double in_val = std::isinf(p) ? sup_i : std::pow(inner * dA, 1.0 / p);
        if (std::isinf(q)) sup_o = std::max(sup_o, in_val);
        else outer += std::pow(in_val, q);
      }
      return std::isinf(q) ? sup_o : std::pow(outer * d3, 1.0 / q);
    };
    for (auto [p, q] : {std::pair{2.0, 4.0}, std::pair{4.0, 2.0}, std::pair{3.0, kInf},
                        std::pair{kInf, 3.0}}) {
      for (auto order : {MixedOrder::h_then_v, MixedOrder::v_then_h}) {
        CHECK(mixed_norm(f, p, q, order) == doctest::Approx(oracle(p, q, order)).epsilon(1e-12));
      }
    }
  }
  SUBCASE("rejects invalid exponents") {
    PhysicalField f(g, 1);
    CHECK_THROWS_AS(mixed_norm(f, 0.5, 2.0, MixedOrder::h_then_v), std::invalid_argument);
    CHECK_THROWS_AS(mixed_norm(f, 2.0, 0.0, MixedOrder::v_then_h), std::invalid_argument);
  }
}

TEST_CASE("energy budget") {
  SUBCASE("needs two records") {
    std::vector<DiagnosticsRecord> one(1);
    CHECK_THROWS_AS(energy_budget(one, PhysicsParams(0.1, 0.0, 1.5)), std::invalid_argument);
  }
  SUBCASE("all sinks off: residual is the discrete drift") {
    auto g = grid2pi(16, 16);
    const PhysicsParams p(0.0, 0.0, 1.0);
    SpectralVelocityField u0 = random_divergence_free(g, -3.0, 3);
    const double scale = 0.5 / std::sqrt(l2_norm_sq(u0));
    for (int c = 0; c < 3; ++c) {
      for (auto& z : u0.coeffs(c)) z *= scale;
    }
    auto records = collect(u0, p, stepper(1e-3), 100, 1);
    auto res = energy_budget(records, p);
    CHECK(std::abs(res.back()) <= 1e-8 * records[0].energy);
  }
  SUBCASE("uniform damping-only run against the closed form") {
    auto g = grid2pi(8, 8);
    const PhysicsParams p(0.0, 1.0, 1.0);
    SpectralVelocityField u0 = uniform_velocity(g, {1.0, 0.0, 0.0});
    auto records = collect(u0, p, stepper(1e-3), 1000, 1);
    const double vol = g->volume();
    for (const auto& r : records) {
      const double mag2 = 1.0 / (1.0 + 2.0 * r.t);  // |u(t)|^2 for alpha = a = 1
      CHECK(r.energy == doctest::Approx(vol * mag2).epsilon(1e-10));
    }
    // The continuum budget closes identically; the discrete residual is the
    // trapezoid error of int |u|^4.
    auto res = energy_budget(records, p);
    CHECK(std::abs(res.back()) <= 1e-6 * records[0].energy);
  }
  SUBCASE("full run closes the budget at desk tolerance") {
    auto g = grid2pi(32, 32);
    const PhysicsParams p(0.05, 1.0, 1.5);
    SpectralVelocityField u0 = taylor_green(g);
    {
      SpectralVelocityField shear = vertical_shear(g);
      for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < u0.coeffs(c).size(); ++i) {
          u0.coeffs(c)[i] += shear.coeffs(c)[i];
        }
      }
    }
    auto records = collect(u0, p, stepper(1e-3), 500, 1);
    auto res = energy_budget(records, p);
    CHECK(std::abs(res.back()) <= 1e-5 * records[0].energy);
    // Regularity gain: the two dissipation integrals are finite and absorb
    // the energy drop per the budget split.
    double ig = 0.0, id = 0.0;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const double h = records[i].t - records[i - 1].t;
      ig += 0.5 * h * (records[i - 1].grad_h + records[i].grad_h);
      id += 0.5 * h * (records[i - 1].damping_lp + records[i].damping_lp);
    }
    const double drop = records[0].energy - records.back().energy;
    CHECK(std::isfinite(ig));
    CHECK(std::isfinite(id));
    CHECK(ig > 0.0);
    CHECK(id > 0.0);
    CHECK(std::abs(2.0 * p.nu * ig + 2.0 * p.a * id - drop) <= 1e-5 * records[0].energy);
    CHECK(records.back().energy < records[0].energy);
  }
}

TEST_CASE("vertical budget") {
  SUBCASE("zero field is trivially satisfied with eta = 0") {
    std::vector<DiagnosticsRecord> records(3);
    records[0].t = 0.0;
    records[1].t = 0.1;
    records[2].t = 0.2;
    auto rep = vertical_budget(records, PhysicsParams(0.1, 1.0, 1.5));
    CHECK(rep.bound_satisfied);
    CHECK(rep.eta_empirical == 0.0);
    CHECK(rep.margin >= 0.0);
  }
  SUBCASE("x3-independent data keep dz_energy at rounding level") {
    auto g = grid2pi(16, 16);
    const PhysicsParams p(0.05, 1.0, 1.5);
    auto records = collect(taylor_green(g), p, stepper(1e-3), 200, 10);
    for (const auto& r : records) CHECK(r.dz_energy <= 1e-10);
    auto rep = vertical_budget(records, p);
    CHECK(rep.bound_satisfied);
  }
  SUBCASE("stronger damping dissipates vertical energy faster") {
    auto g = grid2pi(16, 16);
    std::vector<double> dz_final;
    for (double a : {0.0, 1.0, 10.0}) {
      const PhysicsParams p(0.05, a, 1.5);
      SpectralVelocityField u0 = random_divergence_free(g, -2.0, 99);
      auto records = collect(u0, p, stepper(1e-3), 250, 10);
      auto rep = vertical_budget(records, p);
      CHECK(rep.bound_satisfied);
      dz_final.push_back(records.back().dz_energy);
      if (a > 0.0) {
        // the weighted sink is active
        CHECK(records[1].weighted_dz > 0.0);
      }
    }
    CHECK(dz_final[1] <= dz_final[0]);
    CHECK(dz_final[2] <= dz_final[1]);
  }
  SUBCASE("rejects missing columns") {
    std::vector<DiagnosticsRecord> records(2);
    records[1].t = 0.1;
    records[1].dz_energy = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(vertical_budget(records, PhysicsParams(0.1, 1.0, 1.5)),
                    std::invalid_argument);
  }
}

TEST_CASE("divergence residual") {
  auto g = grid2pi(16, 16);
  SUBCASE("projected fields are clean") {
    CHECK(divergence_residual(random_divergence_free(g, -2.0, 1)) <= 1e-12);
  }
  SUBCASE("unprojected sin x1 has max |div| = 1") {
    SpectralVelocityField u = forward_transform_vector(fill_vector(
        g, [](double x1, double, double) { return std::sin(x1); },
        [](double, double, double) { return 0.0; },
        [](double, double, double) { return 0.0; }));
    CHECK(divergence_residual(u) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero field") {
    CHECK(divergence_residual(SpectralVelocityField(g)) == 0.0);
  }
}

TEST_CASE("duality exponent identity") {
  auto g = grid2pi(16, 16);
  for (double alpha : {1.0, 1.5, 2.0}) {
    SpectralVelocityField u = random_divergence_free(g, -2.0, 61);
    PhysicalField v = inverse_transform(u);
    PhysicalField damp(g, 3);
    const std::size_t n = g->phys_size();
    for (std::size_t x = 0; x < n; ++x) {
      double s2 = 0.0;
      for (int c = 0; c < 3; ++c) s2 += v.component(c)[x] * v.component(c)[x];
      const double f = std::pow(s2, alpha);
      for (int c = 0; c < 3; ++c) damp.component(c)[x] = f * v.component(c)[x];
    }
    const double pdual = 1.0 + 1.0 / (2.0 * alpha + 1.0);
    const double lhs = std::pow(lp_norm(damp, pdual), pdual);
    const double rhs = std::pow(lp_norm(v, 2.0 * alpha + 2.0), 2.0 * alpha + 2.0);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("measure fills every ledger column") {
  auto g = grid2pi(16, 16);
  const PhysicsParams p(0.05, 1.0, 1.5);
  DiagnosticsRecord r = measure(random_divergence_free(g, -2.0, 8), p, 0.25);
  CHECK(r.t == 0.25);
  CHECK(r.energy > 0.0);
  CHECK(r.grad_h > 0.0);
  CHECK(r.damping_lp > 0.0);
  CHECK(r.dz_energy > 0.0);
  CHECK(r.grad_h_dz > 0.0);
  CHECK(r.weighted_dz > 0.0);
  CHECK(r.div_residual <= 1e-12 * std::sqrt(r.energy));
  CHECK(std::isnan(r.budget_residual));
}
