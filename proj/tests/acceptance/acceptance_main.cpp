// Acceptance suite: desk-scale property checks of the solver and its
// verification harness. Each criterion prints one PASS/FAIL line; the
// process exits nonzero if any fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "abfdns/diagnostics.hpp"
#include "abfdns/dynamics.hpp"
#include "abfdns/inequalities.hpp"
#include "abfdns/initial_conditions.hpp"
#include "abfdns/run.hpp"
#include "abfdns/stability.hpp"

using namespace abfdns;

namespace {

constexpr double kPi = std::numbers::pi;
int g_failures = 0;

void record(const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %-38s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::shared_ptr<const GridSpec> grid_n32() {
  const double L = 2.0 * kPi;
  return make_grid(32, 32, {L, L, L});
}

StepperConfig stepper(double dt, TimeScheme scheme = TimeScheme::imex_rk3,
                      DampingMode mode = DampingMode::exact_split) {
  StepperConfig cfg;
  cfg.dt = dt;
  cfg.scheme = scheme;
  cfg.damping_mode = mode;
  return cfg;
}

SpectralVelocityField tg_plus_shear(std::shared_ptr<const GridSpec> g) {
  SpectralVelocityField u = taylor_green(g);
  SpectralVelocityField s = vertical_shear(g);
  for (int c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < u.coeffs(c).size(); ++i) u.coeffs(c)[i] += s.coeffs(c)[i];
  }
  return u;
}

std::vector<DiagnosticsRecord> run_case(SpectralVelocityField u, const PhysicsParams& p,
                                        const StepperConfig& cfg, double t_end,
                                        long long cadence) {
  std::vector<DiagnosticsRecord> records;
  records.push_back(measure(u, p, 0.0));
  const long long steps = std::llround(t_end / cfg.dt);
  for (long long k = 1; k <= steps; ++k) {
    u = step(u, p, cfg);
    if (k % cadence == 0 || k == steps) records.push_back(measure(u, p, k * cfg.dt));
  }
  return records;
}

// --------------------------------------------------------------------------

void criterion_1_energy_budget() {
  auto g = grid_n32();
  const PhysicsParams p(0.05, 1.0, 1.5);

  std::vector<double> dts = {2e-3, 1e-3, 5e-4};
  std::vector<double> residuals;
  double rel_at_1e3 = 0.0;
  for (double dt : dts) {
    const auto records = run_case(tg_plus_shear(g), p, stepper(dt), 1.0, 1);
    const auto res = energy_budget(records, p);
    residuals.push_back(std::abs(res.back()));
    if (dt == 1e-3) rel_at_1e3 = std::abs(res.back()) / records.front().energy;
  }
  record("C1a budget closure (dt=1e-3)", rel_at_1e3 <= 1e-5,
         "|residual|/E0 = " + num(rel_at_1e3) + " <= 1e-5");

  const double s01 = std::log(residuals[0] / residuals[1]) / std::log(dts[0] / dts[1]);
  const double s12 = std::log(residuals[1] / residuals[2]) / std::log(dts[1] / dts[2]);
  const double slope = 0.5 * (s01 + s12);
  const int nominal = nominal_order(stepper(1e-3), p);
  record("C1b budget order under refinement", std::abs(slope - nominal) <= 0.3,
         "slope = " + num(slope) + " vs nominal " + std::to_string(nominal) + " +/- 0.3");
}

void criterion_2_anisotropy() {
  auto g = grid_n32();
  const PhysicsParams p(0.05, 0.0, 1.5);
  const StepperConfig cfg = stepper(1e-3);

  // (sin x3, 0, 0): the horizontal viscous symbol vanishes, so the state is
  // steady to rounding per step.
  SpectralVelocityField u = vertical_shear(g);
  const double e0 = l2_norm_sq(u);
  double max_drift = 0.0;
  for (int k = 0; k < 200; ++k) {
    u = step(u, p, cfg);
    max_drift = std::max(max_drift, std::abs(l2_norm_sq(u) - e0) / e0);
  }
  record("C2a vertical shear steady", max_drift <= 1e-12,
         "per-step relative drift " + num(max_drift) + " <= 1e-12");

  // The same shear rotated into a horizontal direction must decay at the
  // exact viscous rate: this distinguishes nu*Lap_h from the full Laplacian.
  SpectralVelocityField v(g);
  v.at(0, 0, 1, 0) = Complex(0.0, -0.5);  // sin(x2) in component 1
  v.at(0, 0, g->n2() - 1, 0) = Complex(0.0, 0.5);
  v.set_projected(true);
  const double ev0 = l2_norm_sq(v);
  for (int k = 0; k < 200; ++k) v = step(v, p, cfg);
  const double expect = ev0 * std::exp(-2.0 * p.nu * 0.2);
  const double err = std::abs(l2_norm_sq(v) - expect) / ev0;
  record("C2b horizontal shear decays", err <= 1e-10 && l2_norm_sq(v) < ev0,
         "|E - E0 e^{-2 nu t}|/E0 = " + num(err));
}

void criterion_3_exact_damping() {
  const double L = 2.0 * kPi;
  auto g = make_grid(8, 8, {L, L, L});
  bool all = true;
  std::string detail;
  for (double alpha : {1.0, 1.25, 2.0}) {
    const PhysicsParams p(0.05, 1.0, alpha);
    SpectralVelocityField u = uniform_velocity(g, {0.6, 0.8, 0.0});  // |u0| = 1
    const StepperConfig cfg = stepper(1e-3);
    for (int k = 0; k < 1500; ++k) u = step(u, p, cfg);
    const double m0 = u.at(0, 0, 0, 0).real();
    const double m1 = u.at(1, 0, 0, 0).real();
    const double mag = std::sqrt(m0 * m0 + m1 * m1);
    const double exact = std::pow(1.0 + 2.0 * alpha * 1.5, -1.0 / (2.0 * alpha));
    const double err = std::abs(mag - exact);
    all = all && err <= 1e-10;
    detail += "alpha=" + num(alpha) + ":err=" + num(err) + " ";
  }
  record("C3 exact damping sub-step", all, detail + "(<= 1e-10; alpha=1 gives 0.5)");
}

void criterion_4_vertical_budget() {
  auto g = grid_n32();
  const PhysicsParams p(0.05, 1.0, 1.5);
  const StepperConfig cfg = stepper(1e-3);

  double eta_shared = 0.0;
  bool all_satisfied = true;
  std::vector<std::vector<DiagnosticsRecord>> all_records;
  for (int s = 0; s < 10; ++s) {
    auto records = run_case(random_divergence_free(g, -2.0, 500 + s), p, cfg, 1.0, 1);
    const VerticalBudgetReport rep = vertical_budget(records, p);
    all_satisfied = all_satisfied && rep.bound_satisfied;
    eta_shared = std::max(eta_shared, rep.eta_empirical);
    all_records.push_back(std::move(records));
  }
  // One eta per (nu, a, alpha): re-verify the integrated bound at the shared
  // value on every seed (the bound is monotone in eta).
  bool shared_ok = all_satisfied;
  for (const auto& records : all_records) {
    const double dz0 = records[0].dz_energy;
    double ig = 0.0, iw = 0.0;
    for (std::size_t i = 1; i < records.size(); ++i) {
      const auto& a = records[i - 1];
      const auto& b = records[i];
      const double h = b.t - a.t;
      ig += 0.5 * h * (a.grad_h_dz + b.grad_h_dz);
      iw += 0.5 * h * (a.weighted_dz + b.weighted_dz);
      const double lhs = b.dz_energy + p.nu * ig + p.a * iw;
      shared_ok = shared_ok && lhs <= (1.0 + std::exp(eta_shared * b.t)) * dz0 * 1.01;
    }
  }
  record("C4a vertical Gronwall bound (10 seeds)", shared_ok,
         "shared eta = " + num(eta_shared));

  const auto tg_records = run_case(taylor_green(g), p, cfg, 1.0, 10);
  double peak = 0.0;
  for (const auto& r : tg_records) peak = std::max(peak, r.dz_energy);
  record("C4b 2D data stay 2D", peak <= 1e-10, "max dz_energy = " + num(peak));
}

void criterion_5_hard_inequalities() {
  EnsembleConfig cfg;
  cfg.resolutions = {16, 32};
  cfg.samples_per_resolution = 256;  // 512 samples total
  cfg.seed = 2024;

  const InequalityReport dual = check_dual_bound(cfg);
  record("C5a dual bound (Hoelder)", !dual.violated,
         "max ratio " + num(dual.max_ratio) + " over " + std::to_string(dual.n_samples) +
             " samples");

  const InequalityReport p2 = check_trace_p2(cfg);
  record("C5b trace bound, periodic variant", !p2.violated,
         "max ratio " + num(p2.max_ratio));

  const InequalityReport p2z = check_trace_p2_zero_slice(cfg);
  record("C5c trace bound, zero-slice variant", !p2z.violated,
         "max ratio " + num(p2z.max_ratio));

  bool tp_ok = true;
  std::string tp_detail;
  const PhysicsParams phys(0.05, 1.0, 1.5);
  for (double alpha : {1.25, 2.0}) {
    EnsembleConfig gcfg = cfg;
    gcfg.samples_per_resolution = 64;
    const double gamma_hat = calibrate_gamma(gcfg, alpha);
    const InequalityReport tp = check_triple_product(cfg, alpha, phys, gamma_hat);
    tp_ok = tp_ok && !tp.violated;
    tp_detail += "alpha=" + num(alpha) + ":" + num(tp.max_ratio) + " ";
  }
  record("C5d triple product (Hoelder-Young)", tp_ok, tp_detail);

  bool mono_ok = true;
  std::string mono_detail;
  for (double alpha : {1.25, 1.5, 2.0}) {
    const InequalityReport m = check_damping_monotonicity(1000000, alpha, 7);
    mono_ok = mono_ok && !m.violated;
    mono_detail += "kappa(" + num(alpha) + ")=" + num(m.empirical_constant) + " ";
  }
  record("C5e damping monotonicity (1e6 pairs)", mono_ok, mono_detail);
}

void criterion_6_soft_inequalities() {
  EnsembleConfig full;
  full.resolutions = {16, 32};
  full.samples_per_resolution = 256;
  full.seed = 99;
  EnsembleConfig half = full;
  half.samples_per_resolution = 128;

  const InequalityReport lady = check_ladyzhenskaya(full);
  const InequalityReport lady_h = check_ladyzhenskaya(half);
  const double lady_spread =
      lady.empirical_constant / lady_h.empirical_constant - 1.0;
  record("C6a Ladyzhenskaya stable",
         !lady.violated && std::abs(lady_spread) < 0.20,
         "d1 = " + num(lady.empirical_constant) + ", doubling spread " + num(lady_spread));

  const InequalityReport p1 = check_interpolation_p1(full);
  const InequalityReport p1_h = check_interpolation_p1(half);
  const double p1_spread = p1.empirical_constant / p1_h.empirical_constant - 1.0;
  record("C6b interpolation p1 stable", !p1.violated && std::abs(p1_spread) < 0.20,
         "C = " + num(p1.empirical_constant) + ", doubling spread " + num(p1_spread));

  bool kappa_ok = true;
  std::string detail;
  for (double alpha : {1.25, 1.5, 2.0}) {
    const InequalityReport m = check_damping_monotonicity(1000000, alpha, 31);
    kappa_ok = kappa_ok && m.empirical_constant > 0.0;
    detail += num(m.empirical_constant) + " ";
  }
  record("C6c kappa(alpha) positive", kappa_ok, "kappa = " + detail);
}

void criteria_7_8_stability() {
  RunConfig rc;
  rc.n_h = 32;
  rc.n_v = 32;
  rc.box_lengths = {2.0 * kPi, 2.0 * kPi, 2.0 * kPi};
  rc.physics = PhysicsParams(0.02, 0.5, 1.5);
  rc.stepper = stepper(1e-3);
  rc.t_end = 1.0;
  rc.output_dir =
      (std::filesystem::temp_directory_path() / "abfdns_acceptance" / "stability").string();
  VerifyOptions vo;
  vo.seeds = 10;
  vo.seed = 4242;
  vo.twin_t_end = 1.0;

  const auto checks = verify_stability(rc, vo);
  auto find = [&checks](const std::string& name) -> const CheckResult* {
    for (const auto& c : checks) {
      if (c.name == name) return &c;
    }
    return nullptr;
  };

  const CheckResult* ident = find("identical_twins_zero");
  record("C7a identical twins bit-exact", ident != nullptr && ident->pass, "w == 0");
  const CheckResult* order = find("perturbation_order");
  record("C7b delta sweep order 1 +/- 0.1", order != nullptr && order->pass,
         order != nullptr ? "order = " + num(order->value) : "missing");
  const CheckResult* env = find("gronwall_envelope_seeds");
  record("C7c Gronwall envelope, shared C-hat", env != nullptr && env->pass,
         env != nullptr ? "C-hat = " + num(env->value) : "missing");
  const CheckResult* stab = find("gronwall_chat_stability");
  record("C7d C-hat stable within 2x", stab != nullptr && stab->pass,
         stab != nullptr ? "max/min = " + num(stab->value) : "missing");
  const CheckResult* damp = find("damping_sharpens_stability");
  record("C8 damping improves stability", damp != nullptr && damp->pass,
         damp != nullptr ? "w(T) ratio a=10 vs a=0: " + num(damp->value) : "missing");
}

void criterion_9_global_smoke() {
  auto g = grid_n32();
  const PhysicsParams p(0.05, 1.0, 1.5);
  const auto records = run_case(random_divergence_free(g, -2.0, 3), p, stepper(1e-3), 20.0, 20);
  bool finite = true;
  bool monotone = true;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    finite = finite && std::isfinite(r.energy) && std::isfinite(r.grad_h) &&
             std::isfinite(r.damping_lp) && std::isfinite(r.dz_energy) &&
             std::isfinite(r.grad_h_dz) && std::isfinite(r.weighted_dz);
    if (i > 0) {
      monotone = monotone && records[i].energy <= records[i - 1].energy * (1.0 + 1e-12);
    }
  }
  record("C9 long-run smoke (T=20)", finite && monotone,
         "E(0) = " + num(records.front().energy) + " -> E(T) = " +
             num(records.back().energy) + ", all norms finite, E non-increasing");
}

}  // namespace

int main() {
  std::printf("abfdns acceptance suite (N = 32^3, dt = 1e-3 unless stated)\n");
  criterion_1_energy_budget();
  criterion_2_anisotropy();
  criterion_3_exact_damping();
  criterion_4_vertical_budget();
  criterion_5_hard_inequalities();
  criterion_6_soft_inequalities();
  criteria_7_8_stability();
  criterion_9_global_smoke();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
