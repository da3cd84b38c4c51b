#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "abfdns/params.hpp"

namespace abfdns {

/// Result of one inequality check over a sample ensemble. max_ratio is the
/// worst LHS/RHS with the constant stripped; for hard (constant-1)
/// inequalities `violated` means some sample exceeded 1 beyond 1e-8 relative
/// tolerance, for calibration checks it means the ratio was not finite.
struct InequalityReport {
  std::string name;
  long n_samples = 0;
  double max_ratio = 0.0;
  bool violated = false;
  double empirical_constant = 0.0;
};

/// Ensemble of random trigonometric polynomials with prescribed decay,
/// deterministic in seed, generated lazily across the listed resolutions.
struct EnsembleConfig {
  std::vector<int> resolutions{16, 32};
  int samples_per_resolution = 256;
  double spectrum_slope = -2.0;
  std::uint64_t seed = 1234;
};

/// ||psi||_4 <= d1 ||psi||_2^{1/4} ||grad psi||_2^{3/4} on mean-zero fields;
/// reports the empirical d1.
InequalityReport check_ladyzhenskaya(const EnsembleConfig& cfg);

/// ||(u.grad)u||_{4/3} <= ||u||_4 ||grad u||_2 on divergence-free fields
/// (pure Hoelder step, hard constant 1).
InequalityReport check_dual_bound(const EnsembleConfig& cfg);

/// ||psi||_{L2_v(L4_h)} <= C ||grad_h psi||_2^{1/2} ||psi||_2^{1/2} on fields
/// mean-free over every horizontal slice; reports the empirical C.
InequalityReport check_interpolation_p1(const EnsembleConfig& cfg);

/// Periodic trace bound sup_{x3} ||psi(.,x3)||_{L2_h}^2
/// <= (1/L3) ||psi||_2^2 + 2 ||psi||_2 ||d3 psi||_2 (hard).
InequalityReport check_trace_p2(const EnsembleConfig& cfg);

/// Original trace form sup_{x3} ||psi(.,x3)||_{L2_h}^2
/// <= 2 ||psi||_2 ||d3 psi||_2 on fields windowed by sin^4(pi x3/L3) so they
/// vanish identically on the x3 = 0 plane (hard).
InequalityReport check_trace_p2_zero_slice(const EnsembleConfig& cfg);

/// Pointwise monotonicity of x -> |x|^{2a}x:
/// D = (|u|^{2a}u - |v|^{2a}v).(u - v) >= 0 over random vector pairs, and
/// kappa_empirical = min D / (|u-v|^2 (|u|+|v|)^{2a}).
InequalityReport check_damping_monotonicity(std::uint64_t n_pairs, double alpha,
                                            std::uint64_t seed);

/// Hoelder-Young chain: for scalar fields f, g, h and alpha > 1,
/// int |f||g||h| <= (e1/4e0) ||f^a g||_2^2 + (e1^{1/(1-a)}/4e0) ||g||_2^2
///                + e0 ||h||_2^2  (hard for every e0, e1 > 0).
InequalityReport check_triple_product(const EnsembleConfig& cfg, double alpha,
                                      double eps0, double eps1);

/// Same check with the constructed tunings eps0 = nu/(2 gamma_hat),
/// eps1 = a nu (1+4 alpha)/gamma_hat^2.
InequalityReport check_triple_product(const EnsembleConfig& cfg, double alpha,
                                      const PhysicsParams& p, double gamma_hat);

/// Empirical constant of the trilinear estimate
/// int (u.grad)u . d3^2 u <= gamma [ (e1/4e0) |||u|^a d3u||^2
///   + (e1^{1/(1-a)}/4e0) ||d3u||^2 + e0 ||grad_h d3u||^2 ],
/// maximized over a divergence-free ensemble, a small (e0,e1) grid and the
/// given alpha. Used to build the default epsilons above.
double calibrate_gamma(const EnsembleConfig& cfg, double alpha);

/// Serialize one CSV row per report: name,n_samples,max_ratio,
/// empirical_constant,violated.
void write_reports_csv(const std::string& path, std::span<const InequalityReport> reports);

}  // namespace abfdns
