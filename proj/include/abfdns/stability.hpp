#pragma once

#include <span>
#include <vector>

#include "abfdns/field.hpp"
#include "abfdns/params.hpp"

namespace abfdns {

/// Norms of the difference w = u - v of two evolving solutions. l_of_t is
/// the Gronwall integrand at unit constant:
///     ||d3 grad_h u||_2^2 + ||d3 u||_2^2 + ||grad_h u||_2^2;
/// gronwall_envelope scales it by the constant under test.
struct TwinRunRecord {
  double t = 0.0;
  double w_energy = 0.0;    // ||w||_2^2
  double grad_h_w = 0.0;    // ||grad_h w||_2^2
  double weighted_w = 0.0;  // ||(|u|+|v|)^alpha w||_2^2
  double l_of_t = 0.0;
};

struct TwinRunResult {
  std::vector<TwinRunRecord> records;
  bool completed = true;  // false when either run blew up (partial records)
};

struct GronwallReport {
  double c_empirical = 0.0;       // smallest C-hat making the envelope hold
  bool envelope_satisfied = false;
  double decay_order = 0.0;       // fitted ||w(T)|| vs delta slope (NaN unless swept)
  bool sharper_satisfied = false; // integral form with the dissipative terms
};

/// Evolve u and v with identical stepper settings and record w-diagnostics
/// every `cadence` steps (plus the initial and final states).
TwinRunResult twin_run(const SpectralVelocityField& u0, const SpectralVelocityField& v0,
                       const PhysicsParams& p, const StepperConfig& cfg, double t_end,
                       int cadence);

/// Check ||w(t)||^2 <= ||w0||^2 exp(C-hat int_0^t l dtau) discretely
/// (trapezoid), report the minimal C-hat, and evaluate the sharper
/// integrated inequality
///   ||w(t)||^2 + nu int ||grad_h w||^2 + 2 a kappa int ||(|u|+|v|)^a w||^2
///     <= ||w0||^2 + C-hat int l(tau) ||w(tau)||^2 dtau
/// at the same C-hat. A zero w0 followed by nonzero w is reported as a
/// failed envelope (uniqueness violation).
GronwallReport gronwall_envelope(std::span<const TwinRunRecord> records, double c_hat,
                                 const PhysicsParams& p, double kappa);

/// Least-squares slope of log ||w(T)|| against log delta.
double fit_decay_order(std::span<const double> deltas, std::span<const double> w_final);

}  // namespace abfdns
