#pragma once

#include <span>
#include <vector>

#include "abfdns/field.hpp"
#include "abfdns/params.hpp"
#include "abfdns/spectral.hpp"

namespace abfdns {

/// Time-stamped norm ledger of one state. All entries are squared norms
/// except damping_lp (the (2a+2)-th power of the L^{2a+2} norm) and
/// div_residual (a max-abs).
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;       // ||u||_2^2
  double grad_h = 0.0;       // ||grad_h u||_2^2
  double damping_lp = 0.0;   // ||u||_{2a+2}^{2a+2}
  double dz_energy = 0.0;    // ||d3 u||_2^2
  double grad_h_dz = 0.0;    // ||grad_h d3 u||_2^2
  double weighted_dz = 0.0;  // |||u|^alpha d3 u||_2^2
  double div_residual = 0.0;
  double budget_residual = 0.0;
};

struct VerticalBudgetReport {
  double eta_empirical = 0.0;
  bool bound_satisfied = false;
  double margin = 0.0;
};

/// L^p norm by midpoint quadrature on the collocation grid; vector fields
/// use the pointwise Euclidean magnitude. p may be +infinity (sup norm).
double lp_norm(const PhysicalField& f, double p);

/// Anisotropic Sobolev norm: sqrt(V * sum w <xi'>^{2s} <xi3>^{2s'} |c|^2)
/// with <x> = (1+|x|^2)^{1/2}. The homogeneous variant replaces <.> by |.|
/// and excludes the zero mode. (0,0) reproduces the L2 norm.
double anisotropic_sobolev_norm(const SpectralField& c, double s, double s_prime,
                                bool homogeneous = false);
double anisotropic_sobolev_norm(const SpectralVelocityField& u, double s, double s_prime,
                                bool homogeneous = false);

enum class MixedOrder {
  h_then_v,  // L^p_h(L^q_v): inner L^q over x3, outer L^p over (x1,x2)
  v_then_h   // L^q_v(L^p_h): inner L^p over (x1,x2), outer L^q over x3
};

/// Mixed norm with nested quadrature; p and q may be +infinity.
double mixed_norm(const PhysicalField& f, double p, double q, MixedOrder order);

/// Signed budget residual per record:
/// ||u(t)||^2 + 2 nu int ||grad_h u||^2 + 2 a int ||u||_{2a+2}^{2a+2} - ||u0||^2
/// with trapezoid time integrals over the record sequence.
std::vector<double> energy_budget(std::span<const DiagnosticsRecord> records,
                                  const PhysicsParams& p);

/// Checks d/dt ||d3 u||^2 + nu ||grad_h d3 u||^2 + a |||u|^a d3 u||^2
/// <= eta ||d3 u||^2 in discrete form, reports the smallest admissible eta
/// and whether the integrated bound with (1 + e^{eta t}) holds. When the
/// initial vertical energy is zero the bound degenerates; the report is then
/// satisfied iff dz_energy stays <= 1e-10.
VerticalBudgetReport vertical_budget(std::span<const DiagnosticsRecord> records,
                                     const PhysicsParams& p);

/// max |div u| over the grid, divergence taken spectrally.
double divergence_residual(const SpectralVelocityField& u);

/// Compute every column except budget_residual (left NaN; the run driver and
/// energy_budget fill it).
DiagnosticsRecord measure(const SpectralVelocityField& u, const PhysicsParams& p, double t);

// Squared-norm helpers shared with the stability module.
double l2_norm_sq(const SpectralField& c);
double l2_norm_sq(const SpectralVelocityField& u);
double grad_h_norm_sq(const SpectralVelocityField& u);
double grad_h_norm_sq(const SpectralField& c);
double dz_norm_sq(const SpectralVelocityField& u);
double dz_norm_sq(const SpectralField& c);
double grad_h_dz_norm_sq(const SpectralVelocityField& u);
double grad_norm_sq(const SpectralVelocityField& u);  // full gradient
double grad_norm_sq(const SpectralField& c);

}  // namespace abfdns
