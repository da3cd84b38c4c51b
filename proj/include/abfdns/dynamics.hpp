#pragma once

#include "abfdns/field.hpp"
#include "abfdns/params.hpp"
#include "abfdns/spectral.hpp"

namespace abfdns {

/// Diagnostic pressure; zero-mean scalar samples.
struct PressureField {
  PhysicalField values;
};

/// Pseudo-spectral (u.grad)u: transform to collocation space, multiply,
/// transform back, dealias. Not projected (the projection happens in rhs).
SpectralVelocityField convection_term(const SpectralVelocityField& u);

/// a |u|^{2 alpha} u evaluated pointwise in collocation space, dealiased.
SpectralVelocityField damping_term(const SpectralVelocityField& u, const PhysicsParams& p);

/// Full right-hand side -nu (k1^2+k2^2) u - P[(u.grad)u + a|u|^{2a}u];
/// divergence-free by construction.
SpectralVelocityField rhs(const SpectralVelocityField& u, const PhysicsParams& p);

/// Advance one step of size cfg.dt. The horizontal viscous term is
/// integrated exactly by the factor exp(-nu (k1^2+k2^2) dt); convection (and
/// damping when damping_mode == explicit_term) is advanced by RK2/RK3 on the
/// integrating-factor form; with exact_split the damping is a Strang-split
/// exact pointwise solve
///     |u(t)| = (|u0|^{-2 alpha} + 2 alpha a t)^{-1/(2 alpha)}
/// with the direction preserved. Throws blowup_error on non-finite output.
SpectralVelocityField step(const SpectralVelocityField& u, const PhysicsParams& p,
                           const StepperConfig& cfg);

/// Exact damping sub-flow for time t (identity when a == 0); re-projected.
SpectralVelocityField damping_exact_substep(const SpectralVelocityField& u,
                                            const PhysicsParams& p, double t);

/// Advisory stable step: cfl_safety * min(advective limit, explicit damping
/// limit), capped at dt_max. A zero field returns dt_max.
double cfl_dt(const SpectralVelocityField& u, const PhysicsParams& p,
              const StepperConfig& cfg);

/// Zero-mean pressure making -grad p + the unprojected nonlinear terms
/// divergence-free.
PressureField solve_pressure(const SpectralVelocityField& u, const PhysicsParams& p);

}  // namespace abfdns
