#pragma once

#include <memory>

#include "abfdns/field.hpp"
#include "abfdns/grid.hpp"

namespace abfdns {

/// Forward transform of a scalar field. Coefficients are normalized so that
/// f(x) = sum_k c(k) exp(i k.x); Parseval then reads
/// mean_x |f|^2 = sum over stored modes of weight * |c|^2.
SpectralField forward_transform(const PhysicalField& f);

/// Forward transform of a 3-component field; the result is not marked
/// projected.
SpectralVelocityField forward_transform_vector(const PhysicalField& f);

PhysicalField inverse_transform(const SpectralField& c);
PhysicalField inverse_transform(const SpectralVelocityField& u);

/// Spectral derivative along axis 1..3: multiply by i*k, Nyquist zeroed.
SpectralField derivative(const SpectralField& c, int axis);
SpectralVelocityField derivative(const SpectralVelocityField& u, int axis);

/// Leray projection I - kk^T/|k|^2 onto divergence-free fields. The zero
/// mode is left untouched; modes carrying a Nyquist index are zeroed (the
/// projector is sign-ambiguous there and those modes never survive
/// dealiasing).
SpectralVelocityField leray_project(const SpectralVelocityField& u);

/// Two-thirds-rule truncation; idempotent.
SpectralField dealias(const SpectralField& c);
SpectralVelocityField dealias(const SpectralVelocityField& u);
void dealias_in_place(SpectralField& c);
void dealias_in_place(SpectralVelocityField& u);

/// Spectral divergence i k . u with Nyquist-zeroed multipliers.
SpectralField divergence(const SpectralVelocityField& u);

namespace detail {
/// Restore exact Hermitian symmetry on the k1-boundary planes (i1 = 0 and
/// i1 = n1/2) by copying the lexicographically-first member of each
/// conjugate pair onto its partner. Keeps in-memory states canonical so
/// snapshot packing is lossless.
void canonicalize_hermitian(const GridSpec& g, Complex* c);
}  // namespace detail

}  // namespace abfdns
