#pragma once

#include "haarlab/field.hpp"
#include "haarlab/linear_operator.hpp"

namespace haarlab {

enum class Axis { kX, kY };

// Dyadic shift on coefficient lines: (Ш s)(I) = a_I s(parent I) for level(I) >= 1.
// The mean slot and the finest cancellative level have no image on the
// depth-N grid and are annihilated; the output mean and level-0 slots are zero.

VectorSpectrum1D shift1d(const VectorSpectrum1D& s);
VectorSpectrum1D shift1d_adjoint(const VectorSpectrum1D& s);

/// Shift in one variable, identity on the other (x: Ш1, y: Ш2).
VectorSpectrum2D shift(const VectorSpectrum2D& s, Axis axis);
VectorSpectrum2D shift_adjoint(const VectorSpectrum2D& s, Axis axis);
inline VectorSpectrum2D shift_x(const VectorSpectrum2D& s) { return shift(s, Axis::kX); }
inline VectorSpectrum2D shift_y(const VectorSpectrum2D& s) { return shift(s, Axis::kY); }

/// Pointwise matrix-vector product B(x, y) f(x, y).
SampledField2D multiply(const SampledSymbol2D& b, const SampledField2D& f);
/// One-dimensional model: scalar b times every component of f.
SampledField1D multiply(const SampledField1D& b, const SampledField1D& f);

/// b Ш(f) - Ш(b f) on the line; b must be scalar.
SampledField1D commutator1d(const SampledField1D& b, const SampledField1D& f);
/// B Ш_axis(f) - Ш_axis(B f).
SampledField2D commutator1p(const SampledSymbol2D& b, const SampledField2D& f, Axis axis);
/// [[M_B, Ш1], Ш2] f = B Ш1 Ш2 f - Ш1(B Ш2 f) - Ш2(B Ш1 f) + Ш2 Ш1 (B f).
SampledField2D commutator2p(const SampledSymbol2D& b, const SampledField2D& f);

LinearOperator shift_operator(FieldShape shape, Axis axis);
/// M_B acting on coefficients: analyze(B * synthesize(f)).
LinearOperator multiplication_operator(const SampledSymbol2D& b);
LinearOperator multiplication_operator(const MatrixSpectrum2D& b);

/// m t1 t2 - t1 m t2 - t2 m t1 + t2 t1 m.
LinearOperator iterated_commutator(const LinearOperator& m, const LinearOperator& t1,
                                   const LinearOperator& t2);
/// [[M_B, Ш1], Ш2] as a matrix-free handle.
LinearOperator commutator2p_operator(const SampledSymbol2D& b);

}  // namespace haarlab
