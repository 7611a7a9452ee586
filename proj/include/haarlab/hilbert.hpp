#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "haarlab/field.hpp"
#include "haarlab/linear_operator.hpp"
#include "haarlab/operators.hpp"

namespace haarlab {

// Periodic conjugate-function operator on 2^N samples: multiplier -i sign(k)
// on the discrete Fourier modes k in (-n/2, n/2), zero at k = 0 and at the
// Nyquist mode n/2 (which has no sign). Real input gives real output.

/// (Hf)(x) = sum_t H(x, t) f(t); assembled by direct summation over modes.
Eigen::MatrixXd hilbert_matrix(int depth);

SampledField1D discrete_hilbert(const SampledField1D& f);
SampledField2D hilbert(const SampledField2D& f, Axis axis);
inline SampledField2D hilbert_x(const SampledField2D& f) { return hilbert(f, Axis::kX); }
inline SampledField2D hilbert_y(const SampledField2D& f) { return hilbert(f, Axis::kY); }

/// H_axis on coefficients; the adjoint is -H_axis.
LinearOperator hilbert_operator(FieldShape shape, Axis axis);

/// B H1 H2 f - H1(B H2 f) - H2(B H1 f) + H2 H1 (B f).
SampledField2D commutator2p_hilbert(const SampledSymbol2D& b, const SampledField2D& f);
LinearOperator commutator2p_hilbert_operator(const SampledSymbol2D& b);

/// Dyadic grid translated by `alpha` cells (cyclically) and dilated by r.
struct ShiftedGrid {
  int depth = 3;
  int alpha = 0;
  double r = 1.0;
};

/// Real n x n kernel K(t, x) over cell pairs, with (Kf)(x) = (1/n) sum_t K(t, x) f(t).
struct KernelMatrix {
  Eigen::MatrixXd values;
  int samples = 0;
  std::vector<ShiftedGrid> grids;
};

/// K(t, x) = sum_I h_I(t) (Sh h_I)(x) over the intervals of the shifted grid
/// whose four quarters are nonempty, so that h_I and both children's Haar
/// functions exist on the cell grid. For r != 1, interval endpoints are
/// rounded to the nearest cell boundary and each h_I is the mean-zero,
/// unit-norm step function on its two (possibly unequal) halves.
KernelMatrix shifted_shift_kernel(const ShiftedGrid& grid);

/// Kernel of the discrete Hilbert transform in the same convention.
KernelMatrix hilbert_kernel(int depth);

struct FitReport {
  int samples = 0;
  /// argmin_c ||c K_avg - K_H||_F.
  double c = 0.0;
  /// ||c K_avg - K_H||_F / ||K_H||_F.
  double residual_rel = 0.0;
  std::string normalization =
      "uniform mean over sampled (alpha, r); the dr/r weight is not applied";
};

nlohmann::ordered_json to_json(const FitReport& r);

/// Arithmetic mean of the sample kernels, fitted against the Hilbert kernel.
/// Throws PreconditionViolated on an empty list or mixed depths.
std::pair<KernelMatrix, FitReport> petermichl_average(const std::vector<ShiftedGrid>& samples);

}  // namespace haarlab
