#pragma once

#include <vector>

#include "haarlab/field.hpp"

namespace haarlab {

// Orthonormal Haar analysis and synthesis on the depth-N grid.
//
// A coefficient line of length 2^N holds the global mean <f, 1> in slot 0
// and <f, h_I> for every cancellative interval I (level < N) in slot heap(I).
// Two-dimensional spectra are tensor products of such lines, so the fully
// cancellative family h_I (x) h_J sits at slots (>=1, >=1), the mixed terms
// h_I (x) 1 and 1 (x) h_J at (>=1, 0) and (0, >=1), and the global mean at (0, 0).

VectorSpectrum1D analyze1d(const SampledField1D& f);
SampledField1D synthesize1d(const VectorSpectrum1D& s);

VectorSpectrum2D analyze2d(const SampledField2D& f);
SampledField2D synthesize2d(const VectorSpectrum2D& s);
MatrixSpectrum2D analyze2d(const SampledSymbol2D& b);
SampledSymbol2D synthesize2d(const MatrixSpectrum2D& s);

/// Samples of h_I (kind 0) or h^1_I = 1_I / sqrt|I| (kind 1) on the 2^depth cells.
std::vector<double> haar_profile(HaarKind kind, const DyadicInterval& interval, int depth);

/// Scalar samples of the basis element; throws NotRepresentable.
SampledField2D evaluate_basis(const HaarIndex2D& index, int depth);

/// Coefficient of `index` in a spectrum (a C^d vector).
CVector coefficient(const VectorSpectrum2D& s, const HaarIndex2D& index);
/// Spectrum with a single coefficient `value` at `index`.
VectorSpectrum2D unit_spectrum(FieldShape shape, const HaarIndex2D& index, const CVector& value);

/// Zeroes every coefficient that is not fully cancellative, or whose level
/// exceeds max_level on either axis.
VectorSpectrum2D restrict_cancellative(const VectorSpectrum2D& s, int max_level);
MatrixSpectrum2D restrict_cancellative(const MatrixSpectrum2D& s, int max_level);

/// True when every nonzero coefficient is fully cancellative with both levels <= max_level.
bool is_cancellative_up_to(const VectorSpectrum2D& s, int max_level, double tol = 0.0);
bool is_cancellative_up_to(const MatrixSpectrum2D& s, int max_level, double tol = 0.0);

// ---------------------------------------------------------------------------
// Frame tables: all pairings <f, h^eps_I (x) h^delta_J> over every interval
// at which the kind is defined (cancellative: level < N, average: level <= N).
// One axis has 3 * 2^N - 2 frame positions: cancellative heaps first, then
// average heaps.

struct AxisFrame {
  int depth = 0;

  int side() const { return 1 << depth; }
  int size() const { return 3 * side() - 2; }
  int max_level(HaarKind kind) const { return kind == HaarKind::kCancellative ? depth - 1 : depth; }
  bool defined(HaarKind kind, const DyadicInterval& iv) const { return iv.level <= max_level(kind); }
  int position(HaarKind kind, const DyadicInterval& iv) const {
    return kind == HaarKind::kCancellative ? iv.heap() - 1 : side() - 1 + iv.heap() - 1;
  }
};

/// Frame pairings of a field with `components` values per cell (d for
/// vectors, d*d row-major for matrices).
class FrameTable2D {
 public:
  FrameTable2D(int depth, int components);

  int depth() const { return frame_.depth; }
  int components() const { return components_; }
  const AxisFrame& axis() const { return frame_; }

  Complex* at(int px, int py) {
    return data_.data() + (static_cast<Eigen::Index>(px) * frame_.size() + py) * components_;
  }
  const Complex* at(int px, int py) const {
    return data_.data() + (static_cast<Eigen::Index>(px) * frame_.size() + py) * components_;
  }
  CVector& data() { return data_; }
  const CVector& data() const { return data_; }

 private:
  AxisFrame frame_;
  int components_;
  CVector data_;
};

FrameTable2D frame_analyze(const SampledField2D& f);
FrameTable2D frame_analyze(const SampledSymbol2D& b);
/// Sum over positions of table value times h^eps_I (x) h^delta_J, as samples.
SampledField2D frame_synthesize(const FrameTable2D& table);

}  // namespace haarlab
