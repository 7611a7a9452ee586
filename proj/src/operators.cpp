#include "haarlab/operators.hpp"

#include <cmath>

#include "haarlab/haar.hpp"

namespace haarlab {
namespace {

// a_I for the interval with heap number h >= 2.
double slot_sign(int h) { return (h & 1) == 0 ? M_SQRT1_2 : -M_SQRT1_2; }

// Shifts `lines` coefficient lines of length n; offset(h, line) locates the
// d-vector at slot h of a line.
template <class Offset>
void shift_lines(const CVector& in, CVector& out, int n, int lines, int dim, bool adjoint,
                 Offset offset) {
  for (int other = 0; other < lines; ++other) {
    if (!adjoint) {
      for (int h = 2; h < n; ++h) {
        out.segment(offset(h, other), dim) = slot_sign(h) * in.segment(offset(h >> 1, other), dim);
      }
    } else {
      for (int h = 1; 2 * h < n; ++h) {
        out.segment(offset(h, other), dim) =
            M_SQRT1_2 * (in.segment(offset(2 * h, other), dim) -
                         in.segment(offset(2 * h + 1, other), dim));
      }
    }
  }
}

VectorSpectrum1D shift1d_impl(const VectorSpectrum1D& s, bool adjoint) {
  VectorSpectrum1D out(s.depth, s.dim);
  const int dim = s.dim;
  shift_lines(s.data, out.data, s.side(), 1, dim, adjoint,
              [dim](int h, int) { return static_cast<Eigen::Index>(h) * dim; });
  return out;
}

VectorSpectrum2D shift2d_impl(const VectorSpectrum2D& s, Axis axis, bool adjoint) {
  VectorSpectrum2D out(s.shape());
  if (axis == Axis::kX) {
    shift_lines(s.data(), out.data(), s.side(), s.side(), s.dim(), adjoint,
                [&s](int h, int other) { return s.offset(h, other); });
  } else {
    shift_lines(s.data(), out.data(), s.side(), s.side(), s.dim(), adjoint,
                [&s](int h, int other) { return s.offset(other, h); });
  }
  return out;
}

SampledField2D shift_samples(const SampledField2D& f, Axis axis) {
  return synthesize2d(shift2d_impl(analyze2d(f), axis, false));
}

}  // namespace

VectorSpectrum1D shift1d(const VectorSpectrum1D& s) { return shift1d_impl(s, false); }
VectorSpectrum1D shift1d_adjoint(const VectorSpectrum1D& s) { return shift1d_impl(s, true); }

VectorSpectrum2D shift(const VectorSpectrum2D& s, Axis axis) { return shift2d_impl(s, axis, false); }
VectorSpectrum2D shift_adjoint(const VectorSpectrum2D& s, Axis axis) {
  return shift2d_impl(s, axis, true);
}

SampledField2D multiply(const SampledSymbol2D& b, const SampledField2D& f) {
  require_same_shape(b.shape(), f.shape(), "multiply");
  SampledField2D out(f.shape());
  for (int x = 0; x < f.side(); ++x)
    for (int y = 0; y < f.side(); ++y) out.at(x, y) = b.at(x, y) * f.at(x, y);
  return out;
}

SampledField1D multiply(const SampledField1D& b, const SampledField1D& f) {
  if (b.dim != 1 || b.depth != f.depth) throw DimensionMismatch("1D multiply expects a scalar b");
  SampledField1D out(f.depth, f.dim);
  for (int i = 0; i < f.side(); ++i) out.at(i) = b.data(i) * f.at(i);
  return out;
}

SampledField1D commutator1d(const SampledField1D& b, const SampledField1D& f) {
  auto sh = [](const SampledField1D& g) { return synthesize1d(shift1d(analyze1d(g))); };
  SampledField1D out = multiply(b, sh(f));
  out.data -= sh(multiply(b, f)).data;
  return out;
}

SampledField2D commutator1p(const SampledSymbol2D& b, const SampledField2D& f, Axis axis) {
  return multiply(b, shift_samples(f, axis)) - shift_samples(multiply(b, f), axis);
}

SampledField2D commutator2p(const SampledSymbol2D& b, const SampledField2D& f) {
  auto s1 = [](const SampledField2D& g) { return shift_samples(g, Axis::kX); };
  auto s2 = [](const SampledField2D& g) { return shift_samples(g, Axis::kY); };
  SampledField2D out = multiply(b, s1(s2(f)));
  out -= s1(multiply(b, s2(f)));
  out -= s2(multiply(b, s1(f)));
  out += s2(s1(multiply(b, f)));
  return out;
}

LinearOperator shift_operator(FieldShape shape, Axis axis) {
  return {shape, [axis](const VectorSpectrum2D& f) { return shift(f, axis); },
          [axis](const VectorSpectrum2D& f) { return shift_adjoint(f, axis); },
          axis == Axis::kX ? "Sh1" : "Sh2"};
}

LinearOperator multiplication_operator(const SampledSymbol2D& b) {
  auto sym = std::make_shared<const SampledSymbol2D>(b);
  auto adj = std::make_shared<const SampledSymbol2D>(b.adjoint());
  return {b.shape(),
          [sym](const VectorSpectrum2D& f) { return analyze2d(multiply(*sym, synthesize2d(f))); },
          [adj](const VectorSpectrum2D& f) { return analyze2d(multiply(*adj, synthesize2d(f))); },
          "M_B"};
}

LinearOperator multiplication_operator(const MatrixSpectrum2D& b) {
  return multiplication_operator(synthesize2d(b));
}

LinearOperator iterated_commutator(const LinearOperator& m, const LinearOperator& t1,
                                   const LinearOperator& t2) {
  return (m * t1 * t2 - t1 * m * t2 - t2 * m * t1 + t2 * t1 * m).renamed("[[M," + t1.name() + "]," +
                                                                          t2.name() + "]");
}

LinearOperator commutator2p_operator(const SampledSymbol2D& b) {
  return iterated_commutator(multiplication_operator(b), shift_operator(b.shape(), Axis::kX),
                             shift_operator(b.shape(), Axis::kY));
}

}  // namespace haarlab
