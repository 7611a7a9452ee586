#include "haarlab/haar.hpp"

#include <cmath>

namespace haarlab {
namespace {

// Lines are addressed as base[i * stride], i in [0, count).

void analyze_line(Complex* base, std::ptrdiff_t stride, int depth, std::vector<Complex>& sums,
                  std::vector<Complex>& coef) {
  const int n = 1 << depth;
  sums.resize(n);
  coef.resize(n);
  const double area = 1.0 / n;
  for (int c = 0; c < n; ++c) sums[c] = base[c * stride] * area;
  for (int level = depth - 1; level >= 0; --level) {
    const double scale = std::sqrt(std::ldexp(1.0, level));
    const int count = 1 << level;
    for (int k = 0; k < count; ++k) {
      const Complex left = sums[2 * k];
      const Complex right = sums[2 * k + 1];
      coef[count + k] = (left - right) * scale;
      sums[k] = left + right;
    }
  }
  coef[0] = sums[0];
  for (int i = 0; i < n; ++i) base[i * stride] = coef[i];
}

void synthesize_line(Complex* base, std::ptrdiff_t stride, int depth, std::vector<Complex>& values) {
  const int n = 1 << depth;
  values.resize(n);
  values[0] = base[0];
  for (int level = 0; level < depth; ++level) {
    const double scale = std::sqrt(std::ldexp(1.0, level));
    const int count = 1 << level;
    for (int k = count - 1; k >= 0; --k) {
      const Complex p = values[k];
      const Complex c = base[(count + k) * stride] * scale;
      values[2 * k] = p + c;
      values[2 * k + 1] = p - c;
    }
  }
  for (int i = 0; i < n; ++i) base[i * stride] = values[i];
}

// Full tensor transform over an (x, y, component) array.
void transform2d(CVector& data, int depth, int comps, bool forward) {
  const int n = 1 << depth;
  std::vector<Complex> a, b;
  const std::ptrdiff_t ystride = comps;
  const std::ptrdiff_t xstride = static_cast<std::ptrdiff_t>(n) * comps;
  for (int x = 0; x < n; ++x) {
    for (int c = 0; c < comps; ++c) {
      Complex* base = data.data() + x * xstride + c;
      forward ? analyze_line(base, ystride, depth, a, b) : synthesize_line(base, ystride, depth, a);
    }
  }
  for (int y = 0; y < n; ++y) {
    for (int c = 0; c < comps; ++c) {
      Complex* base = data.data() + y * ystride + c;
      forward ? analyze_line(base, xstride, depth, a, b) : synthesize_line(base, xstride, depth, a);
    }
  }
}

// Frame pairings of one line of n samples into `out` (3n - 2 entries, strided).
void frame_analyze_line(const Complex* in, std::ptrdiff_t in_stride, Complex* out,
                        std::ptrdiff_t out_stride, const AxisFrame& frame, std::vector<Complex>& sums) {
  const int depth = frame.depth;
  const int n = frame.side();
  sums.resize(n);
  const double area = 1.0 / n;
  for (int c = 0; c < n; ++c) sums[c] = in[c * in_stride] * area;
  // Average pairing at the finest level: <f, h^1_I> = integral / sqrt|I|.
  {
    const double scale = std::sqrt(static_cast<double>(n));
    for (int c = 0; c < n; ++c) {
      out[frame.position(HaarKind::kAverage, {depth, c}) * out_stride] = sums[c] * scale;
    }
  }
  for (int level = depth - 1; level >= 0; --level) {
    const double scale = std::sqrt(std::ldexp(1.0, level));
    const int count = 1 << level;
    for (int k = 0; k < count; ++k) {
      const Complex left = sums[2 * k];
      const Complex right = sums[2 * k + 1];
      out[frame.position(HaarKind::kCancellative, {level, k}) * out_stride] = (left - right) * scale;
      sums[k] = left + right;
      out[frame.position(HaarKind::kAverage, {level, k}) * out_stride] = sums[k] * scale;
    }
  }
}

void frame_synthesize_line(const Complex* in, std::ptrdiff_t in_stride, Complex* out,
                           std::ptrdiff_t out_stride, const AxisFrame& frame,
                           std::vector<Complex>& values, std::vector<Complex>& next) {
  const int depth = frame.depth;
  values.assign(1, in[frame.position(HaarKind::kAverage, {0, 0}) * in_stride]);
  for (int level = 0; level < depth; ++level) {
    const double scale = std::sqrt(std::ldexp(1.0, level));
    const double child_scale = std::sqrt(std::ldexp(1.0, level + 1));
    const int count = 1 << level;
    next.resize(2 * count);
    for (int k = 0; k < count; ++k) {
      const Complex c = in[frame.position(HaarKind::kCancellative, {level, k}) * in_stride] * scale;
      next[2 * k] = values[k] + c +
                    in[frame.position(HaarKind::kAverage, {level + 1, 2 * k}) * in_stride] * child_scale;
      next[2 * k + 1] = values[k] - c +
                        in[frame.position(HaarKind::kAverage, {level + 1, 2 * k + 1}) * in_stride] *
                            child_scale;
    }
    values.swap(next);
  }
  for (int c = 0; c < frame.side(); ++c) out[c * out_stride] = values[c];
}

FrameTable2D frame_analyze_raw(const CVector& samples, int depth, int comps) {
  const AxisFrame frame{depth};
  const int n = frame.side();
  const int t = frame.size();
  // Pass 1: along y, (x, y, c) -> (x, py, c).
  CVector mid(static_cast<Eigen::Index>(n) * t * comps);
  std::vector<Complex> sums;
  for (int x = 0; x < n; ++x) {
    for (int c = 0; c < comps; ++c) {
      frame_analyze_line(samples.data() + static_cast<std::ptrdiff_t>(x) * n * comps + c, comps,
                         mid.data() + static_cast<std::ptrdiff_t>(x) * t * comps + c, comps, frame,
                         sums);
    }
  }
  // Pass 2: along x, (x, py, c) -> (px, py, c).
  FrameTable2D table(depth, comps);
  for (int py = 0; py < t; ++py) {
    for (int c = 0; c < comps; ++c) {
      frame_analyze_line(mid.data() + static_cast<std::ptrdiff_t>(py) * comps + c,
                         static_cast<std::ptrdiff_t>(t) * comps,
                         table.data().data() + static_cast<std::ptrdiff_t>(py) * comps + c,
                         static_cast<std::ptrdiff_t>(t) * comps, frame, sums);
    }
  }
  return table;
}

template <class Spectrum>
Spectrum restrict_impl(const Spectrum& s, int max_level, int block) {
  Spectrum out(s.shape());
  const int n = s.side();
  for (int x = 1; x < n; ++x) {
    if (DyadicInterval::from_heap(x).level > max_level) continue;
    for (int y = 1; y < n; ++y) {
      if (DyadicInterval::from_heap(y).level > max_level) continue;
      out.data().segment(s.offset(x, y), block) = s.data().segment(s.offset(x, y), block);
    }
  }
  return out;
}

template <class Spectrum>
bool cancellative_impl(const Spectrum& s, int max_level, double tol, int block) {
  const int n = s.side();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const bool allowed = x >= 1 && y >= 1 && DyadicInterval::from_heap(x).level <= max_level &&
                           DyadicInterval::from_heap(y).level <= max_level;
      if (!allowed && s.data().segment(s.offset(x, y), block).norm() > tol) return false;
    }
  }
  return true;
}

}  // namespace

VectorSpectrum1D analyze1d(const SampledField1D& f) {
  VectorSpectrum1D out(f.depth, f.dim);
  out.data = f.data;
  std::vector<Complex> a, b;
  for (int c = 0; c < f.dim; ++c) analyze_line(out.data.data() + c, f.dim, f.depth, a, b);
  return out;
}

SampledField1D synthesize1d(const VectorSpectrum1D& s) {
  SampledField1D out(s.depth, s.dim);
  out.data = s.data;
  std::vector<Complex> a;
  for (int c = 0; c < s.dim; ++c) synthesize_line(out.data.data() + c, s.dim, s.depth, a);
  return out;
}

VectorSpectrum2D analyze2d(const SampledField2D& f) {
  CVector data = f.data();
  transform2d(data, f.depth(), f.dim(), true);
  return VectorSpectrum2D(f.shape(), std::move(data));
}

SampledField2D synthesize2d(const VectorSpectrum2D& s) {
  CVector data = s.data();
  transform2d(data, s.depth(), s.dim(), false);
  return SampledField2D(s.shape(), std::move(data));
}

MatrixSpectrum2D analyze2d(const SampledSymbol2D& b) {
  CVector data = b.data();
  transform2d(data, b.depth(), b.dim() * b.dim(), true);
  return MatrixSpectrum2D(b.shape(), std::move(data));
}

SampledSymbol2D synthesize2d(const MatrixSpectrum2D& s) {
  CVector data = s.data();
  transform2d(data, s.depth(), s.dim() * s.dim(), false);
  return SampledSymbol2D(s.shape(), std::move(data));
}

std::vector<double> haar_profile(HaarKind kind, const DyadicInterval& interval, int depth) {
  const int n = 1 << depth;
  std::vector<double> out(n, 0.0);
  const auto [first, last] = interval.cells(depth);
  const double amplitude = 1.0 / std::sqrt(interval.measure());
  const int mid = (first + last) / 2;
  for (int c = first; c < last; ++c) {
    out[c] = (kind == HaarKind::kAverage || c < mid) ? amplitude : -amplitude;
  }
  return out;
}

SampledField2D evaluate_basis(const HaarIndex2D& index, int depth) {
  if (!is_representable(index, depth)) {
    throw NotRepresentable("basis index is not representable at depth " + std::to_string(depth));
  }
  const auto px = haar_profile(index.kind_x, index.rect.ix, depth);
  const auto py = haar_profile(index.kind_y, index.rect.iy, depth);
  SampledField2D out(FieldShape{depth, 1});
  const int n = 1 << depth;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) out.at(x, y)(0) = px[x] * py[y];
  return out;
}

CVector coefficient(const VectorSpectrum2D& s, const HaarIndex2D& index) {
  const auto [sx, sy] = basis_slots(index, s.depth());
  return s.at(sx, sy);
}

VectorSpectrum2D unit_spectrum(FieldShape shape, const HaarIndex2D& index, const CVector& value) {
  if (value.size() != shape.dim) throw DimensionMismatch("unit_spectrum value has wrong length");
  VectorSpectrum2D out(shape);
  const auto [sx, sy] = basis_slots(index, shape.depth);
  out.at(sx, sy) = value;
  return out;
}

VectorSpectrum2D restrict_cancellative(const VectorSpectrum2D& s, int max_level) {
  return restrict_impl(s, max_level, s.dim());
}

MatrixSpectrum2D restrict_cancellative(const MatrixSpectrum2D& s, int max_level) {
  return restrict_impl(s, max_level, s.dim() * s.dim());
}

bool is_cancellative_up_to(const VectorSpectrum2D& s, int max_level, double tol) {
  return cancellative_impl(s, max_level, tol, s.dim());
}

bool is_cancellative_up_to(const MatrixSpectrum2D& s, int max_level, double tol) {
  return cancellative_impl(s, max_level, tol, s.dim() * s.dim());
}

FrameTable2D::FrameTable2D(int depth, int components)
    : frame_{depth},
      components_(components),
      data_(CVector::Zero(static_cast<Eigen::Index>(frame_.size()) * frame_.size() * components)) {}

FrameTable2D frame_analyze(const SampledField2D& f) {
  return frame_analyze_raw(f.data(), f.depth(), f.dim());
}

FrameTable2D frame_analyze(const SampledSymbol2D& b) {
  return frame_analyze_raw(b.data(), b.depth(), b.dim() * b.dim());
}

SampledField2D frame_synthesize(const FrameTable2D& table) {
  const AxisFrame& frame = table.axis();
  const int n = frame.side();
  const int t = frame.size();
  const int comps = table.components();
  // Pass 1: along x, (px, py, c) -> (x, py, c).
  CVector mid(static_cast<Eigen::Index>(n) * t * comps);
  std::vector<Complex> a, b;
  for (int py = 0; py < t; ++py) {
    for (int c = 0; c < comps; ++c) {
      frame_synthesize_line(table.data().data() + static_cast<std::ptrdiff_t>(py) * comps + c,
                            static_cast<std::ptrdiff_t>(t) * comps,
                            mid.data() + static_cast<std::ptrdiff_t>(py) * comps + c,
                            static_cast<std::ptrdiff_t>(t) * comps, frame, a, b);
    }
  }
  // Pass 2: along y, (x, py, c) -> (x, y, c).
  SampledField2D out(FieldShape{table.depth(), comps});
  for (int x = 0; x < n; ++x) {
    for (int c = 0; c < comps; ++c) {
      frame_synthesize_line(mid.data() + static_cast<std::ptrdiff_t>(x) * t * comps + c, comps,
                            out.data().data() + static_cast<std::ptrdiff_t>(x) * n * comps + c,
                            comps, frame, a, b);
    }
  }
  return out;
}

}  // namespace haarlab
