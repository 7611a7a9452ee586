#pragma once

// Brute-force reference computations. Everything here works on dense cell
// samples built straight from the definitions of h_I and h^1_I; none of it
// calls the library's transforms, shifts, paraproducts or norm routines.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "haarlab/field.hpp"

namespace oracle {

using haarlab::CMatrix;
using haarlab::Complex;
using haarlab::CVector;
using haarlab::FieldShape;
using Line = Eigen::VectorXcd;

/// h_I (average = false) or 1_I / sqrt|I| on the 2^depth cells; I = [k 2^-j, (k+1) 2^-j).
inline Eigen::VectorXd profile(int level, int k, int depth, bool average) {
  const int n = 1 << depth;
  const int len = n >> level;
  const double amp = std::sqrt(static_cast<double>(1 << level));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int c = 0; c < len; ++c) v(k * len + c) = (average || c < len / 2) ? amp : -amp;
  return v;
}

/// Profile of coefficient slot s: slot 0 is the constant 1, slot 2^j + k is h_I.
inline Eigen::VectorXd slot_profile(int slot, int depth) {
  if (slot == 0) return profile(0, 0, depth, true);
  int level = 0;
  while ((2 << level) <= slot) ++level;
  return profile(level, slot - (1 << level), depth, false);
}

inline int slot_level(int slot) {
  int level = 0;
  while ((2 << level) <= slot) ++level;
  return level;
}

/// Coefficients <f, phi_sx (x) phi_sy> by direct summation (cell area 1/n^2).
inline haarlab::VectorSpectrum2D analyze(const haarlab::SampledField2D& f) {
  const int n = f.side(), N = f.depth();
  haarlab::VectorSpectrum2D out(f.shape());
  for (int sx = 0; sx < n; ++sx) {
    const Eigen::VectorXd px = slot_profile(sx, N);
    for (int sy = 0; sy < n; ++sy) {
      const Eigen::VectorXd py = slot_profile(sy, N);
      CVector acc = CVector::Zero(f.dim());
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) acc += px(x) * py(y) * f.at(x, y);
      out.at(sx, sy) = acc / static_cast<double>(n * n);
    }
  }
  return out;
}

inline haarlab::SampledField2D synthesize(const haarlab::VectorSpectrum2D& s) {
  const int n = s.side(), N = s.depth();
  haarlab::SampledField2D out(s.shape());
  for (int sx = 0; sx < n; ++sx) {
    const Eigen::VectorXd px = slot_profile(sx, N);
    for (int sy = 0; sy < n; ++sy) {
      const Eigen::VectorXd py = slot_profile(sy, N);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out.at(x, y) += px(x) * py(y) * s.at(sx, sy);
    }
  }
  return out;
}

/// Matrix symbol samples from coefficients.
inline haarlab::SampledSymbol2D synthesize(const haarlab::MatrixSpectrum2D& s) {
  const int n = s.side(), N = s.depth();
  haarlab::SampledSymbol2D out(s.shape());
  for (int sx = 0; sx < n; ++sx) {
    const Eigen::VectorXd px = slot_profile(sx, N);
    for (int sy = 0; sy < n; ++sy) {
      const Eigen::VectorXd py = slot_profile(sy, N);
      const CMatrix c = s.at(sx, sy);
      if (c.norm() == 0.0) continue;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out.at(x, y) += px(x) * py(y) * c;
    }
  }
  return out;
}

/// 1D shift on a sampled scalar line: every h_I with both children's
/// Haar functions representable goes to (h_{I-} - h_{I+}) / sqrt 2.
inline Line shift_line(const Line& f, int depth) {
  const int n = 1 << depth;
  Line out = Line::Zero(n);
  for (int level = 0; level + 1 < depth; ++level)
    for (int k = 0; k < (1 << level); ++k) {
      const Eigen::VectorXd h = profile(level, k, depth, false);
      const Complex c = h.cast<Complex>().dot(f) / static_cast<double>(n);
      const Eigen::VectorXd img =
          (profile(level + 1, 2 * k, depth, false) - profile(level + 1, 2 * k + 1, depth, false)) / std::sqrt(2.0);
      out += c * img.cast<Complex>();
    }
  return out;
}

/// [M_b, Sh](f) on a line.
inline Line commutator_line(const Eigen::VectorXd& b, const Line& f, int depth) {
  const Line bf = b.cast<Complex>().cwiseProduct(f);
  return b.cast<Complex>().cwiseProduct(shift_line(f, depth)) - shift_line(bf, depth);
}

/// Restricted quadruple sum
///   sum_{I in K, J in L} B(IxJ) f(KxL) [M_{h_I},Sh](h_K) (x) [M_{h_J},Sh](h_L)
/// over cancellative I, J, K, L. Only the fully cancellative coefficients of
/// B and f enter.
inline haarlab::SampledField2D quadruple_sum(const haarlab::MatrixSpectrum2D& b,
                                             const haarlab::VectorSpectrum2D& f) {
  const int n = f.side(), N = f.depth(), d = f.dim();
  auto inside = [](int inner, int outer) {
    while (inner > outer) inner >>= 1;
    return inner == outer;
  };
  // Line commutators c[i][k] = [M_{h_i}, Sh](h_k) for cancellative slots i in k.
  std::vector<std::vector<Line>> c(n, std::vector<Line>(n));
  for (int i = 1; i < n; ++i)
    for (int k = 1; k < n; ++k)
      if (inside(i, k)) c[i][k] = commutator_line(slot_profile(i, N), slot_profile(k, N).cast<Complex>(), N);

  haarlab::SampledField2D out(f.shape());
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      const CMatrix bij = b.at(i, j);
      if (bij.norm() == 0.0) continue;
      for (int k = 1; k < n; ++k) {
        if (!inside(i, k)) continue;
        for (int l = 1; l < n; ++l) {
          if (!inside(j, l)) continue;
          const CVector v = bij * f.at(k, l);
          for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) out.at(x, y) += c[i][k](x) * c[j][l](y) * v;
        }
      }
    }
  (void)d;
  return out;
}

enum class Rel { kAny, kEqual, kStrict };

/// One cross term of the quadruple sum, restricted per axis to I = K, I
/// strictly inside K, or either. Per axis the factor is h_I Sh(h_K) (role A)
/// or Sh(h_I h_K) (role C); which = 1..4 is A(x)A, C(x)A, A(x)C, C(x)C.
inline haarlab::SampledField2D cross_term(const haarlab::MatrixSpectrum2D& b, const haarlab::VectorSpectrum2D& f,
                                          int which, Rel rx = Rel::kAny, Rel ry = Rel::kAny) {
  const int n = f.side(), N = f.depth();
  auto related = [](int inner, int outer, Rel rel) {
    if (rel == Rel::kEqual) return inner == outer;
    if (rel == Rel::kStrict && inner == outer) return false;
    while (inner > outer) inner >>= 1;
    return inner == outer;
  };
  auto factor = [&](int i, int k, bool role_c) -> Line {
    const Eigen::VectorXd hi = slot_profile(i, N), hk = slot_profile(k, N);
    if (role_c) return shift_line(hi.cwiseProduct(hk).cast<Complex>(), N);
    return hi.cast<Complex>().cwiseProduct(shift_line(hk.cast<Complex>(), N));
  };
  const bool cx = which == 2 || which == 4, cy = which == 3 || which == 4;
  haarlab::SampledField2D out(f.shape());
  for (int i = 1; i < n; ++i)
    for (int j = 1; j < n; ++j) {
      const CMatrix bij = b.at(i, j);
      if (bij.norm() == 0.0) continue;
      for (int k = 1; k < n; ++k) {
        if (!related(i, k, rx)) continue;
        const Line lx = factor(i, k, cx);
        for (int l = 1; l < n; ++l) {
          if (!related(j, l, ry)) continue;
          const Line ly = factor(j, l, cy);
          const CVector v = bij * f.at(k, l);
          for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) out.at(x, y) += lx(x) * ly(y) * v;
        }
      }
    }
  return out;
}

enum class Kind { kH, kH1 };

/// One term family of a paraproduct, per axis: symbol interval offset (0 or
/// parent), pairing kind and interval, output kind and interval.
struct DirectAxis {
  Kind pair_kind;
  bool pair_at_parent;
  Kind out_kind;
  bool out_at_parent;
  bool symbol_at_parent;
  bool child_sign;
  int generations = 1;  // how far up "parent" is
};

/// Direct sum over base intervals per axis:
///   sum w B(S_x x S_y) <f, p_x (x) p_y> o_x (x) o_y,
/// w = prod |S|^{-1/2} (times the child sign where requested).
inline haarlab::SampledField2D paraproduct(const haarlab::MatrixSpectrum2D& b, const haarlab::VectorSpectrum2D& fs,
                                           const DirectAxis& ax, const DirectAxis& ay) {
  const int N = b.depth(), n = b.side();
  const haarlab::SampledField2D f = synthesize(fs);
  haarlab::SampledField2D out(b.shape());
  struct Term {
    int symbol_slot;
    Eigen::VectorXd pair;
    Eigen::VectorXd out;
    double w;
  };
  auto axis_terms = [&](const DirectAxis& a) {
    std::vector<Term> terms;
    for (int level = 0; level <= N; ++level)
      for (int k = 0; k < (1 << level); ++k) {
        const bool need_parent = a.symbol_at_parent || a.pair_at_parent || a.out_at_parent;
        const int g = a.generations;
        if (need_parent && level < g) continue;
        const int pl = level - g, pk = k >> g;
        const int sl = a.symbol_at_parent ? pl : level, sk = a.symbol_at_parent ? pk : k;
        if (sl >= N) continue;  // symbol must be cancellative
        auto make = [&](Kind kind, bool parent) -> Eigen::VectorXd {
          const int l = parent ? pl : level, kk = parent ? pk : k;
          if (kind == Kind::kH && l >= N) return {};
          return profile(l, kk, N, kind == Kind::kH1);
        };
        Eigen::VectorXd p = make(a.pair_kind, a.pair_at_parent);
        Eigen::VectorXd o = make(a.out_kind, a.out_at_parent);
        if (p.size() == 0 || o.size() == 0) continue;
        double w = std::sqrt(static_cast<double>(1 << sl));
        if (a.child_sign && ((k >> (g - 1)) & 1)) w = -w;
        terms.push_back({(1 << sl) + sk, p, o, w});
      }
    return terms;
  };
  const auto tx = axis_terms(ax), ty = axis_terms(ay);
  for (const auto& a : tx)
    for (const auto& c : ty) {
      CVector pair = CVector::Zero(b.dim());
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) pair += a.pair(x) * c.pair(y) * f.at(x, y);
      pair /= static_cast<double>(n * n);
      const CVector v = a.w * c.w * (CMatrix(b.at(a.symbol_slot, c.symbol_slot)) * pair);
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) out.at(x, y) += a.out(x) * c.out(y) * v;
    }
  return out;
}

/// sup over every nonempty cell subset U of |U|^{-1} sum_{R in U} |b(R)|^2,
/// square-rooted; d = 1, fully cancellative R only. Exponential in 4^N.
inline double exhaustive_bmo_scalar(const haarlab::MatrixSpectrum2D& b) {
  const int N = b.depth(), n = b.side(), cells = n * n;
  struct Rect {
    std::uint32_t mask;
    double w;
  };
  std::vector<Rect> rects;
  for (int sx = 1; sx < n; ++sx)
    for (int sy = 1; sy < n; ++sy) {
      const double w = std::norm(b.at(sx, sy)(0, 0));
      if (w == 0.0) continue;
      const Eigen::VectorXd px = slot_profile(sx, N), py = slot_profile(sy, N);
      std::uint32_t m = 0;
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
          if (px(x) != 0.0 && py(y) != 0.0) m |= 1u << (x * n + y);
      rects.push_back({m, w});
    }
  double best = 0.0;
  for (std::uint64_t u = 1; u < (1ull << cells); ++u) {
    double s = 0.0;
    for (const auto& r : rects)
      if ((r.mask & u) == r.mask) s += r.w;
    best = std::max(best, s / (static_cast<double>(__builtin_popcountll(u)) / cells));
  }
  return std::sqrt(best);
}

/// Conjugate function by explicit DFT: multiplier -i sign(k) for 0 < |k| < n/2.
inline Line dft_hilbert(const Line& f) {
  const int n = static_cast<int>(f.size());
  Line hat = Line::Zero(n), out = Line::Zero(n);
  for (int k = 0; k < n; ++k)
    for (int x = 0; x < n; ++x) hat(k) += f(x) * std::polar(1.0, -2.0 * M_PI * k * x / n);
  for (int k = 0; k < n; ++k) {
    const int signed_k = k < n / 2 ? k : k - n;
    if (signed_k == 0 || 2 * k == n) hat(k) = 0.0;
    else hat(k) *= Complex(0.0, signed_k > 0 ? -1.0 : 1.0);
  }
  for (int x = 0; x < n; ++x)
    for (int k = 0; k < n; ++k) out(x) += hat(k) * std::polar(1.0, 2.0 * M_PI * k * x / n);
  return out / static_cast<double>(n);
}

/// Scalar [[M_b, H1], H2] f on an n x n array via dft_hilbert along rows and columns.
inline Eigen::MatrixXcd hilbert_commutator(const Eigen::MatrixXcd& b, const Eigen::MatrixXcd& f) {
  auto h1 = [](const Eigen::MatrixXcd& g) {
    Eigen::MatrixXcd o(g.rows(), g.cols());
    for (Eigen::Index y = 0; y < g.cols(); ++y) o.col(y) = dft_hilbert(g.col(y));
    return o;
  };
  auto h2 = [](const Eigen::MatrixXcd& g) {
    Eigen::MatrixXcd o(g.rows(), g.cols());
    for (Eigen::Index x = 0; x < g.rows(); ++x) o.row(x) = dft_hilbert(g.row(x).transpose()).transpose();
    return o;
  };
  const Eigen::MatrixXcd t1 = b.cwiseProduct(h1(h2(f)));
  const Eigen::MatrixXcd t2 = h1(b.cwiseProduct(h2(f)));
  const Eigen::MatrixXcd t3 = h2(b.cwiseProduct(h1(f)));
  const Eigen::MatrixXcd t4 = h2(h1(b.cwiseProduct(f)));
  return t1 - t2 - t3 + t4;
}

/// The depth-2 kernel assembled by hand: only the root has children whose
/// Haar functions exist, so K(t, x) = h_root(t) (h_{[0,1/2)} - h_{[1/2,1)})(x) / sqrt 2.
inline Eigen::MatrixXd hand_kernel_depth2() {
  const Eigen::Vector4d h(1, 1, -1, -1);
  const Eigen::Vector4d left(std::sqrt(2.0), -std::sqrt(2.0), 0, 0);
  const Eigen::Vector4d right(0, 0, std::sqrt(2.0), -std::sqrt(2.0));
  return h * ((left - right) / std::sqrt(2.0)).transpose();
}

}  // namespace oracle
