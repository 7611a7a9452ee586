#include "haarlab/hilbert.hpp"

#include <cmath>

#include "haarlab/haar.hpp"

namespace haarlab {
namespace {

// Applies the real matrix m along one axis of a sampled field.
SampledField2D apply_along(const Eigen::MatrixXd& m, const SampledField2D& f, Axis axis) {
  const int n = f.side();
  SampledField2D out(f.shape());
  for (int a = 0; a < n; ++a) {
    for (int other = 0; other < n; ++other) {
      const int x = axis == Axis::kX ? a : other;
      const int y = axis == Axis::kX ? other : a;
      auto dst = out.at(x, y);
      for (int t = 0; t < n; ++t) {
        const double w = m(a, t);
        if (w == 0.0) continue;
        dst += w * (axis == Axis::kX ? f.at(t, other) : f.at(other, t));
      }
    }
  }
  return out;
}

// Mean-zero unit-norm step function on [a, m) u [m, b) in cells, as a dense vector.
Eigen::VectorXd step_haar(int n, int a, int m, int b) {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  const double left = static_cast<double>(m - a) / n;
  const double right = static_cast<double>(b - m) / n;
  const double scale = 1.0 / std::sqrt(1.0 / left + 1.0 / right);
  for (int c = a; c < m; ++c) h(c) = scale / left;
  for (int c = m; c < b; ++c) h(c) = -scale / right;
  return h;
}

}  // namespace

Eigen::MatrixXd hilbert_matrix(int depth) {
  const int n = 1 << depth;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int t = 0; t < n; ++t) {
      double s = 0.0;
      for (int k = 1; 2 * k < n; ++k) s += std::sin(2.0 * M_PI * k * (x - t) / n);
      h(x, t) = 2.0 * s / n;
    }
  }
  return h;
}

SampledField1D discrete_hilbert(const SampledField1D& f) {
  const Eigen::MatrixXd h = hilbert_matrix(f.depth);
  SampledField1D out(f.depth, f.dim);
  for (int x = 0; x < f.side(); ++x)
    for (int t = 0; t < f.side(); ++t) out.at(x) += h(x, t) * f.at(t);
  return out;
}

SampledField2D hilbert(const SampledField2D& f, Axis axis) {
  return apply_along(hilbert_matrix(f.depth()), f, axis);
}

LinearOperator hilbert_operator(FieldShape shape, Axis axis) {
  auto h = std::make_shared<const Eigen::MatrixXd>(hilbert_matrix(shape.depth));
  auto ht = std::make_shared<const Eigen::MatrixXd>(h->transpose());
  return {shape,
          [h, axis](const VectorSpectrum2D& f) {
            return analyze2d(apply_along(*h, synthesize2d(f), axis));
          },
          [ht, axis](const VectorSpectrum2D& f) {
            return analyze2d(apply_along(*ht, synthesize2d(f), axis));
          },
          axis == Axis::kX ? "H1" : "H2"};
}

SampledField2D commutator2p_hilbert(const SampledSymbol2D& b, const SampledField2D& f) {
  require_same_shape(b.shape(), f.shape(), "commutator2p_hilbert");
  const Eigen::MatrixXd h = hilbert_matrix(f.depth());
  auto h1 = [&h](const SampledField2D& g) { return apply_along(h, g, Axis::kX); };
  auto h2 = [&h](const SampledField2D& g) { return apply_along(h, g, Axis::kY); };
  SampledField2D out = multiply(b, h1(h2(f)));
  out -= h1(multiply(b, h2(f)));
  out -= h2(multiply(b, h1(f)));
  out += h2(h1(multiply(b, f)));
  return out;
}

LinearOperator commutator2p_hilbert_operator(const SampledSymbol2D& b) {
  return iterated_commutator(multiplication_operator(b), hilbert_operator(b.shape(), Axis::kX),
                             hilbert_operator(b.shape(), Axis::kY));
}

KernelMatrix shifted_shift_kernel(const ShiftedGrid& grid) {
  GridConfig{grid.depth, 1}.validate();
  if (!(grid.r > 0.0)) throw InvalidConfig("dilation r must be positive");
  const int n = 1 << grid.depth;
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  auto snap = [](double v) { return static_cast<int>(std::lround(v)); };
  for (int level = 0; level <= grid.depth; ++level) {
    const double len = grid.r * n / static_cast<double>(1 << level);
    for (int idx = 0; (idx + 1) * len <= n + 1e-9; ++idx) {
      const double start = idx * len;
      const int a = snap(start), q1 = snap(start + 0.25 * len), m = snap(start + 0.5 * len),
                q3 = snap(start + 0.75 * len), b = snap(start + len);
      if (!(a < q1 && q1 < m && m < q3 && q3 < b)) continue;
      const Eigen::VectorXd h = step_haar(n, a, m, b);
      const Eigen::VectorXd sh = (step_haar(n, a, q1, m) - step_haar(n, m, q3, b)) * M_SQRT1_2;
      for (int t = a; t < b; ++t) {
        const int tt = ((t + grid.alpha) % n + n) % n;
        for (int x = a; x < b; ++x) {
          const int xx = ((x + grid.alpha) % n + n) % n;
          k(tt, xx) += h(t) * sh(x);
        }
      }
    }
  }
  return {k, 1, {grid}};
}

KernelMatrix hilbert_kernel(int depth) {
  const int n = 1 << depth;
  return {n * hilbert_matrix(depth).transpose(), 0, {}};
}

nlohmann::ordered_json to_json(const FitReport& r) {
  nlohmann::ordered_json j;
  j["samples"] = r.samples;
  j["c"] = r.c;
  j["residual_rel"] = r.residual_rel;
  j["normalization"] = r.normalization;
  return j;
}

std::pair<KernelMatrix, FitReport> petermichl_average(const std::vector<ShiftedGrid>& samples) {
  if (samples.empty()) throw PreconditionViolated("petermichl_average needs at least one grid");
  const int depth = samples.front().depth;
  const int n = 1 << depth;
  KernelMatrix avg{Eigen::MatrixXd::Zero(n, n), 0, {}};
  for (const auto& g : samples) {
    if (g.depth != depth) throw PreconditionViolated("all sampled grids must share one depth");
    avg.values += shifted_shift_kernel(g).values;
    avg.grids.push_back(g);
  }
  avg.samples = static_cast<int>(samples.size());
  avg.values /= static_cast<double>(samples.size());

  const Eigen::MatrixXd kh = hilbert_kernel(depth).values;
  FitReport fit;
  fit.samples = avg.samples;
  const double denom = avg.values.squaredNorm();
  fit.c = denom > 0.0 ? (avg.values.array() * kh.array()).sum() / denom : 0.0;
  const double kh_norm = kh.norm();
  fit.residual_rel = kh_norm > 0.0 ? (fit.c * avg.values - kh).norm() / kh_norm : 0.0;
  return {avg, fit};
}

}  // namespace haarlab
