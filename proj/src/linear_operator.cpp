#include "haarlab/linear_operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

namespace haarlab {

LinearOperator::LinearOperator(FieldShape shape, Map apply, Map adjoint, std::string name)
    : shape_(shape),
      apply_(std::make_shared<const Map>(std::move(apply))),
      adjoint_(std::make_shared<const Map>(std::move(adjoint))),
      name_(std::move(name)) {}

LinearOperator LinearOperator::zero(FieldShape shape) {
  auto z = [shape](const VectorSpectrum2D&) { return VectorSpectrum2D(shape); };
  return {shape, z, z, "zero"};
}

LinearOperator LinearOperator::identity(FieldShape shape) {
  auto id = [](const VectorSpectrum2D& f) { return f; };
  return {shape, id, id, "identity"};
}

VectorSpectrum2D LinearOperator::apply(const VectorSpectrum2D& f) const {
  require_same_shape(shape_, f.shape(), name_.c_str());
  return (*apply_)(f);
}

VectorSpectrum2D LinearOperator::apply_adjoint(const VectorSpectrum2D& f) const {
  require_same_shape(shape_, f.shape(), name_.c_str());
  return (*adjoint_)(f);
}

LinearOperator LinearOperator::adjoint() const {
  LinearOperator out = *this;
  std::swap(out.apply_, out.adjoint_);
  if (matrix_) out.matrix_ = std::make_shared<const CMatrix>(matrix_->adjoint());
  out.name_ = name_ + "*";
  return out;
}

LinearOperator LinearOperator::renamed(std::string name) const {
  LinearOperator out = *this;
  out.name_ = std::move(name);
  return out;
}

LinearOperator LinearOperator::materialized() const {
  LinearOperator out = *this;
  out.matrix_ = std::make_shared<const CMatrix>(materialize(*this));
  return out;
}

const CMatrix& LinearOperator::matrix() const {
  if (!matrix_) throw PreconditionViolated("operator " + name_ + " has no materialized matrix");
  return *matrix_;
}

LinearOperator operator*(const LinearOperator& a, const LinearOperator& b) {
  require_same_shape(a.shape_, b.shape_, "operator composition");
  auto fa = a.apply_, fb = b.apply_, ga = a.adjoint_, gb = b.adjoint_;
  return {a.shape_, [fa, fb](const VectorSpectrum2D& f) { return (*fa)((*fb)(f)); },
          [ga, gb](const VectorSpectrum2D& f) { return (*gb)((*ga)(f)); },
          a.name_ + "." + b.name_};
}

LinearOperator operator+(const LinearOperator& a, const LinearOperator& b) {
  require_same_shape(a.shape_, b.shape_, "operator sum");
  auto fa = a.apply_, fb = b.apply_, ga = a.adjoint_, gb = b.adjoint_;
  return {a.shape_, [fa, fb](const VectorSpectrum2D& f) { return (*fa)(f) + (*fb)(f); },
          [ga, gb](const VectorSpectrum2D& f) { return (*ga)(f) + (*gb)(f); },
          "(" + a.name_ + "+" + b.name_ + ")"};
}

LinearOperator operator-(const LinearOperator& a, const LinearOperator& b) {
  require_same_shape(a.shape_, b.shape_, "operator difference");
  auto fa = a.apply_, fb = b.apply_, ga = a.adjoint_, gb = b.adjoint_;
  return {a.shape_, [fa, fb](const VectorSpectrum2D& f) { return (*fa)(f) - (*fb)(f); },
          [ga, gb](const VectorSpectrum2D& f) { return (*ga)(f) - (*gb)(f); },
          "(" + a.name_ + "-" + b.name_ + ")"};
}

LinearOperator operator*(Complex s, const LinearOperator& a) {
  auto fa = a.apply_, ga = a.adjoint_;
  const Complex sc = std::conj(s);
  return {a.shape_, [fa, s](const VectorSpectrum2D& f) { return s * (*fa)(f); },
          [ga, sc](const VectorSpectrum2D& f) { return sc * (*ga)(f); }, a.name_};
}

CMatrix materialize(const LinearOperator& op) {
  const Eigen::Index n = op.dimension();
  CMatrix m(n, n);
  VectorSpectrum2D e(op.shape());
  for (Eigen::Index j = 0; j < n; ++j) {
    e.data().setZero();
    e.data()(j) = 1.0;
    m.col(j) = op.apply(e).data();
  }
  return m;
}

LinearOperator cancellative_projection(FieldShape shape, int max_level_x, int max_level_y) {
  auto keep = [](int slot, int max_level) {
    if (max_level < 0) return true;
    return slot >= 1 && DyadicInterval::from_heap(slot).level <= max_level;
  };
  auto project = [keep, max_level_x, max_level_y](const VectorSpectrum2D& f) {
    VectorSpectrum2D out = f;
    for (int x = 0; x < f.side(); ++x)
      for (int y = 0; y < f.side(); ++y)
        if (!keep(x, max_level_x) || !keep(y, max_level_y)) out.at(x, y).setZero();
    return out;
  };
  return {shape, project, project, "P"};
}

namespace {

double top_ritz_value(const std::vector<double>& alpha, const std::vector<double>& beta) {
  const auto k = static_cast<Eigen::Index>(alpha.size());
  if (k == 1) return alpha[0];
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    t(i, i) = alpha[i];
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

NormEstimate operator_norm(const LinearOperator& op, const NormOptions& options) {
  const Eigen::Index n = op.dimension();
  const int max_steps = static_cast<int>(std::min<Eigen::Index>(options.max_iters, n));
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  NormEstimate result;
  result.converged = true;
  double best = 0.0;

  for (int restart = 0; restart < std::max(1, options.restarts); ++restart) {
    CVector q(n);
    for (Eigen::Index i = 0; i < n; ++i) q(i) = Complex(gauss(rng), gauss(rng));
    q.normalize();

    std::vector<CVector> basis;
    std::vector<double> alpha, beta;
    double previous = -1.0;
    int stable_steps = 0;
    bool converged = false;
    double theta = 0.0;

    for (int step = 0; step < max_steps; ++step) {
      basis.push_back(q);
      const VectorSpectrum2D qv(op.shape(), q);
      CVector w = op.apply_adjoint(op.apply(qv)).data();
      const double a = q.dot(w).real();
      w -= a * q;
      if (step > 0) w -= beta.back() * basis[basis.size() - 2];
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : basis) w -= v.dot(w) * v;
      }
      alpha.push_back(a);
      theta = top_ritz_value(alpha, beta);
      ++result.iterations;

      const double b = w.norm();
      const double scale = std::max(std::abs(theta), std::abs(a));
      if (b <= 1e-13 * scale || scale == 0.0) {
        converged = true;  // invariant Krylov subspace
        break;
      }
      if (previous >= 0.0 && std::abs(theta - previous) <= options.tol * std::abs(theta)) {
        if (++stable_steps >= 2) {
          converged = true;
          break;
        }
      } else {
        stable_steps = 0;
      }
      previous = theta;
      beta.push_back(b);
      q = w / b;
    }
    if (static_cast<Eigen::Index>(basis.size()) == n) converged = true;
    result.converged = result.converged && converged;
    best = std::max(best, theta);
  }
  result.value = std::sqrt(std::max(best, 0.0));
  return result;
}

}  // namespace haarlab
