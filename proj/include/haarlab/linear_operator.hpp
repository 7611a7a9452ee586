#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "haarlab/field.hpp"

namespace haarlab {

/// Matrix-free linear map on VectorSpectrum2D, together with its adjoint.
/// Handles are immutable; composition and sums build new handles that share
/// the underlying closures. A dense matrix can be attached for oracle checks.
class LinearOperator {
 public:
  using Map = std::function<VectorSpectrum2D(const VectorSpectrum2D&)>;

  LinearOperator(FieldShape shape, Map apply, Map adjoint, std::string name = "op");

  static LinearOperator zero(FieldShape shape);
  static LinearOperator identity(FieldShape shape);

  const FieldShape& shape() const { return shape_; }
  const std::string& name() const { return name_; }
  /// Length of the flattened coefficient vector, (2^N)^2 * d.
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(shape_.cells()) * shape_.dim; }

  VectorSpectrum2D apply(const VectorSpectrum2D& f) const;
  VectorSpectrum2D apply_adjoint(const VectorSpectrum2D& f) const;
  VectorSpectrum2D operator()(const VectorSpectrum2D& f) const { return apply(f); }

  LinearOperator adjoint() const;
  LinearOperator renamed(std::string name) const;

  /// Copy carrying the dense matrix of the map (columns = images of basis vectors).
  LinearOperator materialized() const;
  bool has_matrix() const { return static_cast<bool>(matrix_); }
  const CMatrix& matrix() const;

  /// Composition: (a * b)(f) = a(b(f)).
  friend LinearOperator operator*(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator+(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator-(const LinearOperator& a, const LinearOperator& b);
  friend LinearOperator operator*(Complex s, const LinearOperator& a);

 private:
  FieldShape shape_;
  std::shared_ptr<const Map> apply_;
  std::shared_ptr<const Map> adjoint_;
  std::shared_ptr<const CMatrix> matrix_;
  std::string name_;
};

/// Dense matrix of the operator in the coefficient basis.
CMatrix materialize(const LinearOperator& op);

/// Orthogonal projection keeping coefficients whose 1D factors are
/// cancellative with level <= max_level_x (resp. y). A negative bound keeps
/// that axis unrestricted.
LinearOperator cancellative_projection(FieldShape shape, int max_level_x, int max_level_y);

struct NormOptions {
  double tol = 1e-12;
  int max_iters = 400;
  int restarts = 5;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

struct NormEstimate {
  double value = 0.0;
  bool converged = false;
  /// Total Krylov steps over all restarts.
  int iterations = 0;
};

/// Largest singular value of `op`, from the top eigenvalue of op* op found
/// by Lanczos with full reorthogonalization. Each restart begins at a seeded
/// random vector; the maximum over restarts is reported. A restart is
/// converged once two successive Ritz values differ by less than tol
/// relatively, or the Krylov space becomes invariant.
NormEstimate operator_norm(const LinearOperator& op, const NormOptions& options = {});

}  // namespace haarlab
