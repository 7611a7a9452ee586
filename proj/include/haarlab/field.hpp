#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "haarlab/errors.hpp"
#include "haarlab/grid.hpp"

namespace haarlab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RowMajorCMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Values are cell samples; inner products carry the cell area.
struct SampleSpace {
  static double weight(const FieldShape& s) { return 1.0 / s.cells(); }
};
/// Values are coefficients in the orthonormal Haar basis.
struct CoefficientSpace {
  static double weight(const FieldShape&) { return 1.0; }
};

/// A C^d-valued array over the 2^N x 2^N grid, either cell samples or Haar
/// coefficients depending on Space. Entry (x, y) of component c lives at
/// ((x * side + y) * dim + c).
template <class Space>
class VectorGrid {
 public:
  VectorGrid() = default;
  explicit VectorGrid(FieldShape shape)
      : shape_(shape), data_(CVector::Zero(static_cast<Eigen::Index>(shape.cells()) * shape.dim)) {}
  VectorGrid(FieldShape shape, CVector data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != static_cast<Eigen::Index>(shape.cells()) * shape.dim) {
      throw DimensionMismatch("vector grid payload has the wrong length");
    }
  }

  const FieldShape& shape() const { return shape_; }
  int depth() const { return shape_.depth; }
  int dim() const { return shape_.dim; }
  int side() const { return shape_.side(); }

  const CVector& data() const { return data_; }
  CVector& data() { return data_; }

  Eigen::Index offset(int x, int y) const {
    return (static_cast<Eigen::Index>(x) * side() + y) * dim();
  }
  auto at(int x, int y) { return data_.segment(offset(x, y), dim()); }
  auto at(int x, int y) const { return data_.segment(offset(x, y), dim()); }

  VectorGrid& operator+=(const VectorGrid& o) {
    require_same_shape(shape_, o.shape_, "vector grid +=");
    data_ += o.data_;
    return *this;
  }
  VectorGrid& operator-=(const VectorGrid& o) {
    require_same_shape(shape_, o.shape_, "vector grid -=");
    data_ -= o.data_;
    return *this;
  }
  VectorGrid& operator*=(Complex s) {
    data_ *= s;
    return *this;
  }
  friend VectorGrid operator+(VectorGrid a, const VectorGrid& b) { return a += b; }
  friend VectorGrid operator-(VectorGrid a, const VectorGrid& b) { return a -= b; }
  friend VectorGrid operator*(Complex s, VectorGrid a) { return a *= s; }

 private:
  FieldShape shape_{};
  CVector data_;
};

/// A d x d matrix per grid entry, stored row-major per entry.
template <class Space>
class MatrixGrid {
 public:
  using Block = Eigen::Map<RowMajorCMatrix>;
  using ConstBlock = Eigen::Map<const RowMajorCMatrix>;

  MatrixGrid() = default;
  explicit MatrixGrid(FieldShape shape)
      : shape_(shape),
        data_(CVector::Zero(static_cast<Eigen::Index>(shape.cells()) * shape.dim * shape.dim)) {}
  MatrixGrid(FieldShape shape, CVector data) : shape_(shape), data_(std::move(data)) {
    if (data_.size() != static_cast<Eigen::Index>(shape.cells()) * shape.dim * shape.dim) {
      throw DimensionMismatch("matrix grid payload has the wrong length");
    }
  }

  const FieldShape& shape() const { return shape_; }
  int depth() const { return shape_.depth; }
  int dim() const { return shape_.dim; }
  int side() const { return shape_.side(); }

  const CVector& data() const { return data_; }
  CVector& data() { return data_; }

  Eigen::Index offset(int x, int y) const {
    return (static_cast<Eigen::Index>(x) * side() + y) * dim() * dim();
  }
  Block at(int x, int y) { return Block(data_.data() + offset(x, y), dim(), dim()); }
  ConstBlock at(int x, int y) const { return ConstBlock(data_.data() + offset(x, y), dim(), dim()); }

  MatrixGrid& operator+=(const MatrixGrid& o) {
    require_same_shape(shape_, o.shape_, "matrix grid +=");
    data_ += o.data_;
    return *this;
  }
  MatrixGrid& operator*=(Complex s) {
    data_ *= s;
    return *this;
  }
  friend MatrixGrid operator+(MatrixGrid a, const MatrixGrid& b) { return a += b; }
  friend MatrixGrid operator*(Complex s, MatrixGrid a) { return a *= s; }

  /// Entrywise conjugate transpose of every block (the symbol B*).
  MatrixGrid adjoint() const {
    MatrixGrid out(shape_);
    for (int x = 0; x < side(); ++x)
      for (int y = 0; y < side(); ++y) out.at(x, y) = at(x, y).adjoint();
    return out;
  }

  /// Scalar (dim 1) grid holding entry (row, col) of every block.
  MatrixGrid entry(int row, int col) const {
    MatrixGrid out(FieldShape{depth(), 1});
    for (int x = 0; x < side(); ++x)
      for (int y = 0; y < side(); ++y) out.at(x, y)(0, 0) = at(x, y)(row, col);
    return out;
  }

 private:
  FieldShape shape_{};
  CVector data_;
};

using SampledField2D = VectorGrid<SampleSpace>;
using VectorSpectrum2D = VectorGrid<CoefficientSpace>;
using SampledSymbol2D = MatrixGrid<SampleSpace>;
using MatrixSpectrum2D = MatrixGrid<CoefficientSpace>;

/// <f, g> = sum f . conj(g), weighted by the cell area in sample space.
template <class Space>
Complex inner(const VectorGrid<Space>& f, const VectorGrid<Space>& g) {
  require_same_shape(f.shape(), g.shape(), "inner product");
  return g.data().dot(f.data()) * Space::weight(f.shape());
}

template <class Space>
double norm(const VectorGrid<Space>& f) {
  return f.data().norm() * std::sqrt(Space::weight(f.shape()));
}

/// Trace pairing <A, B> = sum_R tr(A(R) B(R)^*).
template <class Space>
Complex inner(const MatrixGrid<Space>& a, const MatrixGrid<Space>& b) {
  require_same_shape(a.shape(), b.shape(), "trace pairing");
  return b.data().dot(a.data()) * Space::weight(a.shape());
}

/// Embeds a scalar grid as the (row, col) entry of a dim x dim grid: b E_{row,col}.
template <class Space>
MatrixGrid<Space> embed_entry(const MatrixGrid<Space>& scalar, int dim, int row, int col) {
  if (scalar.dim() != 1) throw DimensionMismatch("embed_entry expects a scalar grid");
  MatrixGrid<Space> out(FieldShape{scalar.depth(), dim});
  for (int x = 0; x < scalar.side(); ++x)
    for (int y = 0; y < scalar.side(); ++y) out.at(x, y)(row, col) = scalar.at(x, y)(0, 0);
  return out;
}

/// One-dimensional C^d line: 2^N samples or coefficients (slot 0 = mean).
template <class Space>
struct VectorLine {
  int depth = 0;
  int dim = 0;
  CVector data;

  VectorLine() = default;
  VectorLine(int depth_, int dim_)
      : depth(depth_), dim(dim_), data(CVector::Zero(static_cast<Eigen::Index>(dim_) << depth_)) {}
  int side() const { return 1 << depth; }
  auto at(int i) { return data.segment(static_cast<Eigen::Index>(i) * dim, dim); }
  auto at(int i) const { return data.segment(static_cast<Eigen::Index>(i) * dim, dim); }
};

using SampledField1D = VectorLine<SampleSpace>;
using VectorSpectrum1D = VectorLine<CoefficientSpace>;

}  // namespace haarlab
