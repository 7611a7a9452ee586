#include "haarlab/paraproducts.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "haarlab/haar.hpp"
#include "haarlab/operators.hpp"

namespace haarlab {

AxisPiece AxisPiece::transposed() const {
  AxisPiece t = *this;
  std::swap(t.pair_kind, t.out_kind);
  std::swap(t.pair_up, t.out_up);
  return t;
}

namespace pieces {

AxisPiece diagonal() {
  return {HaarKind::kCancellative, 0, HaarKind::kCancellative, 0, HaarKind::kAverage, 0};
}

AxisPiece average() {
  return {HaarKind::kCancellative, 0, HaarKind::kAverage, 0, HaarKind::kCancellative, 0};
}

AxisPiece symbol_average() {
  return {HaarKind::kAverage, 0, HaarKind::kCancellative, 0, HaarKind::kCancellative, 0};
}

AxisPiece mean() {
  AxisPiece p{HaarKind::kAverage, 0, HaarKind::kAverage, 0, HaarKind::kAverage, 0};
  p.root_only = true;
  return p;
}

AxisPiece parent_child(int generations) {
  return {HaarKind::kCancellative, generations, HaarKind::kCancellative, 0,
          HaarKind::kCancellative, 0, PieceWeight::kChildSign};
}


AxisPiece parent_diagonal(int generations, PieceWeight weight) {
  return {HaarKind::kCancellative, generations, HaarKind::kCancellative, generations,
          HaarKind::kCancellative, 0, weight};
}

AxisPiece parent_child_to_parent(int generations) {
  return parent_diagonal(generations, PieceWeight::kChildSign).transposed();
}

}  // namespace pieces

namespace {

// One summand of an axis piece, as frame positions and a weight.
struct AxisTerm {
  int symbol;
  int pair;
  int out;
  double weight;
};

std::vector<AxisTerm> enumerate_terms(const AxisPiece& piece, int depth) {
  const AxisFrame frame{depth};
  const int reach = std::max({piece.symbol_up, piece.pair_up, piece.out_up});
  if (piece.weight == PieceWeight::kChildSign && piece.symbol_up < 1) {
    throw UnsupportedVariant("child-sign weights need the symbol above the base interval");
  }
  std::vector<AxisTerm> terms;
  const int top_level = piece.root_only ? 0 : depth;
  for (int level = reach; level <= top_level; ++level) {
    for (int k = 0; k < (1 << level); ++k) {
      const DyadicInterval base{level, k};
      const DyadicInterval s = ancestor(base, piece.symbol_up);
      const DyadicInterval p = ancestor(base, piece.pair_up);
      const DyadicInterval o = ancestor(base, piece.out_up);
      if (!frame.defined(piece.symbol_kind, s) || !frame.defined(piece.pair_kind, p) ||
          !frame.defined(piece.out_kind, o)) {
        continue;
      }
      double w = 1.0 / std::sqrt(s.measure());
      if (piece.weight == PieceWeight::kChildSign) {
        if (!ancestor(base, piece.symbol_up - 1).is_left_child()) w = -w;
      }
      terms.push_back({frame.position(piece.symbol_kind, s), frame.position(piece.pair_kind, p),
                       frame.position(piece.out_kind, o), w});
    }
  }
  return terms;
}

struct TensorKernel {
  FieldShape shape;
  FrameTable2D symbol;  // frame pairings of B, d*d components
  std::vector<AxisTerm> x;
  std::vector<AxisTerm> y;

  VectorSpectrum2D run(const VectorSpectrum2D& f, bool adjoint) const {
    const int d = shape.dim;
    const FrameTable2D in = frame_analyze(synthesize2d(f));
    FrameTable2D out(shape.depth, d);
    using ConstVec = Eigen::Map<const CVector>;
    using Vec = Eigen::Map<CVector>;
    using ConstMat = Eigen::Map<const RowMajorCMatrix>;
    for (const auto& a : x) {
      for (const auto& b : y) {
        const ConstMat m(symbol.at(a.symbol, b.symbol), d, d);
        const double w = a.weight * b.weight;
        if (!adjoint) {
          Vec(out.at(a.out, b.out), d).noalias() += w * (m * ConstVec(in.at(a.pair, b.pair), d));
        } else {
          Vec(out.at(a.pair, b.pair), d).noalias() +=
              w * (m.adjoint() * ConstVec(in.at(a.out, b.out), d));
        }
      }
    }
    return analyze2d(frame_synthesize(out));
  }
};

LinearOperator shift_power(FieldShape shape, bool x, bool y) {
  LinearOperator op = LinearOperator::identity(shape);
  if (x) op = shift_operator(shape, Axis::kX);
  if (y) op = x ? op * shift_operator(shape, Axis::kY) : shift_operator(shape, Axis::kY);
  return op;
}

// Per-axis summand of the A or C factor, with its shift placement.
struct RolePiece {
  AxisPiece piece;
  bool pre_shift;
  bool post_shift;
};

std::vector<RolePiece> role_pieces(bool a_role) {
  if (a_role) {
    return {{pieces::parent_child(1), true, false},
            {pieces::diagonal(), true, false},
            {pieces::average(), true, false}};
  }
  return {{pieces::diagonal(), false, true}, {pieces::average(), false, true}};
}

LinearOperator role_product(const MatrixSpectrum2D& symbol, const RolePiece& px,
                            const RolePiece& py) {
  const FieldShape shape = symbol.shape();
  return shift_power(shape, px.post_shift, py.post_shift) *
         tensor_paraproduct(symbol, px.piece, py.piece) *
         shift_power(shape, px.pre_shift, py.pre_shift);
}

LinearOperator generic_cross_term(int which, const MatrixSpectrum2D& symbol) {
  const bool x_is_a = which == 1 || which == 3;
  const bool y_is_a = which == 1 || which == 2;
  LinearOperator sum = LinearOperator::zero(symbol.shape());
  for (const auto& px : role_pieces(x_is_a))
    for (const auto& py : role_pieces(y_is_a)) sum = sum + role_product(symbol, px, py);
  return sum.renamed("T" + std::to_string(which));
}

}  // namespace

LinearOperator tensor_paraproduct(const MatrixSpectrum2D& symbol, const AxisPiece& x,
                                  const AxisPiece& y, const std::string& name) {
  const FieldShape shape = symbol.shape();
  auto kernel = std::make_shared<const TensorKernel>(
      TensorKernel{shape, frame_analyze(synthesize2d(symbol)), enumerate_terms(x, shape.depth),
                   enumerate_terms(y, shape.depth)});
  return {shape, [kernel](const VectorSpectrum2D& f) { return kernel->run(f, false); },
          [kernel](const VectorSpectrum2D& f) { return kernel->run(f, true); }, name};
}

std::string to_string(ParaproductVariant v) {
  switch (v) {
    case ParaproductVariant::kP1: return "P1";
    case ParaproductVariant::kP2: return "P2";
    case ParaproductVariant::kP3: return "P3";
    case ParaproductVariant::kP4: return "P4";
    case ParaproductVariant::kP5: return "P5";
  }
  return "?";
}

std::pair<AxisPiece, AxisPiece> axis_pieces(const ParaproductSpec& spec) {
  const bool parent_indexed =
      spec.variant == ParaproductVariant::kP1 || spec.variant == ParaproductVariant::kP2;
  if (parent_indexed && (spec.generation < 1 || spec.generation > 2)) {
    throw UnsupportedVariant("generation must be 1 or 2, got " + std::to_string(spec.generation));
  }
  const PieceWeight weight =
      spec.signs == SignPattern::kChildSign ? PieceWeight::kChildSign : PieceWeight::kOne;
  const int g = spec.generation;
  switch (spec.variant) {
    case ParaproductVariant::kP1: {
      AxisPiece y = spec.dual_form ? pieces::parent_child_to_parent(g) : pieces::parent_child(g);
      y.weight = weight;
      return {pieces::diagonal(), y};
    }
    case ParaproductVariant::kP2:
      if (spec.dual_form) throw UnsupportedVariant("P2 has no dual form");
      return {pieces::average(), pieces::parent_diagonal(g, weight)};
    case ParaproductVariant::kP3:
      if (spec.dual_form) return {pieces::diagonal(), pieces::diagonal()};
      return {pieces::average(), pieces::average()};
    case ParaproductVariant::kP4:
      if (spec.dual_form) throw UnsupportedVariant("P4 has no dual form");
      return {pieces::diagonal(), pieces::average()};
    case ParaproductVariant::kP5:
      if (spec.dual_form) throw UnsupportedVariant("P5 has no dual form");
      return {pieces::average(), pieces::diagonal()};
  }
  throw UnsupportedVariant("unknown paraproduct variant");
}

LinearOperator paraproduct_operator(const ParaproductSpec& spec) {
  const auto [x, y] = axis_pieces(spec);
  return tensor_paraproduct(spec.symbol, x, y, to_string(spec.variant) + (spec.dual_form ? "'" : ""));
}

VectorSpectrum2D apply_paraproduct(const ParaproductSpec& spec, const VectorSpectrum2D& f) {
  require_same_shape(spec.symbol.shape(), f.shape(), "apply_paraproduct");
  return paraproduct_operator(spec).apply(f);
}

ParaproductSpec paraproduct_adjoint(const ParaproductSpec& spec) {
  ParaproductSpec out = spec;
  out.symbol = spec.symbol.adjoint();
  switch (spec.variant) {
    case ParaproductVariant::kP2:
      out.variant = ParaproductVariant::kP1;
      out.dual_form = true;
      return out;
    case ParaproductVariant::kP1:
      if (!spec.dual_form) break;
      out.variant = ParaproductVariant::kP2;
      out.dual_form = false;
      return out;
    case ParaproductVariant::kP3:
      out.dual_form = !spec.dual_form;
      return out;
    default:
      break;
  }
  throw UnsupportedVariant("no adjoint spec for " + to_string(spec.variant) +
                           (spec.dual_form ? " (dual form)" : ""));
}

CaseId case_from_string(const std::string& name) {
  if (name == "I=K,J=L") return CaseId::kEqualEqual;
  if (name == "I<K,J<L") return CaseId::kStrictStrict;
  if (name == "I=K,J<L") return CaseId::kEqualStrict;
  if (name == "I<K,J=L") return CaseId::kStrictEqual;
  throw UnknownSpec("unknown case id '" + name + "'");
}

std::string to_string(CaseId id) {
  switch (id) {
    case CaseId::kEqualEqual: return "I=K,J=L";
    case CaseId::kStrictStrict: return "I<K,J<L";
    case CaseId::kEqualStrict: return "I=K,J<L";
    case CaseId::kStrictEqual: return "I<K,J=L";
  }
  return "?";
}

LinearOperator case_operator(CaseId id, const MatrixSpectrum2D& symbol) {
  const FieldShape shape = symbol.shape();
  const LinearOperator sh1 = shift_operator(shape, Axis::kX);
  const LinearOperator sh2 = shift_operator(shape, Axis::kY);
  auto para = [&symbol](ParaproductVariant v, SignPattern s = SignPattern::kChildSign,
                        bool dual = false) {
    return paraproduct_operator(ParaproductSpec{v, symbol, s, 1, dual});
  };
  LinearOperator op = LinearOperator::zero(shape);
  switch (id) {
    case CaseId::kEqualEqual:
      op = sh1 * para(ParaproductVariant::kP1) * sh2;
      break;
    case CaseId::kStrictStrict:
      op = sh1 * (para(ParaproductVariant::kP3) + para(ParaproductVariant::kP5)) * sh2;
      break;
    case CaseId::kEqualStrict:
      op = sh1 *
           (para(ParaproductVariant::kP4) +
            para(ParaproductVariant::kP3, SignPattern::kChildSign, true)) *
           sh2;
      break;
    case CaseId::kStrictEqual:
      op = Complex(M_SQRT1_2, 0.0) * (sh1 * para(ParaproductVariant::kP2, SignPattern::kUniform));
      break;
  }
  return op.renamed("case[" + to_string(id) + "]");
}

LinearOperator cross_term(int which, const MatrixSpectrum2D& symbol, bool from_cases) {
  if (which < 1 || which > 4) throw UnknownSpec("cross term index must be 1..4");
  if (which != 2 || !from_cases) return generic_cross_term(which, symbol);
  LinearOperator sum = LinearOperator::zero(symbol.shape());
  for (CaseId id : {CaseId::kEqualEqual, CaseId::kStrictStrict, CaseId::kEqualStrict,
                    CaseId::kStrictEqual}) {
    sum = sum + case_operator(id, symbol);
  }
  return sum.renamed("T2");
}

nlohmann::ordered_json to_json(const IdentityRecord& r) {
  nlohmann::ordered_json j;
  j["case"] = r.name;
  j["N"] = r.depth;
  j["d"] = r.dim;
  j["residual"] = r.residual;
  return j;
}

IdentityRecord decomposition_check(const MatrixSpectrum2D& symbol, const VectorSpectrum2D& f) {
  require_same_shape(symbol.shape(), f.shape(), "decomposition_check");
  const int safe = f.depth() - 2;
  auto tol = [](const CVector& v) { return 1e-13 * std::max(1.0, v.norm()); };
  // Coefficients of B that are constant along an axis commute with the shifts.
  const MatrixSpectrum2D b_cancel = restrict_cancellative(symbol, f.depth() - 1);
  if (!is_cancellative_up_to(b_cancel, safe, tol(symbol.data())) ||
      !is_cancellative_up_to(f, safe, tol(f.data()))) {
    throw PreconditionViolated(
        "decomposition_check needs f fully cancellative and B's cancellative part at levels <= N-2");
  }
  const VectorSpectrum2D lhs = analyze2d(commutator2p(synthesize2d(symbol), synthesize2d(f)));
  VectorSpectrum2D rhs = cross_term(1, symbol).apply(f);
  rhs -= cross_term(2, symbol).apply(f);
  rhs -= cross_term(3, symbol).apply(f);
  rhs += cross_term(4, symbol).apply(f);
  const double scale = norm(f);
  const double diff = (lhs.data() - rhs.data()).norm();
  return {"commutator=T1-T2-T3+T4", f.depth(), f.dim(), scale > 0.0 ? diff / scale : diff};
}

VectorSpectrum2D NineTermExpansion::apply(const VectorSpectrum2D& f) const {
  VectorSpectrum2D sum(f.shape());
  for (const auto& t : terms) sum += t.op.apply(f);
  for (const auto& t : mean_terms) sum += t.op.apply(f);
  return sum;
}

NineTermExpansion nine_term_expand(const MatrixSpectrum2D& symbol) {
  struct Named {
    const char* name;
    AxisPiece piece;
  };
  const Named x_order[] = {{"D", pieces::diagonal()},
                           {"S", pieces::symbol_average()},
                           {"A", pieces::average()}};
  const Named y_order[] = {{"D", pieces::diagonal()},
                           {"A", pieces::average()},
                           {"S", pieces::symbol_average()}};
  const Named m{"M", pieces::mean()};
  NineTermExpansion out;
  int index = 1;
  for (const auto& x : x_order) {
    for (const auto& y : y_order) {
      const std::string name = "T" + std::to_string(index++);
      out.terms.push_back({name, x.piece, y.piece, tensor_paraproduct(symbol, x.piece, y.piece, name)});
    }
  }
  auto add_mean = [&](const Named& x, const Named& y) {
    const std::string name = std::string(x.name) + "(x)" + y.name;
    out.mean_terms.push_back(
        {name, x.piece, y.piece, tensor_paraproduct(symbol, x.piece, y.piece, name)});
  };
  for (const auto& y : y_order) add_mean(m, y);
  for (const auto& x : x_order) add_mean(x, m);
  add_mean(m, m);
  return out;
}

IdentityRecord product_identity_check(const MatrixSpectrum2D& symbol, const VectorSpectrum2D& f) {
  require_same_shape(symbol.shape(), f.shape(), "product_identity_check");
  const VectorSpectrum2D expected = analyze2d(multiply(synthesize2d(symbol), synthesize2d(f)));
  const VectorSpectrum2D got = nine_term_expand(symbol).apply(f);
  const double scale = expected.data().norm();
  const double diff = (got.data() - expected.data()).norm();
  return {"Bf=sum(T1..T9)+means", f.depth(), f.dim(), scale > 0.0 ? diff / scale : diff};
}

}  // namespace haarlab
