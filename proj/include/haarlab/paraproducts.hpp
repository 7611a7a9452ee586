#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "haarlab/field.hpp"
#include "haarlab/linear_operator.hpp"

namespace haarlab {

// ---------------------------------------------------------------------------
// Generic tensor paraproducts.
//
// Every operator in this module is a sum over rectangles of
//   w_x w_y  <B, s_x (x) s_y>  <f, p_x (x) p_y>  o_x (x) o_y
// where, per axis, the symbol function s, the pairing function p and the
// output function o are h or h^1 on a base interval or one of its ancestors.
// An AxisPiece describes one axis of such a sum.

enum class PieceWeight {
  kOne,        // |S|^{-1/2}, S the symbol interval
  kChildSign,  // sign of h_S on the base interval, times |S|^{-1/2}
};

struct AxisPiece {
  HaarKind symbol_kind = HaarKind::kCancellative;
  int symbol_up = 0;  // generations from the base interval
  HaarKind pair_kind = HaarKind::kCancellative;
  int pair_up = 0;
  HaarKind out_kind = HaarKind::kCancellative;
  int out_up = 0;
  PieceWeight weight = PieceWeight::kOne;
  bool root_only = false;

  /// Swaps pairing and output, which is the adjoint once B becomes B*.
  AxisPiece transposed() const;
  bool operator==(const AxisPiece&) const = default;
};

namespace pieces {
/// b h_I^2 pairing: <f, h_I> h^1_I |I|^{-1/2}.
AxisPiece diagonal();
/// <f, h^1_I> h_I |I|^{-1/2}.
AxisPiece average();
/// <B, h^1_I> <f, h_I> h_I |I|^{-1/2}.
AxisPiece symbol_average();
/// <B, h^1> <f, h^1> h^1 on the whole interval.
AxisPiece mean();
/// Symbol at the g-th ancestor S of J, pairing and output at J, signed by h_S on J.
AxisPiece parent_child(int generations);
/// Pairing at J, symbol and output at the g-th ancestor (transpose of parent_diagonal).
AxisPiece parent_child_to_parent(int generations);
/// Symbol and pairing at the g-th ancestor S of J, output at J.
AxisPiece parent_diagonal(int generations, PieceWeight weight);
}  // namespace pieces

/// Matrix-free tensor paraproduct with symbol B (coefficient space).
LinearOperator tensor_paraproduct(const MatrixSpectrum2D& symbol, const AxisPiece& x,
                                  const AxisPiece& y, const std::string& name = "P");

// ---------------------------------------------------------------------------
// The five paraproducts.

enum class ParaproductVariant { kP1, kP2, kP3, kP4, kP5 };

/// Signs of the parent-indexed variants: haar sign of the child position, or all +.
enum class SignPattern { kChildSign, kUniform };

struct ParaproductSpec {
  ParaproductVariant variant = ParaproductVariant::kP3;
  MatrixSpectrum2D symbol;
  SignPattern signs = SignPattern::kChildSign;
  /// Ancestor distance for P1/P2 (1 = parent, 2 = grandparent).
  int generation = 1;
  /// Adjoint-shaped forms: P1 with output at the parent, and (P3_{B*})* for P3.
  bool dual_form = false;
};

std::string to_string(ParaproductVariant v);
/// Per-axis pieces realizing a spec; throws UnsupportedVariant for invalid combinations.
std::pair<AxisPiece, AxisPiece> axis_pieces(const ParaproductSpec& spec);

VectorSpectrum2D apply_paraproduct(const ParaproductSpec& spec, const VectorSpectrum2D& f);
LinearOperator paraproduct_operator(const ParaproductSpec& spec);

/// Spec of the adjoint operator: P2 <-> P1 (output at parent) with B*, and
/// P3 <-> (P3)* form with B*. Throws UnsupportedVariant otherwise.
ParaproductSpec paraproduct_adjoint(const ParaproductSpec& spec);

// ---------------------------------------------------------------------------
// Commutator decomposition with shifts.

enum class CaseId { kEqualEqual, kStrictStrict, kEqualStrict, kStrictEqual };

/// Accepts "I=K,J=L", "I<K,J<L", "I=K,J<L", "I<K,J=L"; throws UnknownSpec.
CaseId case_from_string(const std::string& name);
std::string to_string(CaseId id);

/// Case operator of the second cross term C(x) A:
///   I=K,J=L: Sh1 P1 Sh2;  I<K,J<L: Sh1 (P3 + P5) Sh2;
///   I=K,J<L: Sh1 (P4 + (P3_{B*})*) Sh2;  I<K,J=L: 2^{-1/2} Sh1 P2[uniform].
LinearOperator case_operator(CaseId id, const MatrixSpectrum2D& symbol);

/// The four cross terms of the commutator, T1 = A(x)A, T2 = C(x)A,
/// T3 = A(x)C, T4 = C(x)C, where per axis A collects b h_I Sh(h_K) and C
/// collects Sh(b h_I h_K) over I inside K. By default T2 is assembled from
/// the four case operators; the others, and T2 when from_cases is false, from
/// the same pieces with axis roles swapped.
LinearOperator cross_term(int which, const MatrixSpectrum2D& symbol, bool from_cases = true);

struct IdentityRecord {
  std::string name;
  int depth = 0;
  int dim = 0;
  double residual = 0.0;
};
nlohmann::ordered_json to_json(const IdentityRecord& r);

/// ||[[M_B,Sh1],Sh2] f - (T1 - T2 - T3 + T4) f|| / ||f||. f must be fully
/// cancellative with levels <= N-2, and so must the fully cancellative part
/// of B (PreconditionViolated otherwise).
IdentityRecord decomposition_check(const MatrixSpectrum2D& symbol, const VectorSpectrum2D& f);

// ---------------------------------------------------------------------------
// Product expansion.

struct ExpansionTerm {
  std::string name;
  AxisPiece x;
  AxisPiece y;
  LinearOperator op;
};

/// The nine products of {diagonal, symbol-average, average} per axis (T1..T9),
/// plus seven mean-bookkeeping terms involving the global mean on some axis.
struct NineTermExpansion {
  std::vector<ExpansionTerm> terms;
  std::vector<ExpansionTerm> mean_terms;

  VectorSpectrum2D apply(const VectorSpectrum2D& f) const;
};

NineTermExpansion nine_term_expand(const MatrixSpectrum2D& symbol);

/// ||sum of all terms applied to f - analyze(B f)|| / ||B f||.
IdentityRecord product_identity_check(const MatrixSpectrum2D& symbol, const VectorSpectrum2D& f);

}  // namespace haarlab
