#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "haarlab/field.hpp"

namespace haarlab {

/// Real n x n array over cells, indexed (x, y).
using ScalarField = Eigen::MatrixXd;

/// A nonempty union of finest cells; mask(x, y) != 0 marks membership.
struct TestSet {
  Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> mask;
  int cell_count = 0;

  static TestSet from_rectangle(const DyadicRectangle& r, int depth);
  double measure() const;
  std::vector<std::pair<int, int>> cells() const;
};

enum class FamilyKind { kRectangles, kFullSquare, kRandomUnions, kExhaustiveCells, kMixed };

/// A finite collection of test sets standing in for open sets.
class TestSetFamily {
 public:
  TestSetFamily(int depth, FamilyKind kind) : depth_(depth), kind_(kind) {}

  /// Every dyadic rectangle, finest cells included.
  static TestSetFamily rectangles(int depth);
  static TestSetFamily full_square(int depth);
  /// Unions of 1..m rectangles drawn from the cancellative rectangles (both
  /// levels < N). When the number of such unions is at most `trials`, every
  /// one of them is enumerated instead of sampled.
  static TestSetFamily random_unions(int depth, int m, int trials, std::uint64_t seed);
  /// Every nonempty union of finest cells; only for depth <= 2.
  static TestSetFamily exhaustive_cells(int depth);
  /// rectangles + full square + random_unions(8, 512).
  static TestSetFamily standard(int depth, std::uint64_t seed);

  TestSetFamily& append(const TestSetFamily& other);
  void add(TestSet set);

  int depth() const { return depth_; }
  FamilyKind kind() const { return kind_; }
  const std::vector<TestSet>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }

 private:
  int depth_;
  FamilyKind kind_;
  std::vector<TestSet> members_;
};

std::string to_string(FamilyKind kind);

struct BmoReport {
  /// Max over single dyadic rectangles.
  double rect_norm = 0.0;
  /// Max over the family and both orders.
  double openset_norm = 0.0;
  /// "left" for sum B B*, "right" for sum B* B.
  std::string order = "left";
  /// Max over the family of (|U|^{-1} sum ||B(R)||_F^2)^{1/2}.
  double trace_quantity = 0.0;
  std::vector<std::pair<int, int>> witness_cells;
  /// Norm of the coefficients that are not fully cancellative (ignored).
  double ignored_norm = 0.0;
};

nlohmann::ordered_json to_json(const BmoReport& r);

/// Both orders' values on a single test set: {left, right}.
std::pair<double, double> bmo_on_set(const MatrixSpectrum2D& b, const TestSet& u);

/// Throws EmptyFamily when the family has no members.
BmoReport bmo_norm(const MatrixSpectrum2D& b, const TestSetFamily& family);

struct TraceBound {
  double lhs = 0.0;
  double bound = 0.0;  // d * openset norm
  bool holds = false;
};

TraceBound trace_bound_check(const MatrixSpectrum2D& b, const TestSetFamily& family);

enum class CarlesonWeight { kFrobenius, kOperator };

/// a_R = ||B(R)||^2 on cancellative slots (slot 0 rows and columns are zero).
ScalarField carleson_weights(const MatrixSpectrum2D& b, CarlesonWeight kind = CarlesonWeight::kFrobenius);

struct CarlesonReport {
  /// Best value of sum a_R <f>_R^2 / ||f||^2 found over nonnegative f.
  double c1_empirical = 0.0;
  /// max over the family of |U|^{-1} sum_{R in U} a_R.
  double c2 = 0.0;
  /// Top eigenvalue of the embedding form, an upper bound for c1_empirical.
  /// Left at 0 above depth 5.
  double c1_exact = 0.0;
  double ratio = 0.0;  // c1_empirical / c2, 0 when c2 = 0
};

nlohmann::ordered_json to_json(const CarlesonReport& r);

/// `weights` is indexed by cancellative slots (sx, sy), as from carleson_weights.
/// C1 is maximized by `trials` random restarts of a multiplicative hill climb,
/// plus one start at the indicator of the C2 witness.
CarlesonReport carleson_check(const ScalarField& weights, const TestSetFamily& family, int trials,
                              std::uint64_t seed);

/// S(f)^2 = sum over fully cancellative R of ||f(R)||^2 1_R / |R|.
ScalarField square_function(const VectorSpectrum2D& f);
/// Same with Frobenius norms of matrix coefficients.
ScalarField square_function(const MatrixSpectrum2D& f);

/// Max over dyadic rectangles containing the cell of the average of |g|.
ScalarField strong_maximal(const ScalarField& g);
/// Dyadic maximal function in x (resp. y) with the other variable fixed.
ScalarField maximal_x(const ScalarField& g);
ScalarField maximal_y(const ScalarField& g);

/// Pointwise Euclidean norm of a sampled field.
ScalarField pointwise_norm(const SampledField2D& f);

/// Pi1(f,g)(R) = <g, h_I h_J> <f, h^1_I h^1_J>^* |I|^{-1/2} |J|^{-1/2}.
MatrixSpectrum2D pi1(const VectorSpectrum2D& f, const VectorSpectrum2D& g);
/// Pi2(f,g)(R) = <g, h^1_I h_J> <f, h_I h^1_J>^* |I|^{-1/2} |J|^{-1/2}.
MatrixSpectrum2D pi2(const VectorSpectrum2D& f, const VectorSpectrum2D& g);

/// S~f(x,y) = (sum_I (M_y ||<f, h_I>||)(y)^2 1_I(x) / |I|)^{1/2}.
ScalarField s_tilde(const VectorSpectrum2D& f);

/// L2 norm of a cell field (cell area weighting).
double l2_norm(const ScalarField& s);

}  // namespace haarlab
