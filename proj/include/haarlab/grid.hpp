#pragma once

#include <cstdint>
#include <string>
#include <utility>

namespace haarlab {

inline constexpr int kMaxDepth = 10;
inline constexpr int kMaxDim = 8;

/// Finite dyadic model of [0,1)^2: 2^depth cells per side, values in C^dim.
struct GridConfig {
  int depth = 3;
  int dim = 1;
  std::uint64_t seed = 0;

  /// Throws InvalidConfig unless 1 <= depth <= 10 and 1 <= dim <= 8.
  void validate() const;
  int side() const { return 1 << depth; }
};

/// (depth, dim) pair that every field and spectrum carries.
struct FieldShape {
  int depth = 0;
  int dim = 0;

  int side() const { return 1 << depth; }
  int cells() const { return side() * side(); }
  bool operator==(const FieldShape&) const = default;
};

/// Throws DimensionMismatch with a descriptive message when shapes differ.
void require_same_shape(const FieldShape& a, const FieldShape& b, const char* what);

/// 0 = cancellative Haar function h_I, 1 = normalized indicator h^1_I.
enum class HaarKind : int { kCancellative = 0, kAverage = 1 };

/// [k 2^-j, (k+1) 2^-j) inside [0,1).
struct DyadicInterval {
  int level = 0;
  int index = 0;

  double measure() const;
  bool is_left_child() const { return (index & 1) == 0; }
  bool contains(const DyadicInterval& other) const;
  bool disjoint(const DyadicInterval& other) const;
  /// Cell range [first, last) covered at the given depth.
  std::pair<int, int> cells(int depth) const;
  /// Heap number 2^level + index, unique over all levels.
  int heap() const { return (1 << level) + index; }
  static DyadicInterval from_heap(int heap);

  bool operator==(const DyadicInterval&) const = default;
  auto operator<=>(const DyadicInterval&) const = default;
};

/// Left and right halves. Throws LevelOverflow when level == depth.
std::pair<DyadicInterval, DyadicInterval> children(const DyadicInterval& interval, int depth);

/// Throws RootHasNoParent at level 0.
DyadicInterval parent(const DyadicInterval& interval);

/// g-th ancestor; ancestor(i, 0) == i.
DyadicInterval ancestor(const DyadicInterval& interval, int generations);

/// The shift weight a_I: +1/sqrt(2) for a left child, -1/sqrt(2) for a right child.
double haar_sign(const DyadicInterval& interval);

/// Value of h_I on the dyadic sub-interval `inner` (inner strictly inside I).
double haar_value_on(const DyadicInterval& haar_support, const DyadicInterval& inner);

struct DyadicRectangle {
  DyadicInterval ix;
  DyadicInterval iy;

  double measure() const { return ix.measure() * iy.measure(); }
  bool contains(const DyadicRectangle& other) const {
    return ix.contains(other.ix) && iy.contains(other.iy);
  }
  bool operator==(const DyadicRectangle&) const = default;
  auto operator<=>(const DyadicRectangle&) const = default;
};

/// One element h_I^eps (x) h_J^delta of the orthonormal basis at a given depth.
/// Average kinds are only basis elements at level 0 (the global mean factor).
struct HaarIndex2D {
  DyadicRectangle rect;
  HaarKind kind_x = HaarKind::kCancellative;
  HaarKind kind_y = HaarKind::kCancellative;

  bool operator==(const HaarIndex2D&) const = default;
};

/// Position of a 1D basis element in a coefficient line: 0 is the mean,
/// s >= 1 is the cancellative interval with heap number s.
int basis_slot(HaarKind kind, const DyadicInterval& interval, int depth);
std::pair<HaarKind, DyadicInterval> basis_element(int slot);

bool is_representable(const HaarIndex2D& index, int depth);
/// Position in a VectorSpectrum2D; throws NotRepresentable.
std::pair<int, int> basis_slots(const HaarIndex2D& index, int depth);
HaarIndex2D basis_index(int slot_x, int slot_y);

std::string to_string(const DyadicInterval& interval);

}  // namespace haarlab
