#include "haarlab/grid.hpp"

#include <bit>
#include <cmath>

#include "haarlab/errors.hpp"

namespace haarlab {

void GridConfig::validate() const {
  if (depth < 1 || depth > kMaxDepth) {
    throw InvalidConfig("depth must lie in [1, " + std::to_string(kMaxDepth) + "], got " +
                        std::to_string(depth));
  }
  if (dim < 1 || dim > kMaxDim) {
    throw InvalidConfig("dim must lie in [1, " + std::to_string(kMaxDim) + "], got " +
                        std::to_string(dim));
  }
}

void require_same_shape(const FieldShape& a, const FieldShape& b, const char* what) {
  if (!(a == b)) {
    throw DimensionMismatch(std::string(what) + ": shape (depth " + std::to_string(a.depth) +
                            ", dim " + std::to_string(a.dim) + ") vs (depth " +
                            std::to_string(b.depth) + ", dim " + std::to_string(b.dim) + ")");
  }
}

double DyadicInterval::measure() const { return std::ldexp(1.0, -level); }

bool DyadicInterval::contains(const DyadicInterval& other) const {
  if (other.level < level) return false;
  return (other.index >> (other.level - level)) == index;
}

bool DyadicInterval::disjoint(const DyadicInterval& other) const {
  return !contains(other) && !other.contains(*this);
}

std::pair<int, int> DyadicInterval::cells(int depth) const {
  const int width = 1 << (depth - level);
  return {index * width, (index + 1) * width};
}

DyadicInterval DyadicInterval::from_heap(int heap) {
  const int level = std::bit_width(static_cast<unsigned>(heap)) - 1;
  return {level, heap - (1 << level)};
}

std::pair<DyadicInterval, DyadicInterval> children(const DyadicInterval& interval, int depth) {
  if (interval.level >= depth) {
    throw LevelOverflow("interval " + to_string(interval) + " is a finest cell at depth " +
                        std::to_string(depth));
  }
  return {{interval.level + 1, 2 * interval.index}, {interval.level + 1, 2 * interval.index + 1}};
}

DyadicInterval parent(const DyadicInterval& interval) {
  if (interval.level == 0) throw RootHasNoParent("the unit interval has no parent");
  return {interval.level - 1, interval.index / 2};
}

DyadicInterval ancestor(const DyadicInterval& interval, int generations) {
  if (generations > interval.level) {
    throw RootHasNoParent("interval " + to_string(interval) + " has no ancestor " +
                          std::to_string(generations) + " generations up");
  }
  return {interval.level - generations, interval.index >> generations};
}

double haar_sign(const DyadicInterval& interval) {
  if (interval.level == 0) throw RootHasNoParent("haar_sign is undefined at level 0");
  return interval.is_left_child() ? M_SQRT1_2 : -M_SQRT1_2;
}

double haar_value_on(const DyadicInterval& haar_support, const DyadicInterval& inner) {
  const DyadicInterval half = ancestor(inner, inner.level - haar_support.level - 1);
  const double amplitude = std::sqrt(1.0 / haar_support.measure());
  return half.is_left_child() ? amplitude : -amplitude;
}

int basis_slot(HaarKind kind, const DyadicInterval& interval, int depth) {
  if (kind == HaarKind::kAverage) {
    if (interval.level != 0) {
      throw NotRepresentable("average basis elements exist only at level 0");
    }
    return 0;
  }
  if (interval.level >= depth) {
    throw NotRepresentable("cancellative Haar function at level " +
                           std::to_string(interval.level) + " needs children below depth " +
                           std::to_string(depth));
  }
  return interval.heap();
}

std::pair<HaarKind, DyadicInterval> basis_element(int slot) {
  if (slot == 0) return {HaarKind::kAverage, {0, 0}};
  return {HaarKind::kCancellative, DyadicInterval::from_heap(slot)};
}

bool is_representable(const HaarIndex2D& index, int depth) {
  auto axis_ok = [depth](HaarKind kind, const DyadicInterval& iv) {
    if (iv.level < 0 || iv.index < 0 || iv.index >= (1 << iv.level)) return false;
    return kind == HaarKind::kAverage ? iv.level == 0 : iv.level < depth;
  };
  return axis_ok(index.kind_x, index.rect.ix) && axis_ok(index.kind_y, index.rect.iy);
}

std::pair<int, int> basis_slots(const HaarIndex2D& index, int depth) {
  if (!is_representable(index, depth)) {
    throw NotRepresentable("basis index is not representable at depth " + std::to_string(depth));
  }
  return {basis_slot(index.kind_x, index.rect.ix, depth),
          basis_slot(index.kind_y, index.rect.iy, depth)};
}

HaarIndex2D basis_index(int slot_x, int slot_y) {
  const auto [kx, ix] = basis_element(slot_x);
  const auto [ky, iy] = basis_element(slot_y);
  return {{ix, iy}, kx, ky};
}

std::string to_string(const DyadicInterval& interval) {
  return "(j=" + std::to_string(interval.level) + ",k=" + std::to_string(interval.index) + ")";
}

}  // namespace haarlab
