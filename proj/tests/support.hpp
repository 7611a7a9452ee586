#pragma once

#include <cstdint>
#include <random>

#include "haarlab/field.hpp"

namespace support {

inline haarlab::SampledField2D random_samples(haarlab::FieldShape shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  haarlab::SampledField2D f(shape);
  for (Eigen::Index i = 0; i < f.data().size(); ++i) {
    const double re = n(rng);
    f.data()(i) = {re, n(rng)};
  }
  return f;
}

inline haarlab::SampledSymbol2D random_symbol_samples(haarlab::FieldShape shape, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  haarlab::SampledSymbol2D b(shape);
  for (Eigen::Index i = 0; i < b.data().size(); ++i) {
    const double re = n(rng);
    b.data()(i) = {re, n(rng)};
  }
  return b;
}

/// Constant symbol equal to `m` on every cell.
inline haarlab::SampledSymbol2D constant_symbol(haarlab::FieldShape shape, const haarlab::CMatrix& m) {
  haarlab::SampledSymbol2D b(shape);
  for (int x = 0; x < b.side(); ++x)
    for (int y = 0; y < b.side(); ++y) b.at(x, y) = m;
  return b;
}

/// ||a - b|| / max(1, ||b||) on the raw data.
template <class G>
double rel(const G& a, const G& b) {
  const double scale = std::max(1.0, b.data().norm());
  return (a.data() - b.data()).norm() / scale;
}

}  // namespace support
