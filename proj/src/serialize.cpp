#include "haarlab/serialize.hpp"

#include <iomanip>
#include <ostream>

namespace haarlab {
namespace {

Json entries_to_json(const Complex* values, int count) {
  Json arr = Json::array();
  for (int i = 0; i < count; ++i) arr.push_back(Json::array({values[i].real(), values[i].imag()}));
  return arr;
}

template <class Spectrum>
Json spectrum_to_json(const Spectrum& s, int block, bool include_zeros) {
  Json doc;
  doc["depth"] = s.depth();
  doc["dim"] = s.dim();
  Json coefficients = Json::array();
  for (int x = 0; x < s.side(); ++x) {
    for (int y = 0; y < s.side(); ++y) {
      const Complex* values = s.data().data() + s.offset(x, y);
      bool nonzero = include_zeros;
      for (int i = 0; i < block && !nonzero; ++i) nonzero = values[i] != Complex(0.0, 0.0);
      if (!nonzero) continue;
      const HaarIndex2D idx = basis_index(x, y);
      Json entry;
      entry["kind"] = Json::array({static_cast<int>(idx.kind_x), static_cast<int>(idx.kind_y)});
      entry["jx"] = idx.rect.ix.level;
      entry["kx"] = idx.rect.ix.index;
      entry["jy"] = idx.rect.iy.level;
      entry["ky"] = idx.rect.iy.index;
      entry["matrix"] = entries_to_json(values, block);
      coefficients.push_back(std::move(entry));
    }
  }
  doc["coefficients"] = std::move(coefficients);
  return doc;
}

template <class Spectrum>
Spectrum spectrum_from_json(const Json& doc, bool matrix) {
  const FieldShape shape{doc.at("depth").get<int>(), doc.at("dim").get<int>()};
  GridConfig{shape.depth, shape.dim}.validate();
  const int block = matrix ? shape.dim * shape.dim : shape.dim;
  Spectrum s(shape);
  for (const auto& entry : doc.at("coefficients")) {
    const auto& kind = entry.at("kind");
    HaarIndex2D idx{{{entry.at("jx").get<int>(), entry.at("kx").get<int>()},
                     {entry.at("jy").get<int>(), entry.at("ky").get<int>()}},
                    static_cast<HaarKind>(kind.at(0).get<int>()),
                    static_cast<HaarKind>(kind.at(1).get<int>())};
    const auto [x, y] = basis_slots(idx, shape.depth);
    const auto& values = entry.at("matrix");
    if (static_cast<int>(values.size()) != block) {
      throw DimensionMismatch("coefficient entry has " + std::to_string(values.size()) +
                              " values, expected " + std::to_string(block));
    }
    Complex* out = s.data().data() + s.offset(x, y);
    for (int i = 0; i < block; ++i) {
      out[i] = Complex(values[i].at(0).get<double>(), values[i].at(1).get<double>());
    }
  }
  return s;
}

}  // namespace

Json to_json(const VectorSpectrum2D& s, bool include_zeros) {
  return spectrum_to_json(s, s.dim(), include_zeros);
}

Json to_json(const MatrixSpectrum2D& s, bool include_zeros) {
  return spectrum_to_json(s, s.dim() * s.dim(), include_zeros);
}

VectorSpectrum2D vector_spectrum_from_json(const Json& doc) {
  return spectrum_from_json<VectorSpectrum2D>(doc, false);
}

MatrixSpectrum2D matrix_spectrum_from_json(const Json& doc) {
  return spectrum_from_json<MatrixSpectrum2D>(doc, true);
}

void write_complex_csv(std::ostream& os, const CMatrix& m) {
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << m(r, c).real() << ',' << m(r, c).imag();
    }
    os << '\n';
  }
}

void write_real_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) os << ',';
      os << m(r, c);
    }
    os << '\n';
  }
}

}  // namespace haarlab
