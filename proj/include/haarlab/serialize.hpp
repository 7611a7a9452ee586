#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "haarlab/field.hpp"

namespace haarlab {

using Json = nlohmann::ordered_json;

// Spectrum documents:
//   {"depth":N,"dim":d,"coefficients":[{"kind":[e,d],"jx":..,"kx":..,"jy":..,
//    "ky":..,"matrix":[[re,im],...]}]}
// Entries appear in basis-slot order (x slot major). "matrix" lists the d*d
// entries row-major; vector spectra list their d components. Coefficients
// whose entries are all exactly zero are omitted unless include_zeros is set.

Json to_json(const VectorSpectrum2D& s, bool include_zeros = false);
Json to_json(const MatrixSpectrum2D& s, bool include_zeros = false);

VectorSpectrum2D vector_spectrum_from_json(const Json& doc);
MatrixSpectrum2D matrix_spectrum_from_json(const Json& doc);

/// Row-major CSV, each complex entry written as "re,im".
void write_complex_csv(std::ostream& os, const CMatrix& m);
void write_real_csv(std::ostream& os, const Eigen::MatrixXd& m);

}  // namespace haarlab
