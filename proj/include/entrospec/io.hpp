#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "entrospec/entropy.hpp"
#include "entrospec/types.hpp"

namespace entrospec::io {

// Matrix files are JSON objects {"n": N, "re": [[...]], "im": [[...]]} with
// row-major N x N arrays. "im" may be omitted for real matrices.

ComplexMatrix<double> matrix_from_json(const nlohmann::json& doc);
nlohmann::json matrix_to_json(const ComplexMatrix<double>& m);

/// Parses a matrix document; `source` prefixes error messages.
ComplexMatrix<double> parse_matrix(const std::string& text, const std::string& source = "<input>");

ComplexMatrix<double> read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const ComplexMatrix<double>& m);

/// Writes `lambda,entropy_bits,f_prime,log2_p` rows for `points` equispaced
/// nodes on [0, a]. Cells where a quantity is undefined are left empty.
void write_curve_csv(std::ostream& out, const EntropyCurve<double>& curve, double a, int points);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

}  // namespace entrospec::io
