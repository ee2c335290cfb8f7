#include "entrospec/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "entrospec/error.hpp"

namespace entrospec::io {

namespace {

using nlohmann::json;

double field_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorCode::ParseError, where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw Error(ErrorCode::NonFinite, where + ": value is not finite");
  return x;
}

void read_plane(const json& doc, const char* key, Index n, ComplexMatrix<double>& m, bool imaginary) {
  const json& rows = doc.at(key);
  if (!rows.is_array() || static_cast<Index>(rows.size()) != n) {
    std::ostringstream msg;
    msg << key << ": expected " << n << " rows";
    throw Error(ErrorCode::ParseError, msg.str());
  }
  for (Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n) {
      std::ostringstream msg;
      msg << key << "[" << i << "]: expected " << n << " columns";
      throw Error(ErrorCode::ParseError, msg.str());
    }
    for (Index j = 0; j < n; ++j) {
      std::ostringstream where;
      where << key << "[" << i << "][" << j << "]";
      const double x = field_number(row[static_cast<std::size_t>(j)], where.str());
      if (imaginary)
        m(i, j).imag(x);
      else
        m(i, j).real(x);
    }
  }
}

}  // namespace

ComplexMatrix<double> matrix_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");
  if (!doc.contains("n") || !doc["n"].is_number_integer())
    throw Error(ErrorCode::ParseError, "n: missing or not an integer");
  const auto n = doc["n"].get<long long>();
  if (n < 1) throw Error(ErrorCode::ParseError, "n: must be positive");
  if (!doc.contains("re")) throw Error(ErrorCode::ParseError, "re: missing");

  ComplexMatrix<double> m = ComplexMatrix<double>::Zero(n, n);
  read_plane(doc, "re", n, m, false);
  if (doc.contains("im")) read_plane(doc, "im", n, m, true);
  return m;
}

json matrix_to_json(const ComplexMatrix<double>& m) {
  json re = json::array(), im = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ir = json::array();
    for (Index j = 0; j < m.cols(); ++j) {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  return json{{"n", m.rows()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix<double> parse_matrix(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, source + ": " + e.what());
  }
  try {
    return matrix_from_json(doc);
  } catch (const Error& e) {
    throw Error(e.code(), source + ": " + e.detail());
  }
}

ComplexMatrix<double> read_matrix_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_matrix(buf.str(), path);
}

void write_matrix_file(const std::string& path, const ComplexMatrix<double>& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << matrix_to_json(m).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_curve_csv(std::ostream& out, const EntropyCurve<double>& curve, double a, int points) {
  if (!(a > 0.0 && a <= 1.0) || points < 2)
    throw Error(ErrorCode::BadConfig, "curve needs 0 < a <= 1 and at least 2 points");
  out << "lambda,entropy_bits,f_prime,log2_p\n";
  for (int k = 0; k < points; ++k) {
    const double lambda = k == points - 1 ? a : a * k / (points - 1);
    out << format_double(lambda) << ',' << format_double(curve.value(lambda)) << ',';
    try {
      out << format_double(curve.derivative(lambda));
    } catch (const Error&) {
      // f' diverges at lambda = 1 for singular states
    }
    out << ',';
    if (lambda > 0.0 && lambda < 1.0) out << format_double(curve.log2_p(lambda));
    out << '\n';
  }
}

}  // namespace entrospec::io
