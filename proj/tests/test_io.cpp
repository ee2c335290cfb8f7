#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "entrospec/io.hpp"
#include "entrospec/random.hpp"

using namespace entrospec;
using CMat = ComplexMatrix<double>;

namespace {

ErrorCode parse_code(const std::string& text) {
  try {
    (void)io::parse_matrix(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse failure");
  return ErrorCode::IoError;
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("parse a hand-written real matrix") {
  const CMat m = io::parse_matrix(R"({"n": 2, "re": [[0.5, 0.25], [0.25, 0.5]]})");
  CHECK(m(0, 1) == Complex<double>(0.25, 0.0));
  CHECK(m(1, 1) == Complex<double>(0.5, 0.0));
}

TEST_CASE("parse errors carry field context") {
  CHECK(parse_code("{") == ErrorCode::ParseError);
  CHECK(parse_code(R"({"re": [[1]]})") == ErrorCode::ParseError);
  CHECK(parse_code(R"({"n": 2, "re": [[1, 0]]})") == ErrorCode::ParseError);
  CHECK(parse_code(R"({"n": 2, "re": [[1, 0], [0]]})") == ErrorCode::ParseError);
  CHECK(parse_code(R"({"n": 1, "re": [[1]], "im": [["x"]]})") == ErrorCode::ParseError);
  try {
    (void)io::parse_matrix(R"({"n": 2, "re": [[1, 0], [0, "bad"]]})", "state.json");
  } catch (const Error& e) {
    const std::string what = e.what();
    CHECK(what.find("state.json") != std::string::npos);
    CHECK(what.find("re[1][1]") != std::string::npos);
  }
}

TEST_CASE("write then read is exact") {
  Rng rng(1);
  const auto path = (std::filesystem::temp_directory_path() / "entrospec_io_roundtrip.json").string();
  for (Index n = 1; n <= 8; ++n) {
    const CMat m = ginibre<double>(n, n, rng) * 1e-3;
    io::write_matrix_file(path, m);
    CHECK(io::read_matrix_file(path) == m);
  }
  // awkward doubles survive as well
  CMat m(1, 1);
  m(0, 0) = {0.1 + 0.2, 5e-324};
  io::write_matrix_file(path, m);
  CHECK(io::read_matrix_file(path) == m);
  std::remove(path.c_str());
  CHECK_THROWS_AS(io::read_matrix_file(path), Error);
}

TEST_CASE("curve csv") {
  std::ostringstream out;
  const EntropyCurve<double> pure(validate_state(CMat(RealVector<double>::Unit(2, 0).cast<Complex<double>>().asDiagonal())));
  io::write_curve_csv(out, pure, 1.0, 5);
  const auto rows = read_csv(out.str());
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == std::vector<std::string>{"lambda", "entropy_bits", "f_prime", "log2_p"});
  CHECK(rows[1][0] == "0");
  CHECK(rows[1][1] == "1");
  CHECK(rows[1][3].empty());  // log2_p undefined at 0
  CHECK(rows[5][0] == "1");
  CHECK(rows[5][2].empty());  // f' diverges at 1 for a pure state
  CHECK(rows[5][3].empty());
  CHECK(rows[3][0] == "0.5");
  CHECK(std::stod(rows[3][1]) == doctest::Approx(0.8112781244591328).epsilon(1e-15));
  CHECK(out.str().find('\r') == std::string::npos);

  std::ostringstream bad;
  CHECK_THROWS_AS(io::write_curve_csv(bad, pure, 0.0, 5), Error);
  CHECK_THROWS_AS(io::write_curve_csv(bad, pure, 0.5, 1), Error);
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.0, 1.0, 0.1, 1.0 / 3, 1e-300, -2.5e17}) CHECK(std::stod(io::format_double(x)) == x);
}
