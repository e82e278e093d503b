#include "doctest.h"

#include "cli/commands.hpp"
#include "cli/io.hpp"

#include "foliation/errors.hpp"
#include "foliation/parser.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace fol;
using namespace fol::cli;

namespace {

Poly P2(const char* s) { return parse_poly(s, std::vector<std::string>{"x", "y"}); }

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("foliation_test_cli_" + name);
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

} // namespace

TEST_CASE("numbers are rounded to twelve significant digits") {
  CHECK(num(std::numbers::pi).get<double>() == 3.14159265359);
  CHECK(num(-0.0).dump() == "0.0");
  CHECK(num(1.0 / 3.0).get<double>() == 0.333333333333);
  CHECK(num(Complex(0.5, -2)).dump() == "[0.5,-2.0]");
  CHECK(csv_row({0.1, -12.566370614359172}) == "0.1,-12.5663706144");
  CHECK(num(std::nan("")).is_null());
}

TEST_CASE("config keys and tolerances are validated") {
  const auto good = write_temp("good.json", R"({"quad_tol": 1e-8, "format": "csv", "samples": 5})");
  const RunConfig c = load_config(good);
  CHECK(c.quad_tol == 1e-8);
  CHECK(c.format == "csv");
  CHECK(c.samples == std::size_t(5));
  CHECK(c.rel_tol == 1e-10);

  CHECK_THROWS_AS(load_config(write_temp("unknown.json", R"({"quad_tolerance": 1e-8})")), InputError);
  CHECK_THROWS_AS(load_config(write_temp("negative.json", R"({"rel_tol": -1})")), InputError);
  CHECK_THROWS_AS(load_config(write_temp("format.json", R"({"format": "xml"})")), InputError);
  RunConfig z;
  z.samples = 0;
  CHECK_THROWS_AS(validate(z), InputError);
}

TEST_CASE("malformed JSON reports the byte offset") {
  const std::string text = R"({"dx": "x", "dy": "y",, })";
  try {
    parse_json_text(text, "inline");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == text.find(",,") + 1);
  }
}

TEST_CASE("foliation files of every family") {
  const auto circle = parse_foliation(parse_json_text(R"({"family": "hamiltonian", "f": "1/2*x^2 + 1/2*y^2"})", "t"));
  CHECK(circle.first_integral.has_value());
  const auto direct = parse_foliation(parse_json_text(R"({"P": "-y", "Q": "x"})", "t"));
  // omega = P dy - Q dx; both describe the rotation field up to sign.
  CHECK((direct.P == circle.P || direct.P == -circle.P));

  const auto tri =
      parse_foliation(parse_json_text(R"({"family": "logarithmic", "f": ["x", "y", "1 - x - y"], "lambda": [1, "1", 1.0]})", "t"));
  CHECK(tri.log_spec.has_value());
  CHECK(tri.log_spec->lambda.size() == 3);

  const auto a1 = parse_foliation(parse_json_text(R"({"family": "A", "i": 1, "p": "x", "q": "y^2 + x"})", "t"));
  CHECK(a1.dulac_index == 1u);

  CHECK_THROWS_AS(parse_foliation(parse_json_text(R"({"family": "hamiltonian"})", "t")), InputError);
  CHECK_THROWS_AS(parse_foliation(parse_json_text(R"({"family": "nope", "f": "x"})", "t")), InputError);
  CHECK_THROWS_AS(parse_foliation(parse_json_text(R"({"P": "x +", "Q": "y"})", "t")), ParseError);
}

TEST_CASE("form files") {
  const auto w = parse_form(parse_json_text(R"({"dx": "-y", "dy": "x"})", "t"));
  CHECK(w.coefficient(0) == P2("-y"));
  CHECK(w.coefficient(1) == P2("x"));
  const auto w3 =
      parse_form(parse_json_text(R"({"variables": ["a", "b", "c"], "coefficients": ["b", "1", "0"]})", "t"), 3);
  CHECK(w3.nvars() == 3);
  CHECK(parse_form(parse_json_text(R"({"dx": "x"})", "t")).coefficient(1).is_zero());
  CHECK_THROWS_AS(parse_form(parse_json_text(R"({})", "t")), InputError);
  CHECK_THROWS_AS(parse_form(parse_json_text(R"({"dx": "x", "dz": "y"})", "t")), InputError);
  CHECK_THROWS_AS(parse_form(parse_json_text(R"({"dx": "x", "dy": "y"})", "t"), 3), InputError);
}

TEST_CASE("command line points and grids") {
  CHECK(parse_complex_arg("1.5") == Complex(1.5, 0));
  CHECK(parse_complex_arg("1,-2") == Complex(1, -2));
  CHECK_THROWS_AS(parse_complex_arg("1,,2"), InputError);
  const Point p = parse_point_arg("0.5,2");
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 2);
  const auto g = level_grid(0.1, 1.0, 9);
  REQUIRE(g.size() == 9);
  CHECK(g.front() == 0.1);
  CHECK(g.back() == 1.0);
  CHECK(level_grid(0.3, 0.3, 1) == std::vector<double>{0.3});
  CHECK_THROWS_AS(level_grid(0.1, 1.0, 0), InputError);
}

TEST_CASE("automatic sections cover the requested levels") {
  for (const char* f : {"1/2*x^2 + 1/2*y^2", "y^2 + x^3 - 3*x", "1/2*x^2 + 2*y^2 + 1/4*x^4"}) {
    CAPTURE(f);
    const auto F = hamiltonian(P2(f));
    const auto& I = *F.first_integral;
    const Point c = std::string(f).find("x^3") != std::string::npos ? Point{1, 0} : Point{0, 0};
    const double tc = I.value(c[0], c[1]);
    const double t0 = tc + 0.05, t1 = tc + 0.8;
    const auto s = auto_section(F, t0, t1);
    const auto r = s.parameter_range();
    CHECK(r[0] <= t0);
    CHECK(r[1] >= t1);
  }
  // A real Morse saddle is a complex center but carries no real cycles.
  const auto saddle = hamiltonian(P2("x*y"));
  CHECK_THROWS_AS(auto_section(saddle, 0.1, 0.2), InputError);
}

TEST_CASE("monodromy and Picard-Fuchs commands") {
  const auto m = cmd_monodromy(parse_univariate("x^3 - 3*x"), 0).json;
  CHECK(m["basis_rank"] == 2);
  CHECK(m["orbit"]["rank"] == 2);
  CHECK(m["critical_values"].size() == 2);
  CHECK(m["infinity_cycle"].is_null());

  const auto pf = cmd_picard_fuchs(parse_univariate("x^3 - 3*x")).json;
  CHECK(pf["basis"].size() == 2);
  CHECK(pf["entries"].size() == 2);
  CHECK_THROWS_AS(parse_univariate("x*y"), ParseError);
}
