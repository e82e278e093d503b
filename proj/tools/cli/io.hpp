#pragma once

#include "foliation/flow.hpp"
#include "foliation/foliation.hpp"
#include "foliation/form.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fol::cli {

using Json = nlohmann::ordered_json;

struct RunConfig {
  double root_residual = 1e-10;
  double ratio_band = 1e-6;
  double quad_tol = 1e-9;
  double rel_tol = 1e-10;
  std::optional<double> t_min, t_max;
  std::optional<std::size_t> samples;
  std::string format = "json";
  std::uint64_t seed = 20240611;
  std::optional<unsigned> threads;
};

// Keys mirror the fields; unknown keys and non-positive tolerances throw
// InputError.
RunConfig load_config(const std::string& path);
void validate(const RunConfig& c);

// Reads a JSON file; syntax errors become ParseError with the byte offset.
Json read_json_file(const std::string& path);
Json parse_json_text(const std::string& text, const std::string& origin);

// Foliation files:
//   {"variables": [..], "P": "..", "Q": ".."}
//   {"family": "hamiltonian", "f": ".."}
//   {"family": "logarithmic", "f": [..], "lambda": [..]}
//   {"family": "A", "i": k, "p": "..", "q": ".."} and {"family": "B1", ...}
//   {"family": "pullback", "map": [..], "omega": <form>}
FoliationRecord parse_foliation(const Json& j);

// 1-form files over the plane, {"dx": "..", "dy": ".."} or {"P": .., "Q": ..}
// (omega = P dy - Q dx); or in n variables,
// {"variables": [..], "coefficients": [..]} (coefficients of dx_i).
DifferentialForm parse_form(const Json& j, std::optional<std::size_t> nvars = std::nullopt);

Rational parse_rational_value(const Json& v, const std::string& what);
LogarithmicSpec parse_log_spec(const Json& j);

// Finite double rounded to 12 significant digits; -0 becomes 0.
Json num(double v);
Json num(Complex z);
Json num_list(const std::vector<double>& v);

std::string poly_text(const Poly& p);
Json form_json(const DifferentialForm& w);

// "a" or "a,b" (real and imaginary part).
Complex parse_complex_arg(const std::string& s);
Point parse_point_arg(const std::string& s);

// Comma-separated CSV rows, 12 significant digits.
std::string csv_row(const std::vector<double>& v);

} // namespace fol::cli
