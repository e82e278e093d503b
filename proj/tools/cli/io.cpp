#include "cli/io.hpp"

#include "foliation/errors.hpp"
#include "foliation/parser.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fol::cli {

namespace {

const std::vector<std::string> kPlane{"x", "y"};

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::string string_field(const Json& v, const std::string& what) {
  if (!v.is_string()) throw InputError(what + " must be a string");
  return v.get<std::string>();
}

Poly poly_field(const Json& v, std::span<const std::string> vars, const std::string& what) {
  const std::string text = string_field(v, what);
  try {
    return parse_poly(text, vars);
  } catch (const ParseError& e) {
    throw ParseError(what + ": " + e.what(), e.offset());
  }
}

std::vector<std::string> variables_of(const Json& j, std::size_t default_n) {
  if (!j.contains("variables")) return default_names(default_n);
  const auto& v = j.at("variables");
  if (!v.is_array() || v.empty()) throw InputError("\"variables\" must be a nonempty array");
  std::vector<std::string> out;
  for (const auto& s : v) out.push_back(string_field(s, "variable name"));
  return out;
}

std::vector<std::string> plane_variables(const Json& j) {
  auto v = variables_of(j, 2);
  if (v.size() != 2) throw InputError("plane input needs exactly two variables");
  return v;
}

void reject_unknown(const Json& j, std::initializer_list<const char*> keys) {
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (const char* a : keys) ok = ok || k == a;
    if (!ok) throw InputError("unknown key \"" + k + "\"");
  }
}

double positive(const Json& v, const std::string& key) {
  if (!v.is_number()) throw InputError(key + " must be a number");
  const double x = v.get<double>();
  if (!(x > 0) || !std::isfinite(x)) throw InputError(key + " must be positive");
  return x;
}

} // namespace

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(origin + ": malformed JSON", e.byte > 0 ? e.byte - 1 : 0);
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_json_text(s.str(), path);
}

void validate(const RunConfig& c) {
  for (double v : {c.root_residual, c.ratio_band, c.quad_tol, c.rel_tol})
    if (!(v > 0) || !std::isfinite(v)) throw InputError("tolerances must be positive");
  if (c.samples && *c.samples == 0) throw InputError("samples must be positive");
  if (c.t_min && c.t_max && !(*c.t_min < *c.t_max)) throw InputError("t_min must be below t_max");
  if (c.format != "json" && c.format != "csv") throw InputError("format must be json or csv");
  if (c.threads && *c.threads == 0) throw InputError("threads must be positive");
}

RunConfig load_config(const std::string& path) {
  const Json j = read_json_file(path);
  if (!j.is_object()) throw InputError("config must be a JSON object");
  reject_unknown(j, {"root_residual", "ratio_band", "quad_tol", "rel_tol", "t_min", "t_max", "samples", "format",
                     "seed", "threads"});
  RunConfig c;
  if (j.contains("root_residual")) c.root_residual = positive(j["root_residual"], "root_residual");
  if (j.contains("ratio_band")) c.ratio_band = positive(j["ratio_band"], "ratio_band");
  if (j.contains("quad_tol")) c.quad_tol = positive(j["quad_tol"], "quad_tol");
  if (j.contains("rel_tol")) c.rel_tol = positive(j["rel_tol"], "rel_tol");
  auto real = [&](const char* k) {
    if (!j[k].is_number()) throw InputError(std::string(k) + " must be a number");
    return j[k].get<double>();
  };
  auto count = [&](const char* k) {
    if (!j[k].is_number_unsigned()) throw InputError(std::string(k) + " must be a nonnegative integer");
    return j[k].get<std::uint64_t>();
  };
  if (j.contains("t_min")) c.t_min = real("t_min");
  if (j.contains("t_max")) c.t_max = real("t_max");
  if (j.contains("samples")) c.samples = count("samples");
  if (j.contains("format")) c.format = string_field(j["format"], "format");
  if (j.contains("seed")) c.seed = count("seed");
  if (j.contains("threads")) c.threads = static_cast<unsigned>(count("threads"));
  validate(c);
  return c;
}

Rational parse_rational_value(const Json& v, const std::string& what) {
  if (v.is_number_integer()) return Rational(v.get<long>());
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_float()) return rationalize(v.get<double>());
  if (v.is_array() && v.size() == 2 && v[1].is_number()) {
    if (v[1].get<double>() != 0) throw InputError(what + ": complex values are not supported");
    return parse_rational_value(v[0], what);
  }
  throw InputError(what + " must be a number, a rational string or [re, 0]");
}

LogarithmicSpec parse_log_spec(const Json& j) {
  const auto vars = plane_variables(j);
  const auto& fs = field(j, "f");
  const auto& ls = field(j, "lambda");
  if (!fs.is_array() || !ls.is_array() || fs.size() != ls.size() || fs.empty())
    throw InputError("\"f\" and \"lambda\" must be arrays of equal nonzero length");
  LogarithmicSpec s;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    s.f.push_back(poly_field(fs[i], vars, "f[" + std::to_string(i) + "]"));
    s.lambda.push_back(parse_rational_value(ls[i], "lambda[" + std::to_string(i) + "]"));
  }
  return s;
}

DifferentialForm parse_form(const Json& j, std::optional<std::size_t> nvars) {
  if (!j.is_object()) throw InputError("form must be a JSON object");
  if (j.contains("coefficients")) {
    reject_unknown(j, {"variables", "coefficients"});
    const auto& c = j.at("coefficients");
    if (!c.is_array() || c.empty()) throw InputError("\"coefficients\" must be a nonempty array");
    const auto vars = variables_of(j, c.size());
    if (vars.size() != c.size()) throw InputError("one coefficient per variable is required");
    if (nvars && vars.size() != *nvars) throw InputError("form has the wrong number of variables");
    std::vector<Poly> coeffs;
    for (std::size_t i = 0; i < c.size(); ++i) coeffs.push_back(poly_field(c[i], vars, "coefficients[" + std::to_string(i) + "]"));
    return DifferentialForm(vars.size(), 1, std::move(coeffs));
  }
  if (nvars && *nvars != 2) throw InputError("a plane form was given where " + std::to_string(*nvars) + " variables are needed");
  const auto vars = plane_variables(j);
  if (j.contains("P") || j.contains("Q")) {
    reject_unknown(j, {"variables", "P", "Q"});
    return DifferentialForm::plane(poly_field(field(j, "P"), vars, "P"), poly_field(field(j, "Q"), vars, "Q"));
  }
  reject_unknown(j, {"variables", "dx", "dy"});
  const Poly a = j.contains("dx") ? poly_field(j["dx"], vars, "dx") : Poly(2);
  const Poly b = j.contains("dy") ? poly_field(j["dy"], vars, "dy") : Poly(2);
  if (!j.contains("dx") && !j.contains("dy")) throw InputError("form needs \"dx\"/\"dy\", \"P\"/\"Q\" or \"coefficients\"");
  return DifferentialForm::from_dx_dy(a, b);
}

FoliationRecord parse_foliation(const Json& j) {
  if (!j.is_object()) throw InputError("foliation must be a JSON object");
  if (!j.contains("family")) {
    reject_unknown(j, {"variables", "P", "Q"});
    const auto vars = plane_variables(j);
    return from_vector_field(poly_field(field(j, "P"), vars, "P"), poly_field(field(j, "Q"), vars, "Q"));
  }
  const std::string fam = string_field(j["family"], "family");
  if (fam == "hamiltonian") {
    reject_unknown(j, {"family", "variables", "f"});
    return hamiltonian(poly_field(field(j, "f"), plane_variables(j), "f"));
  }
  if (fam == "logarithmic") {
    reject_unknown(j, {"family", "variables", "f", "lambda"});
    return logarithmic(parse_log_spec(j));
  }
  if (fam == "A" || fam == "B1") {
    reject_unknown(j, {"family", "variables", "p", "q", "i"});
    const auto vars = plane_variables(j);
    unsigned i = 0;
    if (j.contains("i")) {
      if (!j["i"].is_number_unsigned()) throw InputError("\"i\" must be a nonnegative integer");
      i = j["i"].get<unsigned>();
    }
    return dulac_family(fam == "A" ? DulacKind::A : DulacKind::B1, poly_field(field(j, "p"), vars, "p"),
                        poly_field(field(j, "q"), vars, "q"), i);
  }
  if (fam == "pullback") {
    reject_unknown(j, {"family", "variables", "map", "omega"});
    const auto vars = plane_variables(j);
    const auto& m = field(j, "map");
    if (!m.is_array() || m.size() < 2) throw InputError("\"map\" needs at least two components");
    PolyMap F;
    for (std::size_t i = 0; i < m.size(); ++i) F.components.push_back(poly_field(m[i], vars, "map[" + std::to_string(i) + "]"));
    return pullback(F, parse_form(field(j, "omega"), m.size()));
  }
  throw InputError("unknown family \"" + fam + "\"");
}

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0 ? 0.0 : r;
}

Json num(Complex z) { return Json::array({num(z.real()), num(z.imag())}); }

Json num_list(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string poly_text(const Poly& p) {
  const auto names = p.nvars() == 2 ? kPlane : default_names(p.nvars());
  return print_poly(p, names);
}

Json form_json(const DifferentialForm& w) {
  if (w.nvars() == 2 && w.degree() == 1)
    return Json{{"dx", poly_text(w.coefficient(0))}, {"dy", poly_text(w.coefficient(1))}};
  Json c = Json::array();
  for (const auto& p : w.coefficients()) c.push_back(poly_text(p));
  return Json{{"variables", default_names(w.nvars())}, {"coefficients", c}};
}

Complex parse_complex_arg(const std::string& s) {
  const auto comma = s.find(',');
  auto one = [&](const std::string& t) {
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v)) throw InputError("not a number: \"" + t + "\"");
    return v;
  };
  if (comma == std::string::npos) return {one(s), 0.0};
  return {one(s.substr(0, comma)), one(s.substr(comma + 1))};
}

Point parse_point_arg(const std::string& s) {
  if (s.find(',') == std::string::npos) throw InputError("point must be \"x,y\"");
  const Complex z = parse_complex_arg(s);
  return {z.real(), z.imag()};
}

std::string csv_row(const std::vector<double>& v) {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12g", v[i] == 0 ? 0.0 : v[i]);
    if (i) out += ',';
    out += buf;
  }
  return out;
}

} // namespace fol::cli
