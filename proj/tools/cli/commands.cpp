#include "cli/commands.hpp"

#include "foliation/errors.hpp"
#include "foliation/flow.hpp"
#include "foliation/gaussmanin.hpp"
#include "foliation/monodromy.hpp"
#include "foliation/parallel.hpp"
#include "foliation/parser.hpp"

#include <cmath>
#include <numbers>

namespace fol::cli {

SingularityOptions singularity_options(const RunConfig& c) {
  SingularityOptions o;
  o.root_residual = c.root_residual;
  o.ratio_band = c.ratio_band;
  return o;
}

MelnikovOptions melnikov_options(const RunConfig& c) {
  MelnikovOptions o;
  o.quad_tol = c.quad_tol;
  o.flow.rel_tol = c.rel_tol;
  return o;
}

Json integer_json(const Integer& z) {
  if (z.fits_slong_p()) return z.get_si();
  return z.get_str();
}

namespace {

Json int_vector(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(integer_json(x));
  return a;
}

Json int_matrix(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(integer_json(m(i, j)));
    a.push_back(row);
  }
  return a;
}

Json record_json(const FoliationRecord& F) {
  Json j{{"family", family_name(F.family)},
         {"omega", form_json(F.omega)},
         {"P", poly_text(F.P)},
         {"Q", poly_text(F.Q)},
         {"degree", F.degree},
         {"reduced_pair", F.reduced_pair}};
  if (F.clearing_factor) j["clearing_factor"] = poly_text(*F.clearing_factor);
  if (F.first_integral) j["first_integral"] = F.first_integral->to_string(default_names(2));
  return j;
}

double level_of(const PowerProduct& f, const Point& z) { return f.value(z[0], z[1]); }

// Eigenvectors of the (numeric) Hessian of f at c, then eight fixed rays.
std::vector<Point> ray_directions(const PowerProduct& f, const Point& c) {
  std::vector<Point> dirs;
  const double h = 1e-5 * (1 + std::hypot(c[0], c[1]));
  const auto gxp = f.gradient(c[0] + h, c[1]), gxm = f.gradient(c[0] - h, c[1]);
  const auto gyp = f.gradient(c[0], c[1] + h), gym = f.gradient(c[0], c[1] - h);
  const double a = (gxp[0] - gxm[0]) / (2 * h), d = (gyp[1] - gym[1]) / (2 * h);
  const double b = 0.5 * ((gxp[1] - gxm[1]) + (gyp[0] - gym[0])) / (2 * h);
  if (std::isfinite(a) && std::isfinite(b) && std::isfinite(d)) {
    const double th = 0.5 * std::atan2(2 * b, a - d);
    for (double phi : {th, th + std::numbers::pi / 2, th + std::numbers::pi, th + 1.5 * std::numbers::pi})
      dirs.push_back({std::cos(phi), std::sin(phi)});
  }
  for (int k = 0; k < 8; ++k) {
    const double phi = k * std::numbers::pi / 4;
    dirs.push_back({std::cos(phi), std::sin(phi)});
  }
  return dirs;
}

} // namespace

Json singular_point_json(const SingularPoint& p) {
  Json j{{"x", num(p.location[0])},
         {"y", num(p.location[1])},
         {"class", class_name(p.classification)},
         {"eigenvalues", Json::array({num(p.eigenvalues[0]), num(p.eigenvalues[1])})},
         {"ratio", num(p.ratio)},
         {"residual", num(p.residual)},
         {"converged", p.converged}};
  if (!p.warning.empty()) j["warning"] = p.warning;
  return j;
}

UPoly parse_univariate(const std::string& text) {
  const std::vector<std::string> x{"x"};
  return UPoly::from_poly(parse_poly(text, x), 0);
}

std::vector<double> level_grid(double t0, double t1, std::size_t n) {
  if (n == 0) throw InputError("samples must be positive");
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = n == 1 ? t0 : t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n - 1);
  return g;
}

Transversal auto_section(const FoliationRecord& F, double t0, double t1, const SingularityOptions& opt) {
  if (!F.first_integral) throw InputError("the base foliation has no first integral; pass --q and --reach");
  const auto& f = *F.first_integral;
  const double lo = std::min(t0, t1), hi = std::max(t0, t1);
  for (const auto& p : find_singularities(F, opt)) {
    if (p.classification != SingularClass::CenterCandidate) continue;
    if (std::fabs(p.location[0].imag()) > 1e-9 || std::fabs(p.location[1].imag()) > 1e-9) continue;
    // Real closed orbits need a real center: eigenvalues +-i w, not a real saddle.
    if (!(std::fabs(p.eigenvalues[0].imag()) > 1e3 * std::fabs(p.eigenvalues[0].real()))) continue;
    const Point c{p.location[0].real(), p.location[1].real()};
    const double fc = level_of(f, c);
    if (!std::isfinite(fc) || (lo - fc) * (hi - fc) <= 0) continue;
    const double far = std::max(std::fabs(lo - fc), std::fabs(hi - fc));
    const double side = lo > fc ? 1.0 : -1.0;
    for (const auto& d : ray_directions(f, c)) {
      // March outward while f moves monotonically away from fc.
      double r = 1e-4, prev = 0, r_far = 0;
      while (r < 1e4) {
        const double g = side * (level_of(f, {c[0] + r * d[0], c[1] + r * d[1]}) - fc);
        if (!std::isfinite(g) || g <= prev) break;
        if (g >= far) {
          r_far = r;
          break;
        }
        prev = g;
        r = r * 1.02 + 1e-4;
      }
      if (r_far == 0) continue;
      try {
        const Point q{c[0] + 0.5 * r_far * d[0], c[1] + 0.5 * r_far * d[1]};
        auto sec = Transversal::gradient_section(f, q, 1.5 * r_far);
        const auto range = sec.parameter_range();
        if (range[0] <= lo && hi <= range[1]) return sec;
      } catch (const NumericError&) {
      } catch (const InputError&) {
      }
    }
  }
  throw InputError("no section through a real center covers the levels; pass --q and --reach");
}

Output cmd_sing(const FoliationRecord& F, const RunConfig& c) {
  Output o;
  o.json = Json::array();
  for (const auto& p : find_singularities(F, singularity_options(c))) o.json.push_back(singular_point_json(p));
  return o;
}

Output cmd_classify(const FoliationRecord& F, const ComplexPoint& p, const RunConfig& c) {
  return {singular_point_json(classify_singularity(F, p, singularity_options(c))), {}};
}

Output cmd_log(const LogarithmicSpec& spec, const RunConfig& c) {
  const auto census = count_centers(spec, singularity_options(c));
  const auto deg = spec.degrees();
  Json pts = Json::array();
  for (std::size_t i = 0; i < census.points.size(); ++i) {
    Json j = singular_point_json(census.points[i]);
    j["on_intersection"] = static_cast<bool>(census.on_intersection[i]);
    pts.push_back(j);
  }
  return {Json{{"degrees", deg},
               {"target_degree", spec.target_degree()},
               {"centers", census.centers},
               {"line_intersections", census.line_intersections},
               {"other", census.other},
               {"expected_centers", expected_centers(deg)},
               {"expected_intersections", expected_intersections(deg)},
               {"points", pts}},
          {}};
}

Output cmd_dulac(DulacKind kind, const Poly& p, const Poly& q, unsigned i) {
  const auto F = dulac_family(kind, p, q, i);
  Json j = record_json(F);
  if (kind == DulacKind::A) j["i"] = i;
  return {j, {}};
}

Output cmd_pullback(const PolyMap& F, const DifferentialForm& omega_n) {
  const auto G = pullback(F, omega_n);
  Json j = record_json(G);
  j["integrable_source"] = integrability_check(omega_n).integrable;
  return {j, {}};
}

Output cmd_integrability(const DifferentialForm& omega_n) {
  const auto r = integrability_check(omega_n);
  Json res = Json::array();
  for (const auto& p : r.residual) res.push_back(poly_text(p));
  return {Json{{"nvars", omega_n.nvars()}, {"integrable", r.integrable}, {"residual", res}}, {}};
}

Output cmd_holonomy(const HolonomyRequest& r, const RunConfig& c) {
  FlowOptions fo;
  fo.rel_tol = c.rel_tol;
  const FoliationRecord Fe = r.pert ? make_record(r.base.omega + rationalize(r.eps) * *r.pert) : r.base;
  const std::size_t n = r.grid.size();
  std::vector<HolonomySample> hs(n);
  std::vector<double> closure(n);
  parallel_for(n, [&](std::size_t k) {
    const auto seed = trace_cycle(r.base, r.section, r.grid[k], fo);
    closure[k] = seed.diagnostics.closure_error;
    hs[k] = holonomy(Fe, r.section, seed, r.grid[k], fo);
  });
  std::vector<double> t_out, disp, first;
  Output o;
  o.csv = r.pert ? "t,t_out,displacement,first_order\n" : "t,t_out,displacement\n";
  for (std::size_t k = 0; k < n; ++k) {
    t_out.push_back(hs[k].t_out);
    disp.push_back(hs[k].t_out - r.grid[k]);
    std::vector<double> row{r.grid[k], hs[k].t_out, disp.back()};
    if (r.pert) {
      first.push_back(disp.back() / r.eps);
      row.push_back(first.back());
    }
    o.csv += csv_row(row) + "\n";
  }
  o.json = Json{{"grid", num_list(r.grid)}, {"t_out", num_list(t_out)}, {"displacement", num_list(disp)}};
  if (r.pert) {
    o.json["eps"] = num(r.eps);
    o.json["first_order"] = num_list(first);
  }
  o.json["closure_error"] = num_list(closure);
  return o;
}

std::string cycle_csv(const FoliationRecord& F, const Transversal& section, double level, const RunConfig& c) {
  FlowOptions fo;
  fo.rel_tol = c.rel_tol;
  const auto cyc = trace_cycle(F, section, level, fo);
  Json head{{"level", num(cyc.level)}, {"closure_error", num(cyc.diagnostics.closure_error)}};
  std::string out = "# " + head.dump() + "\nx,y\n";
  for (const auto& p : cyc.points) out += csv_row({p[0], p[1]}) + "\n";
  return out;
}

Output cmd_melnikov(const MelnikovProblem& problem, const std::vector<double>& grid, const RunConfig& c,
                    std::optional<double> threshold) {
  const auto v = tangency_test(problem, grid, threshold, melnikov_options(c));
  const auto& s = v.samples;
  Output o;
  o.csv = "t,M1\n";
  for (std::size_t k = 0; k < s.grid.size(); ++k) o.csv += csv_row({s.grid[k], s.values[k]}) + "\n";
  o.json = Json{{"grid", num_list(s.grid)},
                {"M1", num_list(s.values)},
                {"cycle_lengths", num_list(s.cycle_lengths)},
                {"skipped", num_list(s.skipped)},
                {"multiplicity", s.multiplicity ? Json(*s.multiplicity) : Json(nullptr)},
                {"identically_zero", s.identically_zero},
                {"slope", num(s.slope)},
                {"fit_residual", num(s.fit_residual)},
                {"verdict",
                 {{"max_abs", num(v.max_abs)},
                  {"threshold", num(v.threshold)},
                  {"first_order_center_compatible", v.compatible}}}};
  return o;
}

Output cmd_monodromy(const UPoly& p, std::size_t orbit_start) {
  const auto M = build_model(p);
  const auto ops = monodromy_generators(M);
  if (orbit_start >= ops.size()) throw InputError("--orbit-start out of range");
  Json cv = Json::array(), gens = Json::array();
  for (auto c : M.critical_values) cv.push_back(num(c));
  for (const auto& op : ops)
    gens.push_back(Json{{"c", num(M.critical_values[op.critical_index])},
                        {"delta", int_vector(op.vanishing_cycle)},
                        {"matrix", int_matrix(op.matrix)},
                        {"projection_angle", num(op.projection_angle)}});
  const auto orb = orbit_span(ops, M.lattice, ops[orbit_start].vanishing_cycle);
  Json basis = Json::array();
  for (const auto& b : orb.basis) basis.push_back(int_vector(b));
  const auto inf = cycle_at_infinity(M);
  Json order = Json::array();
  for (auto k : angular_order(M)) order.push_back(k);
  return {Json{{"p", p.to_string("x")},
               {"base", num(M.base)},
               {"critical_values", cv},
               {"basis_labels", M.lattice.labels},
               {"basis_rank", M.lattice.rank},
               {"intersection_matrix", int_matrix(M.lattice.intersection)},
               {"generators", gens},
               {"loop_order", order},
               {"monodromy_at_infinity", int_matrix(monodromy_at_infinity(M))},
               {"orbit", {{"start", orbit_start}, {"rank", orb.rank}, {"basis", basis}}},
               {"infinity_cycle", inf ? int_vector(*inf) : Json(nullptr)}},
          {}};
}

Output cmd_picard_fuchs(const UPoly& p) {
  const auto G = picard_fuchs(p);
  Json entries = Json::array();
  for (const auto& row : G.entries) {
    Json r = Json::array();
    for (const auto& e : row) r.push_back(e.to_string("t"));
    entries.push_back(r);
  }
  const auto eq = scalar_equation(G);
  Json coeffs = Json::array();
  for (const auto& c : eq.coeffs) coeffs.push_back(c.to_string("t"));
  return {Json{{"p", p.to_string("x")},
               {"fiber", "y^2 = p(x) + t"},
               {"basis", G.basis},
               {"discriminant", G.discriminant.to_string("t")},
               {"entries", entries},
               {"scalar_equation", {{"order", eq.coeffs.size()}, {"coefficients", coeffs}}}},
          {}};
}

Output cmd_brieskorn(int m, const DifferentialForm& omega) {
  const auto B = brieskorn_basis(m);
  Json coeffs = Json::array();
  for (const auto& c : brieskorn_reduce(m, omega)) coeffs.push_back(c.is_zero() ? "0" : c.to_string("t"));
  return {Json{{"f", "y^2 - x^" + std::to_string(m)}, {"basis", B.labels}, {"omega", form_json(omega)}, {"coefficients", coeffs}},
          {}};
}

} // namespace fol::cli
