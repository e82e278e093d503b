#include "cli/commands.hpp"
#include "cli/io.hpp"
#include "cli/selftest.hpp"

#include "foliation/errors.hpp"
#include "foliation/parallel.hpp"
#include "foliation/parser.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace fol;
using namespace fol::cli;

namespace {

int fail(const char* kind, const std::string& message, int code, std::optional<std::size_t> offset = std::nullopt) {
  Json j{{"error", kind}, {"message", message}, {"exit_code", code}};
  if (offset) j["offset"] = *offset;
  std::cerr << j.dump() << "\n";
  return code;
}

void emit(const Output& o, const RunConfig& c) {
  if (c.format == "csv") {
    if (o.csv.empty()) throw InputError("this command has no CSV output");
    std::cout << o.csv;
  } else {
    std::cout << o.json.dump(2) << "\n";
  }
}

Poly plane_poly(const std::string& text, const char* what) {
  const std::vector<std::string> xy{"x", "y"};
  try {
    return parse_poly(text, xy);
  } catch (const ParseError& e) {
    throw ParseError(std::string(what) + ": " + e.what(), e.offset());
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"foliation: plane polynomial foliations, Melnikov functions and monodromy"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path, format;
  double root_residual = 0, ratio_band = 0, quad_tol = 0, rel_tol = 0;
  unsigned threads = 0;
  app.add_option("--config", config_path, "JSON run configuration");
  auto* o_format = app.add_option("--format", format, "json or csv");
  auto* o_root = app.add_option("--root-residual", root_residual, "singular point residual tolerance");
  auto* o_ratio = app.add_option("--ratio-band", ratio_band, "eigenvalue ratio band for centers");
  auto* o_quad = app.add_option("--quad-tol", quad_tol, "quadrature refinement tolerance");
  auto* o_rel = app.add_option("--rel-tol", rel_tol, "integrator relative tolerance");
  auto* o_threads = app.add_option("--threads", threads, "worker count (overrides FOLIATION_THREADS)");

  std::string form_file, base_file, pert_file, omega_file, poly_text_arg, p_arg, q_arg, kind = "A", x_arg, y_arg, q_point,
      cycle_out;
  std::vector<std::string> f_list, lambda_list, map_list;
  unsigned dulac_i = 0;
  double eps = 1e-4, reach = 0, t0 = 0, t1 = 0, t_min = 0, t_max = 0, threshold = 0, cycle_level = 0;
  std::size_t samples = 0, orbit_start = 0;
  int brieskorn_m = 0;
  std::vector<int> only;

  auto* sing = app.add_subcommand("sing", "singular points of a foliation");
  sing->add_option("--form", form_file, "foliation file")->required();

  auto* classify = app.add_subcommand("classify", "classify one point");
  classify->add_option("--form", form_file, "foliation file")->required();
  classify->add_option("--x", x_arg, "x as re or re,im")->required();
  classify->add_option("--y", y_arg, "y as re or re,im")->required();

  auto* logc = app.add_subcommand("log", "center census of a logarithmic foliation");
  logc->add_option("--form", form_file, "logarithmic foliation file");
  logc->add_option("--f", f_list, "factor f_i (repeat)");
  logc->add_option("--lambda", lambda_list, "multiplicity lambda_i (repeat)");

  auto* dulac = app.add_subcommand("dulac", "Dulac families A_i and B_1");
  dulac->add_option("--kind", kind, "A or B1")->check(CLI::IsMember({"A", "B1"}));
  dulac->add_option("--p", p_arg, "degree one polynomial p")->required();
  dulac->add_option("--q", q_arg, "polynomial q")->required();
  dulac->add_option("--i", dulac_i, "index i of A_i");

  auto* pull = app.add_subcommand("pullback", "pullback of a 1-form by a polynomial map");
  pull->add_option("--map", map_list, "component in x, y (repeat)")->required();
  pull->add_option("--omega", omega_file, "1-form file in as many variables as components")->required();

  auto* integ = app.add_subcommand("integrability", "omega ^ d omega");
  integ->add_option("--omega", omega_file, "1-form file")->required();

  auto* hol = app.add_subcommand("holonomy", "first-return map on a section");
  hol->add_option("--base", base_file, "foliation with a first integral")->required();
  auto* o_pert = hol->add_option("--pert", pert_file, "perturbation 1-form file");
  hol->add_option("--eps", eps, "perturbation size");
  auto* o_hq = hol->add_option("--q", q_point, "section point x,y");
  hol->add_option("--reach", reach, "section half-length");
  hol->add_option("--t-min", t_min, "first level")->required();
  hol->add_option("--t-max", t_max, "last level")->required();
  hol->add_option("--samples", samples, "number of levels")->required();
  auto* o_cycle = hol->add_option("--cycle-out", cycle_out, "write the cycle at --cycle-level as CSV");
  hol->add_option("--cycle-level", cycle_level, "level for --cycle-out (default t-min)");

  auto* mel = app.add_subcommand("melnikov", "first Melnikov function");
  mel->add_option("--base", base_file, "foliation with first integral and integrating factor")->required();
  mel->add_option("--pert", pert_file, "perturbation 1-form file")->required();
  mel->add_option("--t0", t0, "first level")->required();
  mel->add_option("--t1", t1, "last level")->required();
  mel->add_option("--samples", samples, "number of levels")->required();
  auto* o_mq = mel->add_option("--q", q_point, "section point x,y");
  mel->add_option("--reach", reach, "section half-length");
  auto* o_thr = mel->add_option("--threshold", threshold, "zero threshold for the tangency verdict");

  auto* mono = app.add_subcommand("monodromy", "Picard-Lefschetz monodromy of y^2 - p(x)");
  mono->add_option("--p", poly_text_arg, "polynomial in x")->required();
  mono->add_option("--orbit-start", orbit_start, "generator whose vanishing cycle starts the orbit");

  auto* pf = app.add_subcommand("picard-fuchs", "Gauss-Manin connection of y^2 = p(x) + t");
  pf->add_option("--p", poly_text_arg, "polynomial in x")->required();

  auto* bk = app.add_subcommand("brieskorn", "Brieskorn module reduction for y^2 - x^m");
  bk->add_option("--m", brieskorn_m, "exponent m >= 2")->required();
  bk->add_option("--omega", omega_file, "plane 1-form file")->required();

  auto* st = app.add_subcommand("selftest", "acceptance suite");
  st->add_option("--only", only, "criterion numbers to run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (o_format->count()) cfg.format = format;
    if (o_root->count()) cfg.root_residual = root_residual;
    if (o_ratio->count()) cfg.ratio_band = ratio_band;
    if (o_quad->count()) cfg.quad_tol = quad_tol;
    if (o_rel->count()) cfg.rel_tol = rel_tol;
    if (o_threads->count()) cfg.threads = threads;
    validate(cfg);
    if (cfg.threads) set_worker_count(*cfg.threads);

    if (*sing) {
      emit(cmd_sing(parse_foliation(read_json_file(form_file)), cfg), cfg);
    } else if (*classify) {
      emit(cmd_classify(parse_foliation(read_json_file(form_file)), {parse_complex_arg(x_arg), parse_complex_arg(y_arg)}, cfg),
           cfg);
    } else if (*logc) {
      LogarithmicSpec spec;
      if (!form_file.empty()) {
        spec = parse_log_spec(read_json_file(form_file));
      } else {
        if (f_list.empty() || f_list.size() != lambda_list.size())
          throw InputError("log needs --form or matching --f and --lambda lists");
        for (std::size_t i = 0; i < f_list.size(); ++i) {
          spec.f.push_back(plane_poly(f_list[i], "--f"));
          spec.lambda.push_back(parse_rational(lambda_list[i]));
        }
      }
      emit(cmd_log(spec, cfg), cfg);
    } else if (*dulac) {
      emit(cmd_dulac(kind == "A" ? DulacKind::A : DulacKind::B1, plane_poly(p_arg, "--p"), plane_poly(q_arg, "--q"), dulac_i),
           cfg);
    } else if (*pull) {
      PolyMap F;
      for (const auto& s : map_list) F.components.push_back(plane_poly(s, "--map"));
      emit(cmd_pullback(F, parse_form(read_json_file(omega_file), map_list.size())), cfg);
    } else if (*integ) {
      emit(cmd_integrability(parse_form(read_json_file(omega_file))), cfg);
    } else if (*hol) {
      HolonomyRequest r;
      r.base = parse_foliation(read_json_file(base_file));
      if (o_pert->count()) r.pert = parse_form(read_json_file(pert_file), 2);
      r.eps = eps;
      if (o_hq->count()) {
        if (!r.base.first_integral) throw InputError("the base foliation has no first integral");
        r.section = Transversal::gradient_section(*r.base.first_integral, parse_point_arg(q_point), reach > 0 ? reach : 1.0);
      } else {
        r.section = auto_section(r.base, t_min, t_max, singularity_options(cfg));
      }
      r.grid = level_grid(t_min, t_max, samples);
      if (o_cycle->count()) {
        std::ofstream out(cycle_out, std::ios::binary);
        if (!out) throw InputError("cannot write " + cycle_out);
        out << cycle_csv(r.base, r.section, cycle_level != 0 ? cycle_level : t_min, cfg);
      }
      emit(cmd_holonomy(r, cfg), cfg);
    } else if (*mel) {
      const auto base = parse_foliation(read_json_file(base_file));
      const auto w = parse_form(read_json_file(pert_file), 2);
      Transversal sec;
      if (o_mq->count()) {
        if (!base.first_integral) throw InputError("the base foliation has no first integral");
        sec = Transversal::gradient_section(*base.first_integral, parse_point_arg(q_point), reach > 0 ? reach : 1.0);
      } else {
        sec = auto_section(base, t0, t1, singularity_options(cfg));
      }
      const auto problem = make_melnikov_problem(base, w, sec);
      emit(cmd_melnikov(problem, level_grid(t0, t1, samples), cfg,
                        o_thr->count() ? std::optional<double>(threshold) : std::nullopt),
           cfg);
    } else if (*mono) {
      emit(cmd_monodromy(parse_univariate(poly_text_arg), orbit_start), cfg);
    } else if (*pf) {
      emit(cmd_picard_fuchs(parse_univariate(poly_text_arg)), cfg);
    } else if (*bk) {
      emit(cmd_brieskorn(brieskorn_m, parse_form(read_json_file(omega_file), 2)), cfg);
    } else if (*st) {
      SelftestOptions so;
      so.root_residual = cfg.root_residual;
      so.ratio_band = cfg.ratio_band;
      so.quad_tol = cfg.quad_tol;
      so.rel_tol = cfg.rel_tol;
      so.seed = cfg.seed;
      for (int k : only) {
        if (k < 1 || k > 8) throw InputError("criteria are numbered 1 to 8");
        so.only.insert(k);
      }
      const auto results = run_selftest(so);
      std::cout << format_report(results);
      for (const auto& r : results)
        if (!r.passed()) return 1;
    }
  } catch (const ParseError& e) {
    return fail("parse", e.what(), 2, e.offset());
  } catch (const InputError& e) {
    return fail("input", e.what(), 2);
  } catch (const NumericError& e) {
    return fail("numeric", e.what(), 3);
  } catch (const std::exception& e) {
    return fail("numeric", e.what(), 3);
  }
  return 0;
}
