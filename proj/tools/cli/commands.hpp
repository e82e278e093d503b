#pragma once

#include "cli/io.hpp"

#include "foliation/foliation.hpp"
#include "foliation/melnikov.hpp"
#include "foliation/singularities.hpp"
#include "foliation/upoly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fol::cli {

// Output of a command: JSON always, CSV where the command has a table.
struct Output {
  Json json;
  std::string csv;
};

SingularityOptions singularity_options(const RunConfig& c);
MelnikovOptions melnikov_options(const RunConfig& c);

Json singular_point_json(const SingularPoint& p);
Json integer_json(const Integer& z);

UPoly parse_univariate(const std::string& text);

// Section through a real center (eigenvalues +-i w) of F covering the levels [t0, t1]: along
// the first of eight rays from the center on which f is monotone out to the
// farther level.  Throws InputError when no ray works.
Transversal auto_section(const FoliationRecord& F, double t0, double t1, const SingularityOptions& opt = {});

// Evenly spaced levels t0 .. t1 (both included; a single sample is t0).
std::vector<double> level_grid(double t0, double t1, std::size_t n);

Output cmd_sing(const FoliationRecord& F, const RunConfig& c);
Output cmd_classify(const FoliationRecord& F, const ComplexPoint& p, const RunConfig& c);
Output cmd_log(const LogarithmicSpec& spec, const RunConfig& c);
Output cmd_dulac(DulacKind kind, const Poly& p, const Poly& q, unsigned i);
Output cmd_pullback(const PolyMap& F, const DifferentialForm& omega_n);
Output cmd_integrability(const DifferentialForm& omega_n);

struct HolonomyRequest {
  FoliationRecord base;
  std::optional<DifferentialForm> pert;
  double eps = 0;
  Transversal section;
  std::vector<double> grid;
  std::optional<double> cycle_level;
};
Output cmd_holonomy(const HolonomyRequest& r, const RunConfig& c);
// CSV "x,y" of the traced cycle at `level` after a JSON header comment.
std::string cycle_csv(const FoliationRecord& F, const Transversal& section, double level, const RunConfig& c);

Output cmd_melnikov(const MelnikovProblem& problem, const std::vector<double>& grid, const RunConfig& c,
                    std::optional<double> threshold = std::nullopt);
Output cmd_monodromy(const UPoly& p, std::size_t orbit_start);
Output cmd_picard_fuchs(const UPoly& p);
Output cmd_brieskorn(int m, const DifferentialForm& omega);

} // namespace fol::cli
