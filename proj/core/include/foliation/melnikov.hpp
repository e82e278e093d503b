#pragma once

#include "foliation/flow.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace fol {

struct MelnikovOptions {
  FlowOptions flow;
  // Quadrature refinement stops when successive values differ by less than
  // quad_tol * max(1, |value|).
  double quad_tol = 1e-9;
  std::size_t min_nodes = 64;
  std::size_t max_nodes = 1 << 16;
};

// Flow options for tracing the cycles a quadrature runs over: rel_tol is
// capped at quad_tol / 1000 so the orbit error stays below the quadrature
// target.
FlowOptions quadrature_flow(const MelnikovOptions& opt);

// omega = s df on the working region around the section.
struct MelnikovProblem {
  FoliationRecord base;
  DifferentialForm omega1{2, 1};
  Transversal section;
  // Critical value at the center the cycles shrink to.
  double t_center = 0;
};

// Validates the data: base carries f and s, omega1 is a plane 1-form, and
// omega - s df vanishes at 20 points spread over the section segment.
MelnikovProblem make_melnikov_problem(const FoliationRecord& base, const DifferentialForm& omega1,
                                      const Transversal& section);

struct M1Value {
  double t = 0;
  double value = 0;
  std::size_t nodes = 0;
  double cycle_length = 0;
};

// M1(t) = -oint_{delta_t} omega1 / s.
M1Value m1(const MelnikovProblem& problem, double t, const MelnikovOptions& opt = {});

// Integral over a traced cycle (counterclockwise) of integrand(z, v) dtau,
// where v is the counterclockwise velocity; periodic trapezoid rule in time.
double oint(const FoliationRecord& base, const CycleApprox& cycle,
            const std::function<double(const Point&, const Point&)>& integrand, const MelnikovOptions& opt = {},
            std::size_t* nodes = nullptr);

// Integral of omega1 / s over a traced cycle (counterclockwise).
double cycle_integral(const FoliationRecord& base, const CycleApprox& cycle, const DifferentialForm& omega1,
                      const MelnikovOptions& opt = {}, std::size_t* nodes = nullptr);

struct MelnikovSamples {
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> cycle_lengths;
  // Grid points whose cycle could not be traced are dropped.
  std::vector<double> skipped;
  std::optional<int> multiplicity;
  bool identically_zero = false;
  double slope = 0;
  double fit_residual = 0;
  double zero_threshold = 0;
};

// Default threshold: 1e-8 times the largest traced cycle length.
MelnikovSamples m1_sweep(const MelnikovProblem& problem, const std::vector<double>& grid,
                         const MelnikovOptions& opt = {}, std::optional<double> threshold = std::nullopt);

struct TangencyVerdict {
  double max_abs = 0;
  double threshold = 0;
  bool compatible = false;
  MelnikovSamples samples;
};

TangencyVerdict tangency_test(const MelnikovProblem& problem, const std::vector<double>& grid,
                              std::optional<double> threshold = std::nullopt, const MelnikovOptions& opt = {});

} // namespace fol
