#pragma once

#include "foliation/foliation.hpp"

#include <array>
#include <string>
#include <vector>

namespace fol {

using ComplexPoint = std::array<Complex, 2>;
using ComplexMatrix2 = std::array<std::array<Complex, 2>, 2>;

enum class SingularClass { NonReduced, CenterCandidate, ResonantOther, GenericReduced, DicriticalCandidate };

const char* class_name(SingularClass c);

struct SingularPoint {
  ComplexPoint location{};
  // [[P_x, P_y], [Q_x, Q_y]] at the point.
  ComplexMatrix2 jacobian{};
  // Ordered so that |eigenvalues[0]| >= |eigenvalues[1]|.
  std::array<Complex, 2> eigenvalues{};
  // eigenvalues[0] / eigenvalues[1]; meaningless when non-reduced.
  Complex ratio{};
  SingularClass classification = SingularClass::NonReduced;
  double residual = 0.0;
  bool converged = true;
  std::string warning;
};

struct SingularityOptions {
  double root_residual = 1e-10;
  double ratio_band = 1e-6;
  double det_tolerance = 1e-9;
  double search_box = 1e6;
};

// Isolated points of {P = Q = 0} in the search box, sorted by
// (Re x, Im x, Re y, Im y).  Throws InputError when P and Q share a factor.
std::vector<SingularPoint> find_singularities(const FoliationRecord& F,
                                              const SingularityOptions& opt = {});

SingularPoint classify_singularity(const FoliationRecord& F, const ComplexPoint& p,
                                   const SingularityOptions& opt = {});

struct CenterCensus {
  int centers = 0;
  int line_intersections = 0;
  int other = 0;
  std::vector<SingularPoint> points;
  // Parallel to points: some pair f_i = f_j = 0 vanishes there.
  std::vector<bool> on_intersection;
};

// Throws InputError for a degenerate spec (a tangency, a triple point, or an
// intersection count different from sum_{i<j} d_i d_j).
CenterCensus count_centers(const LogarithmicSpec& spec, const SingularityOptions& opt = {});

// d^2 - sum_{i<j} d_i d_j with d = sum d_i - 1.
int expected_centers(const std::vector<int>& degrees);
int expected_intersections(const std::vector<int>& degrees);

bool point_less(const ComplexPoint& a, const ComplexPoint& b);

} // namespace fol
