#pragma once

#include "foliation/errors.hpp"
#include "foliation/foliation.hpp"
#include "foliation/singularities.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fol {

using Point = std::array<double, 2>;

class FlowError : public NumericError {
public:
  enum class Kind { NoReturn, SingularityApproach, LeftTube, StepBudget, BadSection };
  FlowError(Kind kind, const std::string& what) : NumericError(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

private:
  Kind kind_;
};

struct FlowOptions {
  double rel_tol = 1e-10;
  double event_tol = 1e-12;
  std::size_t max_steps = 200000;
  // |X| below this fraction of the largest |X| seen on the orbit counts as
  // a singularity approach.
  double singular_fraction = 1e-6;
  std::size_t resample_points = 256;
  double tube_fraction = 0.2;
};

// Real dual vector field X = (P, Q) in double precision.
class PlaneField {
public:
  PlaneField() = default;
  explicit PlaneField(const FoliationRecord& F) : P_(F.P), Q_(F.Q) {}
  PlaneField(const Poly& P, const Poly& Q) : P_(P), Q_(Q) {}
  Point operator()(const Point& z) const { return {P_(z[0], z[1]), Q_(z[0], z[1])}; }

private:
  NumericPoly P_, Q_;
};

// Segment {base + s dir : s in [s_min, s_max]} of a line.  The chart maps a
// point to t = f(point) (FirstIntegral, f increasing in s) or t = s
// (Distance).
class Transversal {
public:
  enum class Chart { FirstIntegral, Distance };

  // Line through q along grad f(q); the range is the largest interval
  // around 0 (|s| <= reach) on which f stays strictly increasing.
  static Transversal gradient_section(const PowerProduct& f, const Point& q, double reach);
  // Ray from base along dir, parameterized by distance.
  static Transversal ray(const Point& base, const Point& dir, double length);

  Chart chart() const noexcept { return chart_; }
  const Point& base() const noexcept { return base_; }
  const Point& direction() const noexcept { return dir_; }
  double s_min() const noexcept { return s_min_; }
  double s_max() const noexcept { return s_max_; }
  double length() const noexcept { return s_max_ - s_min_; }
  const std::optional<PowerProduct>& first_integral() const noexcept { return f_; }

  Point at(double s) const { return {base_[0] + s * dir_[0], base_[1] + s * dir_[1]}; }
  double coordinate(const Point& z) const;
  double parameter(const Point& z) const;
  // Chart range [t(s_min), t(s_max)].
  std::array<double, 2> parameter_range() const;
  // Point of the section with parameter t; throws FlowError(BadSection).
  Point point_at(double t) const;

private:
  Chart chart_ = Chart::Distance;
  Point base_{}, dir_{1.0, 0.0};
  double s_min_ = 0, s_max_ = 1;
  std::optional<PowerProduct> f_;
};

struct FlowDiagnostics {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double rel_tol = 0;
  double closure_error = 0;
  // max |f - t| over the resampled points when a first integral is known.
  double level_error = 0;
};

struct CycleApprox {
  double level = 0;
  // Closed polyline, counterclockwise, points.front() == points.back().
  std::vector<Point> points;
  std::size_t section_index = 0;
  // Raw accepted steps of the integration of flow_sign * X from the section
  // point; raw_times strictly increasing from 0 to period.
  std::vector<double> raw_times;
  std::vector<Point> raw_points;
  double period = 0;
  // +1 when X itself runs counterclockwise.
  int flow_sign = 1;
  double length = 0;
  double diameter = 0;
  FlowDiagnostics diagnostics;
};

// Solution of z' = X(z) after the given (possibly negative) time.
Point flow_map(const FoliationRecord& F, const Point& z0, double time, const FlowOptions& opt = {});

CycleApprox trace_cycle(const FoliationRecord& F, const Transversal& sigma, double t,
                        const FlowOptions& opt = {});

// Points of the traced orbit at times k * period / n, k = 0..n-1, obtained
// by re-integrating from the nearest raw step.
std::vector<Point> sample_uniform_time(const FoliationRecord& F, const CycleApprox& cycle, std::size_t n);

struct HolonomySample {
  double t_in = 0;
  double t_out = 0;
  double return_time = 0;
  double max_tube_distance = 0;
  FlowDiagnostics diagnostics;
};

HolonomySample holonomy(const FoliationRecord& F_eps, const Transversal& sigma, const CycleApprox& seed,
                        double t, const FlowOptions& opt = {});

struct CenterVerdict {
  bool consistent_with_center = true;
  std::vector<double> t;
  std::vector<double> h;
  double threshold_factor = 1e-8;
  // Index of the first violating sample, if any.
  std::optional<std::size_t> violation;
};

CenterVerdict numeric_center_test(const FoliationRecord& F, const SingularPoint& p, std::size_t samples = 6,
                                  const FlowOptions& opt = {});

} // namespace fol
