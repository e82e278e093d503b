#include "doctest.h"

#include "foliation/flow.hpp"
#include "foliation/parser.hpp"

#include <cmath>
#include <numbers>

using namespace fol;

namespace {

Poly P2(const char* s) { return parse_poly(s, std::vector<std::string>{"x", "y"}); }

constexpr double kPi = std::numbers::pi;

double shoelace(const std::vector<Point>& pts) {
  double a = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) a += pts[i][0] * pts[i + 1][1] - pts[i][1] * pts[i + 1][0];
  return 0.5 * a;
}

FoliationRecord circle() { return hamiltonian(P2("1/2*x^2 + 1/2*y^2")); }

// Center at (1,0) with f = -2, saddle at (-1,0) with f = 2.
FoliationRecord cubic() { return hamiltonian(P2("y^2 + x^3 - 3*x")); }

FoliationRecord triangle() {
  return logarithmic({{P2("x"), P2("y"), P2("1 - x - y")}, {Rational(1), Rational(1), Rational(1)}});
}

Transversal section(const FoliationRecord& F, Point q, double reach = 2.0) {
  return Transversal::gradient_section(*F.first_integral, q, reach);
}

} // namespace

TEST_CASE("gradient section of the circle system") {
  const auto F = circle();
  const auto sig = section(F, {1.0, 0.0});
  CHECK(sig.direction()[0] == doctest::Approx(1.0));
  CHECK(std::fabs(sig.direction()[1]) < 1e-15);
  CHECK(sig.s_min() == doctest::Approx(-1.0).epsilon(1e-12));
  const auto z = sig.point_at(0.5);
  CHECK(std::fabs(z[0] - 1.0) < 1e-14);
  CHECK(sig.parameter({0.3, 0.0}) == doctest::Approx(0.045));
  CHECK_THROWS_AS(sig.point_at(-0.1), FlowError);
}

TEST_CASE("circle cycle at t = 1/2") {
  const auto F = circle();
  const auto sig = section(F, {1.0, 0.0});
  const auto c = trace_cycle(F, sig, 0.5);
  CHECK(c.diagnostics.closure_error < 1e-8);
  REQUIRE(c.points.size() == 257);
  CHECK(c.points.front() == c.points.back());
  for (const auto& p : c.points) CHECK(std::fabs(std::hypot(p[0], p[1]) - 1.0) < 1e-9);
  CHECK(shoelace(c.points) > 0);
  CHECK(shoelace(c.points) == doctest::Approx(kPi).epsilon(1e-3));
  CHECK(c.period == doctest::Approx(2 * kPi).epsilon(1e-10));
  CHECK(c.length == doctest::Approx(2 * kPi).epsilon(1e-5));
  CHECK(c.flow_sign == -1);
  // Uniform arclength spacing.
  for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
    const double d = std::hypot(c.points[i + 1][0] - c.points[i][0], c.points[i + 1][1] - c.points[i][1]);
    CHECK(d == doctest::Approx(2 * kPi / 256).epsilon(1e-3));
  }
}

TEST_CASE("triangle product: closed oval around the interior center") {
  const auto F = triangle();
  REQUIRE(F.first_integral);
  const auto sig = section(F, {0.45, 1.0 / 3.0}, 0.5);
  const auto range = sig.parameter_range();
  CHECK(range[1] <= 1.0 / 27 + 1e-15);
  CHECK(range[1] > 0.036);
  for (double t : {0.005, 0.02, 0.035}) {
    const auto c = trace_cycle(F, sig, t);
    CHECK(c.diagnostics.closure_error < 1e-8);
    CHECK(c.diagnostics.level_error <= 1e-9 * std::max(1.0, t));
    for (const auto& p : c.points) {
      CHECK(p[0] > 0);
      CHECK(p[1] > 0);
      CHECK(p[0] + p[1] < 1);
    }
  }
}

TEST_CASE("critical levels approach a singularity") {
  const auto F = circle();
  const auto sig = section(F, {1.0, 0.0});
  try {
    trace_cycle(F, sig, 0.0);
    FAIL("expected a flow error");
  } catch (const FlowError& e) {
    CHECK(e.kind() == FlowError::Kind::SingularityApproach);
  }
  const auto G = cubic();
  const auto sg = section(G, {1.5, 0.0}, 3.0);
  try {
    trace_cycle(G, sg, 2.0);
    FAIL("expected a flow error");
  } catch (const FlowError& e) {
    CHECK(e.kind() == FlowError::Kind::SingularityApproach);
  }
}

TEST_CASE("energy conservation and reversibility") {
  struct Case {
    FoliationRecord F;
    Point q;
    std::vector<double> levels;
  };
  std::vector<Case> cases;
  cases.push_back({circle(), {1.0, 0.0}, {0.01, 0.5, 3.0}});
  cases.push_back({cubic(), {1.5, 0.0}, {-1.9, -1.0, 0.0, 1.5, 1.9}});
  cases.push_back({hamiltonian(P2("1/2*x^2 + 2*y^2 + 1/4*x^4")), {0.5, 0.0}, {0.1, 1.0, 5.0}});
  for (const auto& cs : cases) {
    const auto sig = section(cs.F, cs.q, 5.0);
    const auto& f = *cs.F.first_integral;
    for (double t : cs.levels) {
      const auto c = trace_cycle(cs.F, sig, t);
      double lev = 0;
      for (const auto& p : c.raw_points) lev = std::max(lev, std::fabs(f.value(p[0], p[1]) - t));
      CHECK(lev <= 1e-9 * std::max(1.0, std::fabs(t)));
      CHECK(c.diagnostics.level_error <= 1e-9 * std::max(1.0, std::fabs(t)));
      const Point z0 = c.points.front();
      const Point z1 = flow_map(cs.F, z0, 0.37 * c.period);
      const Point z2 = flow_map(cs.F, z1, -0.37 * c.period);
      CHECK(std::hypot(z2[0] - z0[0], z2[1] - z0[1]) < 1e-8);
      const Point z3 = flow_map(cs.F, z0, c.flow_sign * c.period);
      CHECK(std::hypot(z3[0] - z0[0], z3[1] - z0[1]) < 1e-8);
    }
  }
}

TEST_CASE("holonomy of records with a first integral is the identity") {
  const auto G = cubic();
  const auto sg = section(G, {1.5, 0.0}, 3.0);
  for (int k = 1; k <= 10; ++k) {
    const double t = -2.0 + 4.0 * k / 11.0;
    const auto seed = trace_cycle(G, sg, t);
    const auto h = holonomy(G, sg, seed, t);
    CHECK(std::fabs(h.t_out - t) <= 1e-8 * std::max(1.0, std::fabs(t)));
  }
  const auto T = triangle();
  const auto st = section(T, {0.45, 1.0 / 3.0}, 0.5);
  for (int k = 1; k <= 10; ++k) {
    const double t = k / 300.0;
    const auto seed = trace_cycle(T, st, t);
    const auto h = holonomy(T, st, seed, t);
    CHECK(std::fabs(h.t_out - t) <= 1e-8 * std::fabs(t));
  }
}

TEST_CASE("holonomy of the rotated circle field matches the linear solution") {
  const auto F = circle();
  const auto sig = section(F, {1.0, 0.0});
  const auto seed = trace_cycle(F, sig, 0.5);
  for (double eps : {1e-3, 1e-4}) {
    // omega + eps (x dy - y dx): P = y + eps x, Q = -x + eps y.
    const auto Fe = make_record(F.omega + DifferentialForm::from_dx_dy(Poly::constant(2, -eps) * P2("y"),
                                                                      Poly::constant(2, eps) * P2("x")));
    const auto h = holonomy(Fe, sig, seed, 0.5);
    // Counterclockwise flow of (y + eps x, -x + eps y) reversed: r^2 decays as exp(-2 eps tau).
    CHECK(h.t_out == doctest::Approx(0.5 * std::exp(-4 * kPi * eps)).epsilon(1e-8));
    const double first_order = (h.t_out - 0.5) / eps;
    CHECK(std::fabs(first_order - (-4 * kPi * 0.5)) <= 0.05 * 4 * kPi * 0.5);
  }
}

TEST_CASE("exact deformations keep the identity holonomy") {
  const auto F = circle();
  const auto sig = section(F, {1.0, 0.0});
  const auto seed = trace_cycle(F, sig, 0.5);
  const Poly g = P2("x^3 - 2*x*y + y^2*x");
  const auto Fe = make_record(F.omega + Rational(1, 1000) * DifferentialForm::exact(g));
  const auto h = holonomy(Fe, sig, seed, 0.5);
  CHECK(std::fabs(h.t_out - 0.5) <= 1e-7 * 0.5);
}

TEST_CASE("large deformations leave the tube") {
  const auto F = circle();
  const auto sig = section(F, {1.0, 0.0});
  const auto seed = trace_cycle(F, sig, 0.5);
  const auto Fe = make_record(F.omega + DifferentialForm::from_dx_dy(Poly::constant(2, Rational(-1, 5)) * P2("y"),
                                                                    Poly::constant(2, Rational(1, 5)) * P2("x")));
  try {
    holonomy(Fe, sig, seed, 0.5);
    FAIL("expected a flow error");
  } catch (const FlowError& e) {
    CHECK(e.kind() == FlowError::Kind::LeftTube);
  }
}

TEST_CASE("numeric center test") {
  const auto C = circle();
  auto pts = find_singularities(C);
  REQUIRE(pts.size() == 1);
  auto v = numeric_center_test(C, pts[0]);
  CHECK(v.consistent_with_center);
  CHECK(v.t.size() == 6);

  // Focus X = (y + x/10, -x + y/10).
  const auto focus = from_vector_field(P2("y + 1/10*x"), P2("-x + 1/10*y"));
  pts = find_singularities(focus);
  REQUIRE(pts.size() == 1);
  v = numeric_center_test(focus, pts[0], 4);
  CHECK_FALSE(v.consistent_with_center);
  REQUIRE(v.violation);
  CHECK(*v.violation == 0);
  for (std::size_t k = 0; k < v.t.size(); ++k)
    CHECK(v.h[k] / v.t[k] == doctest::Approx(std::exp(0.2 * kPi)).epsilon(1e-8));

  const auto T = triangle();
  for (const auto& p : find_singularities(T)) {
    if (p.classification != SingularClass::CenterCandidate) continue;
    if (std::abs(p.location[0] - 1.0 / 3.0) > 1e-9) continue;
    const auto w = numeric_center_test(T, p);
    CHECK(w.consistent_with_center);
  }

  const auto cplx = hamiltonian(P2("x^2 + y^2 + 1"));
  SingularPoint q;
  q.location = {Complex(0, 1), Complex(0)};
  CHECK_THROWS_AS(numeric_center_test(cplx, q), InputError);
}
