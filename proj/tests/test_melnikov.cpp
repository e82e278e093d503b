#include "doctest.h"

#include "foliation/melnikov.hpp"
#include "foliation/parser.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace fol;

namespace {

constexpr double kPi = std::numbers::pi;

Poly P2(const char* s) { return parse_poly(s, std::vector<std::string>{"x", "y"}); }

DifferentialForm dxdy(const char* a, const char* b) { return DifferentialForm::from_dx_dy(P2(a), P2(b)); }

struct System {
  const char* name;
  FoliationRecord F;
  Point center;
  Point q;
  std::vector<double> levels;
};

FoliationRecord triangle() {
  return logarithmic({{P2("x"), P2("y"), P2("1 - x - y")}, {Rational(1), Rational(1), Rational(1)}});
}

std::vector<System> systems() {
  std::vector<System> s;
  s.push_back({"circle", hamiltonian(P2("1/2*x^2 + 1/2*y^2")), {0, 0}, {1, 0}, {0.05, 0.5, 1.5}});
  s.push_back({"quartic", hamiltonian(P2("1/2*x^2 + 2*y^2 + 1/4*x^4")), {0, 0}, {0.5, 0}, {0.1, 1.0}});
  s.push_back({"cubic", hamiltonian(P2("y^2 + x^3 - 3*x")), {1, 0}, {1.5, 0}, {-1.8, -1.0, 0.5}});
  s.push_back({"triangle", triangle(), {1.0 / 3, 1.0 / 3}, {0.45, 1.0 / 3}, {0.01, 0.025, 0.035}});
  s.push_back({"asym", hamiltonian(P2("1/2*x^2 + 1/2*y^2 + 1/3*x^3 - x*y^2")), {0, 0}, {0.2, 0.1}, {0.005, 0.02}});
  return s;
}

MelnikovProblem problem(const FoliationRecord& F, const Point& q, const DifferentialForm& w, double reach = 3.0) {
  return make_melnikov_problem(F, w, Transversal::gradient_section(*F.first_integral, q, reach));
}

// -double integral of (B_x - A_y) over the interior of the level curve f = t
// around c, in polar coordinates about c.  Independent of the flow code.
double green_oracle(const FoliationRecord& F, const Point& c, double t, const DifferentialForm& w) {
  const auto& f = *F.first_integral;
  const Poly curl = w.coefficient(1).diff(0) - w.coefficient(0).diff(1);
  const NumericPoly g(curl);
  const double fc = f.value(c[0], c[1]);
  const int nth = 512;
  // Gauss-Legendre 32 on [0, 1].
  static std::vector<double> xs, ws;
  if (xs.empty()) {
    const int n = 32;
    for (int i = 1; i <= n; ++i) {
      double x = std::cos(kPi * (i - 0.25) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::fabs(dx) < 1e-16) {
          xs.push_back(0.5 * (x + 1));
          ws.push_back(1.0 / ((1 - x * x) * dp * dp));
          break;
        }
      }
    }
  }
  double total = 0;
  for (int k = 0; k < nth; ++k) {
    const double th = 2 * kPi * k / nth;
    const double ct = std::cos(th), st = std::sin(th);
    // Radius where f first reaches t along the ray.
    auto fr = [&](double r) { return (f.value(c[0] + r * ct, c[1] + r * st) - t) * (t - fc > 0 ? 1 : -1); };
    double lo = 0, hi = 1e-3;
    while (fr(hi) < 0) {
      lo = hi;
      hi *= 1.5;
    }
    for (int it = 0; it < 200; ++it) {
      const double m = 0.5 * (lo + hi);
      if (fr(m) < 0) lo = m;
      else hi = m;
    }
    const double R = 0.5 * (lo + hi);
    double radial = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = R * xs[i];
      radial += ws[i] * g(c[0] + r * ct, c[1] + r * st) * r;
    }
    total += radial * R;
  }
  return -total * 2 * kPi / nth;
}

} // namespace

TEST_CASE("M1 examples on the circle system") {
  const auto F = hamiltonian(P2("1/2*x^2 + 1/2*y^2"));
  const auto rot = problem(F, {1, 0}, dxdy("-y", "x"));
  CHECK(m1(rot, 0.5).value == doctest::Approx(-2 * kPi).epsilon(1e-9));
  for (double t : {0.1, 0.3, 0.7, 1.1}) CHECK(m1(rot, t).value == doctest::Approx(-4 * kPi * t).epsilon(1e-9));

  const auto ex = problem(F, {1, 0}, DifferentialForm::exact(P2("x^3*y - 2*y^2 + x")));
  CHECK(std::fabs(m1(ex, 0.5).value) < 1e-9);

  // x^2 dy: r^3 oint cos^3 = 0 at every level.
  const auto sym = problem(F, {1, 0}, dxdy("0", "x^2"));
  for (double t : {0.1, 0.5, 2.0}) {
    const double r = std::sqrt(2 * t);
    double brute = 0;
    const int n = 4096;
    for (int k = 0; k < n; ++k) {
      const double th = 2 * kPi * k / n;
      brute += std::pow(r * std::cos(th), 2) * r * std::cos(th);
    }
    brute *= 2 * kPi / n;
    CHECK(std::fabs(m1(sym, t).value - (-brute)) < 1e-9);
  }

  // (x^2 + y^2)(x dy - y dx): oint = 2 pi r^4 = 8 pi t^2.
  const auto quad = problem(F, {1, 0}, dxdy("-x^2*y - y^3", "x^3 + x*y^2"));
  CHECK(m1(quad, 0.5).value == doctest::Approx(-8 * kPi * 0.25).epsilon(1e-9));
}

TEST_CASE("problem validation") {
  const auto F = hamiltonian(P2("1/2*x^2 + 1/2*y^2"));
  const auto sig = Transversal::gradient_section(*F.first_integral, {1, 0}, 2);
  auto bad = F;
  bad.integrating_factor = PowerProduct::polynomial(P2("1 + x^2"));
  CHECK_THROWS_AS(make_melnikov_problem(bad, dxdy("x", "y"), sig), InputError);
  auto none = from_vector_field(F.P, F.Q);
  CHECK_THROWS_AS(make_melnikov_problem(none, dxdy("x", "y"), sig), InputError);
  CHECK_THROWS_AS(make_melnikov_problem(F, DifferentialForm(3, 1), sig), InputError);
  CHECK(make_melnikov_problem(F, dxdy("x", "y"), sig).t_center == doctest::Approx(0.0));
  const auto T = triangle();
  const auto pt = make_melnikov_problem(T, dxdy("x", "y"), Transversal::gradient_section(*T.first_integral, {0.45, 1.0 / 3}, 0.5));
  CHECK(pt.t_center == doctest::Approx(1.0 / 27).epsilon(1e-12));
}

TEST_CASE("sweeps, multiplicity and tangency") {
  const auto F = hamiltonian(P2("1/2*x^2 + 1/2*y^2"));
  std::vector<double> grid;
  for (int k = 0; k < 12; ++k) grid.push_back(0.01 * std::pow(10.0, k / 6.0));
  auto s = m1_sweep(problem(F, {1, 0}, dxdy("-y", "x")), grid);
  REQUIRE(s.multiplicity);
  CHECK(*s.multiplicity == 1);
  CHECK(s.fit_residual < 1e-6);
  CHECK_FALSE(s.identically_zero);

  s = m1_sweep(problem(F, {1, 0}, dxdy("-x^2*y - y^3", "x^3 + x*y^2")), grid);
  REQUIRE(s.multiplicity);
  CHECK(*s.multiplicity == 2);
  CHECK(s.slope == doctest::Approx(2.0).epsilon(1e-6));

  s = m1_sweep(problem(F, {1, 0}, DifferentialForm::exact(P2("x^2*y + 3*y"))), grid);
  CHECK(s.identically_zero);

  auto v = tangency_test(problem(F, {1, 0}, DifferentialForm::exact(P2("x*y^2 - x"))), grid);
  CHECK(v.compatible);
  v = tangency_test(problem(F, {1, 0}, dxdy("-y", "x")), grid);
  CHECK_FALSE(v.compatible);
  CHECK(v.max_abs > v.threshold);

  // Logarithmic (1,1,1): derivative of the family in lambda_1 is f2 f3 df1.
  const auto T = triangle();
  const Poly f1 = P2("x"), f2 = P2("y"), f3 = P2("1 - x - y");
  const auto w1 = (f2 * f3) * DifferentialForm::exact(f1);
  std::vector<double> tg = {0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.035};
  v = tangency_test(problem(T, {0.45, 1.0 / 3}, w1, 0.5), tg);
  CHECK(v.compatible);
  CHECK_THROWS_AS(m1_sweep(problem(F, {1, 0}, dxdy("-y", "x")), {0.1, 0.2, 0.3}), NumericError);
  CHECK_THROWS_AS(m1_sweep(problem(F, {1, 0}, dxdy("-y", "x")), {0.1, 0.3, 0.2, 0.4}), InputError);
}

TEST_CASE("linearity and exactness kernel") {
  std::mt19937_64 rng(17);
  const auto F = hamiltonian(P2("y^2 + x^3 - 3*x"));
  const auto sig = Transversal::gradient_section(*F.first_integral, {1.5, 0}, 3);
  for (int k = 0; k < 5; ++k) {
    const auto a = testing::random_one_form(rng, 2, 3), b = testing::random_one_form(rng, 2, 3);
    const Rational c = testing::random_rational(rng);
    const double t = -1.5 + 0.6 * k;
    const double ma = m1(make_melnikov_problem(F, a, sig), t).value;
    const double mb = m1(make_melnikov_problem(F, b, sig), t).value;
    const double mab = m1(make_melnikov_problem(F, a + c * b, sig), t).value;
    const double expect = ma + to_double(c) * mb;
    CHECK(std::fabs(mab - expect) <= 1e-9 * std::max({1.0, std::fabs(ma), std::fabs(mb)}));
  }
  for (int k = 0; k < 20; ++k) {
    const Poly g = testing::random_poly(rng, 2, 4);
    const auto p = make_melnikov_problem(F, DifferentialForm::exact(g), sig);
    for (double t : {-1.5, 0.0, 1.5}) {
      const auto v = m1(p, t);
      CHECK(std::fabs(v.value) < 1e-8 * v.cycle_length);
    }
  }
}

TEST_CASE("Green's theorem oracle") {
  std::mt19937_64 rng(29);
  for (const auto& sys : systems()) {
    for (int k = 0; k < 2; ++k) {
      // x dy keeps a constant term in the curl so no level integrates to 0.
      const auto w = testing::random_one_form(rng, 2, 2) + dxdy("0", "x");
      const auto p = problem(sys.F, sys.q, w, 1.5);
      for (double t : sys.levels) {
        const double got = m1(p, t).value;
        const double want = green_oracle(sys.F, sys.center, t, w);
        CAPTURE(sys.name);
        CAPTURE(t);
        CHECK(std::fabs(got - want) <= 1e-6 * std::max(std::fabs(want), 1e-12));
      }
    }
  }
}

TEST_CASE("first-order holonomy consistency") {
  const auto F = hamiltonian(P2("1/2*x^2 + 1/2*y^2"));
  const auto C = hamiltonian(P2("y^2 + x^3 - 3*x"));
  struct Case {
    FoliationRecord F;
    Point q;
    DifferentialForm w;
    double t;
  };
  const std::vector<Case> cases = {{F, {1, 0}, dxdy("-y", "x"), 0.5},
                                   {F, {1, 0}, dxdy("-x^2*y - y^3", "x^3 + x*y^2"), 0.5},
                                   {F, {1, 0}, dxdy("0", "x^3"), 0.5},
                                   {C, {1.5, 0}, dxdy("x*y", "x^3"), -1.0}};
  for (const auto& c : cases) {
    const auto p = problem(c.F, c.q, c.w);
    const double M = m1(p, c.t).value;
    REQUIRE(std::fabs(M) > 1e-6);
    const auto seed = trace_cycle(c.F, p.section, c.t);
    for (double eps : {1e-3, 1e-4}) {
      const auto Fe = make_record(c.F.omega + rationalize(eps) * c.w);
      const auto h = holonomy(Fe, p.section, seed, c.t);
      const double ratio = (h.t_out - c.t) / eps;
      if (eps == 1e-4) CHECK(std::fabs(ratio - M) <= 0.05 * std::fabs(M));
      CHECK(ratio * M > 0);
    }
  }
}
