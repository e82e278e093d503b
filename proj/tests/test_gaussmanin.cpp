#include "doctest.h"

#include "foliation/errors.hpp"
#include "foliation/gaussmanin.hpp"
#include "foliation/monodromy.hpp"
#include "foliation/parser.hpp"
#include "foliation/roots.hpp"
#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace fol;

namespace {

constexpr double kPi = std::numbers::pi;

Poly P2(const char* s) { return parse_poly(s, std::vector<std::string>{"x", "y"}); }

DifferentialForm dxdy(const char* a, const char* b) { return DifferentialForm::from_dx_dy(P2(a), P2(b)); }

UPoly U(std::vector<long> c) {
  std::vector<Rational> q;
  for (long v : c) q.emplace_back(v);
  return UPoly(q);
}

Transversal section(const Poly& f, const Point& q, double reach) {
  return Transversal::gradient_section(PowerProduct::polynomial(f), q, reach);
}

// (2k - 1)!! / 2^k with sign (-1)^k: d^k/dt^k y^-1 = this * y^-(2k+1).
double derivative_factor(int k) {
  double c = 1;
  for (int j = 1; j <= k; ++j) c *= -(2.0 * j - 1) / 2.0;
  return c;
}

// oint x^i y^-(2k+1) dx over the cycle around branch points a, b.
Complex period(const UPoly& p, Complex t, int i, int k, Complex yref, std::size_t a = 0, std::size_t b = 1) {
  return contour_period(
             p, t, a, b, [&](Complex x, Complex y) { return std::pow(x, i) / std::pow(y, 2 * k + 1); }, yref)
      .value;
}

bool divides(const UPoly& d, const UPoly& n) { return (n % d).is_zero(); }

double min_distance(Complex t, const std::vector<Complex>& C) {
  double d = 1e300;
  for (auto c : C) d = std::min(d, std::abs(t - c));
  return d;
}

// Connection matrix against numeric periods of -x^i / (2 y^3).
double connection_residual(const ConnectionMatrix& G, Complex t) {
  const auto& p = G.p;
  const Complex yref = contour_period(p, t, 0, 1, [](Complex, Complex y) { return 1.0 / y; }).y_start;
  const std::size_t n = G.size();
  std::vector<Complex> I(n);
  for (std::size_t j = 0; j < n; ++j) I[j] = period(p, t, static_cast<int>(j), 0, yref);
  const auto M = G.eval(t);
  double worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex lhs = -0.5 * period(p, t, static_cast<int>(i), 1, yref);
    Complex rhs = 0;
    double scale = std::abs(lhs);
    for (std::size_t j = 0; j < n; ++j) {
      rhs += M[i][j] * I[j];
      scale += std::abs(M[i][j] * I[j]);
    }
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, scale));
  }
  return worst;
}

double scalar_residual(const ConnectionMatrix& G, const ScalarEquation& eq, Complex t) {
  const auto& p = G.p;
  const Complex yref = contour_period(p, t, 0, 1, [](Complex, Complex y) { return 1.0 / y; }).y_start;
  const int n = static_cast<int>(eq.coeffs.size());
  Complex res = derivative_factor(n) * period(p, t, 0, n, yref);
  double scale = std::abs(res);
  for (int k = 0; k < n; ++k) {
    const Complex term = eq.coeffs[k].eval(t) * derivative_factor(k) * period(p, t, 0, k, yref);
    res -= term;
    scale += std::abs(term);
  }
  return std::abs(res) / std::max(1.0, scale);
}

Complex brieskorn_period(int m, Complex t, const DifferentialForm& w) {
  return contour_period(UPoly::monomial(static_cast<unsigned>(m)), t, 0, 1, w).value;
}

} // namespace

TEST_CASE("Gelfand-Leray: circle and exact forms") {
  const Poly f = P2("1/2*x^2 + 1/2*y^2");
  const auto sig = section(f, {1, 0}, 2);
  const auto r = gelfand_leray_check(f, dxdy("0", "x"), {0.2, 0.5, 1.0}, sig);
  REQUIRE(r.derivative.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(r.derivative[i] == doctest::Approx(2 * kPi).epsilon(1e-6));
    CHECK(r.eta_period[i] == doctest::Approx(2 * kPi).epsilon(1e-8));
  }
  CHECK(r.max_error < 1e-5);
  CHECK(r.step > 0);

  const auto e = gelfand_leray_check(f, DifferentialForm::exact(P2("x^3*y - 2*x*y^2 + y")), {0.3, 0.8}, sig);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::fabs(e.derivative[i]) < 1e-6);
    CHECK(std::fabs(e.eta_period[i]) < 1e-12);
  }

  CHECK_THROWS_AS(gelfand_leray_check(f, dxdy("0", "x"), {5.0}, sig), InputError);
  CHECK_THROWS_AS(gelfand_leray_check(f, dxdy("0", "x"), {0.5}, Transversal::ray({0, 0}, {1, 0}, 2)), InputError);
}

TEST_CASE("Gelfand-Leray on nonsymmetric ovals") {
  struct Case {
    const char* f;
    Point q;
    double reach;
    std::vector<double> grid;
  };
  const std::vector<Case> cases{
      {"y^2 - x^3 + 3*x", {-1.5, 0}, 0.4, {-1.5, -0.5, 0.5}},
      {"1/2*x^2 + 2*y^2 + 1/4*x^4", {0.5, 0}, 1.0, {0.2, 0.6}},
      {"1/2*x^2 + 1/2*y^2 + 1/3*x^3 - x*y^2", {0.2, 0.1}, 0.2, {0.005, 0.02}},
  };
  for (const auto& c : cases) {
    const Poly f = P2(c.f);
    const auto sig = section(f, c.q, c.reach);
    for (const auto* w : {"x^2", "x*y", "y^3 + x"}) {
      const auto r = gelfand_leray_check(f, dxdy(w, "x^2*y"), c.grid, sig);
      const std::string where = std::string(c.f) + " with " + w;
      CAPTURE(where);
      CAPTURE(r.step);
      CHECK(r.max_error < 1e-5);
    }
  }
}

TEST_CASE("Picard-Fuchs for x^3 - 3x") {
  const UPoly p = U({0, -3, 0, 1});
  const auto G = picard_fuchs(p);
  REQUIRE(G.size() == 2);
  CHECK(G.basis[0] == "dx/y");
  for (const auto& row : G.entries)
    for (const auto& e : row) CHECK(divides(e.den(), G.discriminant));
  const auto at10 = G.eval(Complex(10));
  for (const auto& row : at10)
    for (auto v : row) CHECK(std::isfinite(std::abs(v)));

  const auto eq = scalar_equation(G);
  REQUIRE(eq.coeffs.size() == 2);
  for (Complex t : {Complex(0), Complex(1), Complex(0, 3)}) {
    CAPTURE(t);
    CHECK(scalar_residual(G, eq, t) < 1e-5);
    CHECK(connection_residual(G, t) < 1e-8);
  }

  CHECK_THROWS_AS(picard_fuchs(U({0, 0, 1})), InputError);
  CHECK_THROWS_AS(picard_fuchs(U({0, 0, -2, 0, 1})), InputError);
  CHECK_THROWS_AS(picard_fuchs(UPoly::monomial(3)), InputError);
  // Without the genericity check the matrix still exists.
  CHECK(gauss_manin_matrix(UPoly::monomial(3)).size() == 2);
}

TEST_CASE("Picard-Fuchs for higher degree") {
  const UPoly p5 = U({1, 2, 0, -5, 0, 1});
  const auto G5 = picard_fuchs(p5);
  CHECK(G5.size() == 4);
  CHECK(G5.basis[3] == "x^3 dx/y");
  for (const auto& row : G5.entries)
    for (const auto& e : row) CHECK(divides(e.den(), G5.discriminant));

  for (const auto& p : {p5, U({1, 0, -3, 1, 1}), U({-2, 3, 1, 0, -4, 0, 1})}) {
    const auto G = picard_fuchs(p);
    const auto C = build_model(p).critical_values;
    const auto eq = scalar_equation(G);
    int checked = 0;
    for (double re = -6; re <= 6; re += 2.5)
      for (double im = -3; im <= 3; im += 1.5) {
        const Complex t(re, im);
        if (min_distance(t, C) < 0.5) continue;
        CAPTURE(t);
        CHECK(connection_residual(G, t) < 1e-7);
        CHECK(scalar_residual(G, eq, t) < 1e-5);
        ++checked;
      }
    CHECK(checked > 10);
  }
}

TEST_CASE("Picard-Fuchs matches finite differences of periods") {
  const UPoly p = U({1, 0, -3, 1, 1});
  const auto G = picard_fuchs(p);
  for (Complex t : {Complex(0.3, 0.7), Complex(-4, 1), Complex(5, -2)}) {
    const Complex yref = contour_period(p, t, 0, 1, [](Complex, Complex y) { return 1.0 / y; }).y_start;
    const double h = 1e-4;
    const auto M = G.eval(t);
    for (std::size_t i = 0; i < G.size(); ++i) {
      const int ii = static_cast<int>(i);
      // The start branch follows y continuously in t for small h.
      const Complex fd = (period(p, t + h, ii, 0, yref) - period(p, t - h, ii, 0, yref)) / (2 * h);
      Complex rhs = 0;
      for (std::size_t j = 0; j < G.size(); ++j) rhs += M[i][j] * period(p, t, static_cast<int>(j), 0, yref);
      CHECK(std::abs(fd - rhs) < 1e-4 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST_CASE("contour periods agree with real ovals") {
  // f = y^2 - (x^3 - 3x): ovals around (-1, 0) for t in (-2, 2).
  const Poly f = P2("y^2 - x^3 + 3*x");
  const auto F = hamiltonian(f);
  const auto sig = section(f, {-1.5, 0}, 0.4);
  const UPoly p = U({0, -3, 0, 1});
  for (double t : {-1.5, 0.0, 1.0}) {
    const auto cyc = trace_cycle(F, sig, t);
    for (const auto& w : {dxdy("0", "x"), dxdy("x^2", "x*y"), dxdy("y", "1")}) {
      const double flow = cycle_integral(F, cyc, w);
      const Complex c = contour_period(p, Complex(t), 0, 1, w).value;
      CHECK(std::fabs(c.imag()) < 1e-9 * std::max(1.0, std::abs(c)));
      CHECK(std::fabs(std::fabs(c.real()) - std::fabs(flow)) < 1e-6 * std::max(1.0, std::fabs(flow)));
    }
  }
  CHECK_THROWS_AS(contour_period(p, Complex(2), 0, 1, dxdy("0", "x")), NumericError);
  CHECK_THROWS_AS(contour_period(p, Complex(0.5), 0, 3, dxdy("0", "x")), InputError);
}

TEST_CASE("Brieskorn reduction relations") {
  CHECK(brieskorn_family(P2("y^2 - x^5")) == 5);
  CHECK_THROWS_AS(brieskorn_family(P2("y^2 - x^3 + x")), InputError);
  CHECK_THROWS_AS(brieskorn_family(P2("y^2")), InputError);
  const auto B = brieskorn_basis(4);
  CHECK(B.forms.size() == 3);
  CHECK(B.labels[2] == "x^2*y dx");

  std::mt19937_64 rng(77);
  for (int m : {3, 4, 5}) {
    Poly f(2);
    f.add_term({0, 2}, 1);
    f.add_term({static_cast<std::uint32_t>(m), 0}, -1);
    const auto df = DifferentialForm::exact(f);
    for (int k = 0; k < 50; ++k) {
      const Poly g = testing::random_poly(rng, 2, 7);
      for (const auto& c : brieskorn_reduce(m, DifferentialForm::exact(g))) CHECK(c.is_zero());
      for (const auto& c : brieskorn_reduce(m, g * df)) CHECK(c.is_zero());
    }
    // Basis forms reduce to themselves.
    const auto basis = brieskorn_basis(m);
    for (int i = 0; i + 1 < m; ++i) {
      const auto r = brieskorn_reduce(m, basis.forms[i]);
      for (int j = 0; j + 1 < m; ++j) CHECK(r[j] == (i == j ? UPoly::constant(1) : UPoly()));
    }
  }
}

TEST_CASE("Brieskorn reduction is a C[t]-module map and preserves periods") {
  std::mt19937_64 rng(91);
  for (int m : {3, 4}) {
    Poly f(2);
    f.add_term({0, 2}, 1);
    f.add_term({static_cast<std::uint32_t>(m), 0}, -1);
    const UPoly t = UPoly::monomial(1);
    for (int k = 0; k < 50; ++k) {
      const auto w = testing::random_one_form(rng, 2, 5);
      const auto w2 = testing::random_one_form(rng, 2, 4);
      const auto r = brieskorn_reduce(m, w), r2 = brieskorn_reduce(m, w2);
      const auto rf = brieskorn_reduce(m, f * w), rs = brieskorn_reduce(m, w + w2);
      for (int i = 0; i + 1 < m; ++i) {
        CHECK(rf[i] == r[i] * t);
        CHECK(rs[i] == r[i] + r2[i]);
      }
    }
  }

  // Periods at fixed levels: oint omega = sum c_i(t) oint x^i y dx.
  const auto basis = brieskorn_basis(3);
  for (Complex t : {Complex(1), Complex(-0.5, 2), Complex(3, -1)}) {
    std::vector<Complex> bp;
    for (const auto& b : basis.forms) bp.push_back(brieskorn_period(3, t, b));
    for (const auto& w : {dxdy("x*y", "0"), dxdy("x^4*y", "x^2"), dxdy("y^3", "x^3*y^2"), dxdy("x^3*y + 2*x*y^3", "y")}) {
      const auto r = brieskorn_reduce(3, w);
      Complex rhs = 0;
      double scale = 0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        rhs += r[i].eval(t) * bp[i];
        scale += std::abs(r[i].eval(t) * bp[i]);
      }
      const Complex lhs = brieskorn_period(3, t, w);
      CHECK(std::abs(lhs - rhs) < 1e-6 * std::max({1.0, scale, std::abs(lhs)}));
    }
  }
}
