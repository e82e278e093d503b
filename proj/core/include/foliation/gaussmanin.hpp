#pragma once

#include "foliation/form.hpp"
#include "foliation/melnikov.hpp"
#include "foliation/upoly.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace fol {

struct GelfandLerayReport {
  std::vector<double> t;
  // Extrapolated centered difference of oint omega and oint eta, per level.
  std::vector<double> derivative;
  std::vector<double> eta_period;
  // max |derivative - eta_period| / max(1, |eta_period|).
  double max_error = 0;
  double step = 0;
};

// d/dt oint_{delta_t} omega = oint_{delta_t} eta with d omega = df ^ eta.
// For d omega = g dx^dy, eta = -(g / f_y) dx, or (g / f_x) dy where
// |f_x| > |f_y|.  Cycles are the real ovals of f through `section`.
GelfandLerayReport gelfand_leray_check(const Poly& f, const DifferentialForm& omega, const std::vector<double>& grid,
                                       const Transversal& section, const MelnikovOptions& opt = {});

// Fibers y^2 = p(x) + t of f = y^2 - p(x).
struct ConnectionMatrix {
  UPoly p;
  std::vector<std::string> basis;
  // d/dt I_i = sum_j entries[i][j] I_j for I_i = oint x^i dx / y.
  std::vector<std::vector<RatFunc>> entries;
  UPoly discriminant;

  std::size_t size() const { return entries.size(); }
  std::vector<std::vector<Complex>> eval(Complex t) const;
};

// Throws InputError for deg p < 3 or repeated critical values.
ConnectionMatrix picard_fuchs(const UPoly& p);
// The same computation without the genericity requirement (p squarefree
// over Q(t) is enough).
ConnectionMatrix gauss_manin_matrix(const UPoly& p);

// I^(n) = sum_k coeffs[k] I^(k) of least order n = coeffs.size() <= size()
// for I = the given component, from the derivatives of e_component.
struct ScalarEquation {
  std::vector<RatFunc> coeffs;
};
ScalarEquation scalar_equation(const ConnectionMatrix& G, std::size_t component = 0);

// Period over a closed contour on y^2 = p(x) + t: a confocal ellipse around
// the branch points a and b (indices into the (Re, Im)-sorted roots), with y
// continued along it.  integrand(x, y) multiplies dx.
struct ContourPeriod {
  Complex value;
  std::size_t nodes = 0;
  // y at the start of the contour; pass it back to follow the same cycle.
  Complex y_start;
  std::vector<Complex> roots;
};

std::vector<Complex> fiber_roots(const UPoly& p, Complex t);

ContourPeriod contour_period(const UPoly& p, Complex t, std::size_t a, std::size_t b,
                             const std::function<Complex(Complex, Complex)>& integrand, Complex y_reference = 0,
                             double tol = 1e-13);

// oint of a polynomial 1-form A dx + B dy, with dy = p'(x) dx / (2y).
ContourPeriod contour_period(const UPoly& p, Complex t, std::size_t a, std::size_t b, const DifferentialForm& omega,
                             Complex y_reference = 0, double tol = 1e-13);

// Brieskorn module of f = y^2 - x^m with basis x^i y dx, i = 0..m-2.
struct BrieskornBasis {
  int m = 0;
  std::vector<std::string> labels;
  std::vector<DifferentialForm> forms;
};
BrieskornBasis brieskorn_basis(int m);

// Coefficients c_i(t) with omega = sum c_i(f) x^i y dx mod d(Omega^0) + Omega^0 df.
std::vector<UPoly> brieskorn_reduce(int m, const DifferentialForm& omega);
// Recognizes f = y^2 - x^m (m >= 2); throws InputError otherwise.
int brieskorn_family(const Poly& f);

} // namespace fol
