#pragma once

#include "foliation/poly.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace fol {

using FormIndex = std::vector<std::size_t>;

// Polynomial differential k-form in n variables.
//
// Coefficients are stored against the basis dx_I, I a strictly increasing
// index set of size k, enumerated in lexicographic order.  In the plane the
// 1-form w = P dy - Q dx stores -Q on dx and P on dy.
class DifferentialForm {
public:
  DifferentialForm(std::size_t nvars, unsigned degree);
  DifferentialForm(std::size_t nvars, unsigned degree, std::vector<Poly> coeffs);

  // P dy - Q dx.
  static DifferentialForm plane(const Poly& P, const Poly& Q);
  // A dx + B dy.
  static DifferentialForm from_dx_dy(const Poly& A, const Poly& B);
  // The exact 1-form dg.
  static DifferentialForm exact(const Poly& g);
  // The 0-form g.
  static DifferentialForm function(const Poly& g);
  // The basis 1-form dx_i.
  static DifferentialForm dx(std::size_t nvars, std::size_t i);

  std::size_t nvars() const noexcept { return nvars_; }
  unsigned degree() const noexcept { return degree_; }
  const std::vector<FormIndex>& basis() const noexcept { return *basis_; }
  const std::vector<Poly>& coefficients() const noexcept { return coeffs_; }
  const Poly& coefficient(std::size_t k) const { return coeffs_.at(k); }
  // Coefficient of dx_I for an increasing index set I.
  const Poly& coefficient(const FormIndex& idx) const;
  bool is_zero() const;

  // Plane views of a 1-form in two variables.
  Poly P() const;
  Poly Q() const;

  DifferentialForm operator-() const;
  DifferentialForm& operator+=(const DifferentialForm& o);
  DifferentialForm& operator-=(const DifferentialForm& o);
  friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
  friend DifferentialForm operator-(DifferentialForm a, const DifferentialForm& b) { return a -= b; }
  friend DifferentialForm operator*(const Poly& g, const DifferentialForm& w);
  friend DifferentialForm operator*(const Rational& c, const DifferentialForm& w);
  friend bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
    return a.nvars_ == b.nvars_ && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

  // Coefficientwise substitution of variables (no chain rule); see pullback.
  DifferentialForm map_coefficients(std::span<const Poly> images) const;

private:
  void check_compatible(const DifferentialForm& o) const;

  std::size_t nvars_;
  unsigned degree_;
  const std::vector<FormIndex>* basis_;
  std::vector<Poly> coeffs_;
};

// Shared basis table for k-forms in n variables.
const std::vector<FormIndex>& form_basis(std::size_t nvars, unsigned degree);

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm exterior_d(const DifferentialForm& a);

// Pullback of a 1-form in n variables by a polynomial map whose components
// are polynomials in m variables: sum_i (A_i o F) dF_i.
DifferentialForm pullback_form(std::span<const Poly> map, const DifferentialForm& w);

} // namespace fol
