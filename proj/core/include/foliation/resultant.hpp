#pragma once

#include "foliation/poly.hpp"

#include <vector>

namespace fol {

// Sylvester resultant of a and b with respect to variable `var`.  The
// result lives in the same ring with `var` absent.  Computed exactly with
// fraction-free (Bareiss) elimination over the coefficient ring.
Poly resultant(const Poly& a, const Poly& b, std::size_t var);

// Determinant of a square matrix of polynomials (Bareiss, exact).
Poly determinant(std::vector<std::vector<Poly>> m);

// True when a and b share a nonconstant factor: some resultant in a
// variable with positive degree vanishes identically.
bool have_common_factor(const Poly& a, const Poly& b);

} // namespace fol
