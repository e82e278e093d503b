#pragma once

#include "foliation/rational.hpp"
#include "foliation/upoly.hpp"

#include <span>
#include <vector>

namespace fol {

// All complex roots of a polynomial with complex coefficients (index k
// multiplies x^k), via companion-matrix eigenvalues followed by Newton
// polishing against the original coefficients.  Sorted by (Re, Im).
std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs);

// Distinct roots of an exact polynomial: the squarefree part is taken
// exactly before the numeric stage.
std::vector<Complex> distinct_roots(const UPoly& p);

Complex horner(std::span<const Complex> coeffs, Complex x);

bool lex_less(Complex a, Complex b);

} // namespace fol
