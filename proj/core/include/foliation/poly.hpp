#pragma once

#include "foliation/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace fol {

using Exponent = std::vector<std::uint32_t>;

unsigned total_degree(const Exponent& e);

// Graded-lexicographic order, largest first: higher total degree wins,
// ties broken lexicographically with the first variable most significant.
struct GrlexDescending {
  bool operator()(const Exponent& a, const Exponent& b) const;
};

// Multivariate polynomial over Q in a fixed number of variables.
//
// Terms live in a sorted map keyed by dense exponent vectors; zero
// coefficients are never stored.  The zero polynomial has degree -1.
class Poly {
public:
  using TermMap = std::map<Exponent, Rational, GrlexDescending>;

  explicit Poly(std::size_t nvars = 0) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, const Rational& c);
  static Poly variable(std::size_t nvars, std::size_t index);
  static Poly monomial(const Exponent& e, const Rational& c);

  std::size_t nvars() const noexcept { return nvars_; }
  const TermMap& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;

  int degree() const;
  int degree_in(std::size_t var) const;
  Rational coeff(const Exponent& e) const;
  Rational constant_term() const;
  // Leading term in graded-lex order; requires a nonzero polynomial.
  const std::pair<const Exponent, Rational>& leading() const;

  // Adds c * x^e in place.
  void add_term(const Exponent& e, const Rational& c);

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o);
  Poly& operator*=(const Rational& c);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
  friend Poly operator*(const Rational& c, Poly a) { return a *= c; }
  friend bool operator==(const Poly& a, const Poly& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Poly pow(unsigned k) const;
  Poly diff(std::size_t var) const;

  // Exact quotient; throws InputError when `d` does not divide *this.
  Poly divide_exact(const Poly& d) const;

  Rational eval(std::span<const Rational> point) const;
  Complex eval(std::span<const Complex> point) const;
  double eval(std::span<const double> point) const;

  // Composition: replaces variable i by images[i].  All images share one
  // variable count, which becomes the result's.
  Poly substitute(std::span<const Poly> images) const;

  // Coefficients of powers of `var`; entry k is the coefficient of var^k
  // as a polynomial in the same variable set (with var absent).
  std::vector<Poly> coefficients_in(std::size_t var) const;
  static Poly from_coefficients_in(std::size_t var,
                                   std::span<const Poly> coeffs);

  // Same polynomial viewed in a larger ring (new variables appended).
  Poly extend(std::size_t new_nvars) const;

  std::string to_string(std::span<const std::string> names) const;

private:
  void check_same_ring(const Poly& o) const;

  std::size_t nvars_;
  TermMap terms_;
};

// Default variable names: x, y for the plane, x1..xn otherwise.
std::vector<std::string> default_names(std::size_t nvars);

} // namespace fol
