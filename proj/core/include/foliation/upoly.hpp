#pragma once

#include "foliation/poly.hpp"
#include "foliation/rational.hpp"

#include <string>
#include <vector>

namespace fol {

// Dense univariate polynomial over Q; coefficient k multiplies t^k.
// Trailing zero coefficients are trimmed, so the zero polynomial is empty.
class UPoly {
public:
  UPoly() = default;
  explicit UPoly(std::vector<Rational> coeffs);
  static UPoly constant(const Rational& c);
  static UPoly monomial(unsigned k, const Rational& c = 1);
  // Reads a polynomial that only involves variable `var` of `p`.
  static UPoly from_poly(const Poly& p, std::size_t var);
  Poly to_poly(std::size_t nvars, std::size_t var) const;

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational operator[](std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  UPoly operator-() const;
  UPoly& operator+=(const UPoly& o);
  UPoly& operator-=(const UPoly& o);
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(UPoly a, const Rational& c);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  UPoly derivative() const;
  UPoly monic() const;
  // Euclidean division: *this = q * d + r with deg r < deg d.
  void divmod(const UPoly& d, UPoly& q, UPoly& r) const;
  UPoly operator/(const UPoly& d) const;
  UPoly operator%(const UPoly& d) const;

  Rational eval(const Rational& t) const;
  Complex eval(Complex t) const;
  std::vector<Complex> complex_coeffs() const;

  std::string to_string(const std::string& var = "t") const;

private:
  void trim();
  std::vector<Rational> c_;
};

// Monic gcd (zero when both arguments are zero).
UPoly gcd(UPoly a, UPoly b);
UPoly squarefree_part(const UPoly& p);
bool is_squarefree(const UPoly& p);

// Element of Q(t), kept reduced with a monic denominator.
class RatFunc {
public:
  RatFunc() : num_(), den_(UPoly::constant(1)) {}
  RatFunc(const Rational& c) : num_(UPoly::constant(c)), den_(UPoly::constant(1)) {}  // NOLINT
  RatFunc(UPoly num) : num_(std::move(num)), den_(UPoly::constant(1)) {}               // NOLINT
  RatFunc(UPoly num, UPoly den);

  const UPoly& num() const { return num_; }
  const UPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RatFunc operator-() const { return RatFunc(-num_, den_); }
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RatFunc derivative() const;
  Complex eval(Complex t) const;
  // "num/den" with both parts in parentheses unless trivial.
  std::string to_string(const std::string& var = "t") const;

private:
  void normalize();
  UPoly num_, den_;
};

} // namespace fol
