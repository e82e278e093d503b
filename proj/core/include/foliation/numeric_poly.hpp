#pragma once

#include "foliation/poly.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace fol {

// Double-precision snapshot of a Poly for hot evaluation loops.
class NumericPoly {
public:
  NumericPoly() = default;
  explicit NumericPoly(const Poly& p);

  std::size_t nvars() const noexcept { return nvars_; }
  bool is_zero() const noexcept { return coef_.empty(); }

  // Plane evaluation; requires nvars() == 2.
  double operator()(double x, double y) const { return eval2<double>(x, y); }
  Complex operator()(Complex x, Complex y) const { return eval2<Complex>(x, y); }
  double eval(std::span<const double> z) const;

  // Sum of |c| |x|^a |y|^b, a rounding-error scale for the value.
  double magnitude(double x, double y) const;
  double magnitude(Complex x, Complex y) const;

private:
  template <class T>
  T eval2(T x, T y) const;

  std::size_t nvars_ = 0;
  unsigned maxdeg_ = 0;
  std::vector<double> coef_;
  std::vector<std::uint16_t> exps_;
};

// Value and gradient of a plane polynomial bundled together.
struct PlaneFunction {
  NumericPoly value, dx, dy;
  PlaneFunction() = default;
  explicit PlaneFunction(const Poly& p)
      : value(p), dx(p.diff(0)), dy(p.diff(1)) {}
};

} // namespace fol
