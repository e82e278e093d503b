#include "foliation/rational.hpp"

#include "foliation/errors.hpp"

#include <cctype>
#include <cmath>

namespace fol {

Rational parse_rational(std::string_view text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
  auto digits = [&](std::string& out) {
    const std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) out += text[i++];
    if (i == start) throw ParseError("expected digits in rational", i);
  };
  std::string num, den = "1";
  digits(num);
  if (i < text.size() && text[i] == '/') {
    ++i;
    den.clear();
    digits(den);
  }
  if (i != text.size()) throw ParseError("trailing characters in rational", i);
  Integer d(den);
  if (d == 0) throw ParseError("zero denominator", text.size());
  Rational q(Integer(num), d);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

Rational rationalize(double value, long max_den) {
  if (!std::isfinite(value)) throw InputError("cannot rationalize a non-finite value");
  // Continued-fraction convergents p/q of |value|.
  const double x = std::fabs(value);
  double r = x;
  long double p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    const long double p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (std::fabs(static_cast<double>(p1 / q1) - x) <= 1e-12 * std::max(1.0, x)) {
      Rational q(Integer(static_cast<double>(p1)), Integer(static_cast<double>(q1)));
      q.canonicalize();
      return value < 0 ? Rational(-q) : q;
    }
    const double frac = r - a;
    if (frac == 0) break;
    r = 1.0 / frac;
  }
  return Rational(value);
}

} // namespace fol
