#include "foliation/upoly.hpp"

#include "foliation/errors.hpp"

#include <algorithm>

namespace fol {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::constant(const Rational& c) { return UPoly(std::vector<Rational>{c}); }

UPoly UPoly::monomial(unsigned k, const Rational& c) {
  std::vector<Rational> v(k + 1, Rational(0));
  v[k] = c;
  return UPoly(std::move(v));
}

UPoly UPoly::from_poly(const Poly& p, std::size_t var) {
  std::vector<Rational> v(static_cast<std::size_t>(std::max(p.degree_in(var), 0)) + 1, Rational(0));
  for (const auto& [e, c] : p.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != var && e[i] != 0) throw InputError("polynomial is not univariate");
    v[e[var]] += c;
  }
  return UPoly(std::move(v));
}

Poly UPoly::to_poly(std::size_t nvars, std::size_t var) const {
  Poly p(nvars);
  for (std::size_t k = 0; k < c_.size(); ++k) {
    Exponent e(nvars, 0);
    e[var] = static_cast<std::uint32_t>(k);
    p.add_term(e, c_[k]);
  }
  return p;
}

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

UPoly UPoly::operator-() const {
  UPoly r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

UPoly& UPoly::operator+=(const UPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return UPoly();
  std::vector<Rational> v(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(v));
}

UPoly operator*(UPoly a, const Rational& c) {
  for (auto& x : a.c_) x *= c;
  a.trim();
  return a;
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return UPoly();
  std::vector<Rational> v(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) v[k - 1] = c_[k] * static_cast<unsigned long>(k);
  return UPoly(std::move(v));
}

UPoly UPoly::monic() const {
  if (is_zero()) return *this;
  return *this * Rational(1 / leading());
}

void UPoly::divmod(const UPoly& d, UPoly& q, UPoly& r) const {
  if (d.is_zero()) throw InputError("division by the zero polynomial");
  r = *this;
  std::vector<Rational> qv(std::max(0, degree() - d.degree() + 1), Rational(0));
  const Rational lc = d.leading();
  while (!r.is_zero() && r.degree() >= d.degree()) {
    const int shift = r.degree() - d.degree();
    const Rational c = r.leading() / lc;
    qv[shift] = c;
    for (int k = 0; k <= d.degree(); ++k) r.c_[k + shift] -= c * d.c_[k];
    r.trim();
  }
  q = UPoly(std::move(qv));
}

UPoly UPoly::operator/(const UPoly& d) const {
  UPoly q, r;
  divmod(d, q, r);
  return q;
}

UPoly UPoly::operator%(const UPoly& d) const {
  UPoly q, r;
  divmod(d, q, r);
  return r;
}

Rational UPoly::eval(const Rational& t) const {
  Rational s = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * t + *it;
  return s;
}

Complex UPoly::eval(Complex t) const {
  Complex s = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * t + it->get_d();
  return s;
}

std::vector<Complex> UPoly::complex_coeffs() const {
  std::vector<Complex> v;
  v.reserve(c_.size());
  for (const auto& c : c_) v.emplace_back(c.get_d(), 0.0);
  return v;
}

std::string UPoly::to_string(const std::string& var) const {
  const std::vector<std::string> names{var};
  return to_poly(1, 0).to_string(names);
}

UPoly gcd(UPoly a, UPoly b) {
  while (!b.is_zero()) {
    UPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() <= 0) return p.monic();
  return (p / gcd(p, p.derivative())).monic();
}

bool is_squarefree(const UPoly& p) { return gcd(p, p.derivative()).degree() <= 0; }

RatFunc::RatFunc(UPoly num, UPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw InputError("rational function with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = UPoly::constant(1);
    return;
  }
  UPoly g = gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = num_ / g;
    den_ = den_ / g;
  }
  const Rational lc = den_.leading();
  if (lc != 1) {
    num_ = num_ * Rational(1 / lc);
    den_ = den_ * Rational(1 / lc);
  }
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw InputError("division by zero rational function");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

RatFunc RatFunc::derivative() const {
  return RatFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

Complex RatFunc::eval(Complex t) const { return num_.eval(t) / den_.eval(t); }

std::string RatFunc::to_string(const std::string& var) const {
  if (den_.degree() == 0) return num_.is_zero() ? "0" : num_.to_string(var);
  auto wrap = [&](const UPoly& p) {
    std::string s = p.to_string(var);
    return p.degree() > 0 || s.front() == '-' ? "(" + s + ")" : s;
  };
  return wrap(num_) + "/" + wrap(den_);
}

} // namespace fol
