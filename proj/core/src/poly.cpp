#include "foliation/poly.hpp"

#include "foliation/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fol {

unsigned total_degree(const Exponent& e) {
  return std::accumulate(e.begin(), e.end(), 0u);
}

bool GrlexDescending::operator()(const Exponent& a, const Exponent& b) const {
  const unsigned da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

Poly Poly::constant(std::size_t nvars, const Rational& c) {
  Poly p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t index) {
  if (index >= nvars) throw InputError("variable index out of range");
  Exponent e(nvars, 0);
  e[index] = 1;
  return monomial(e, 1);
}

Poly Poly::monomial(const Exponent& e, const Rational& c) {
  Poly p(e.size());
  p.add_term(e, c);
  return p;
}

bool Poly::is_constant() const noexcept {
  return terms_.empty() ||
         (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
}

int Poly::degree() const {
  if (terms_.empty()) return -1;
  return static_cast<int>(total_degree(terms_.begin()->first));
}

int Poly::degree_in(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e[var]));
  return d;
}

Rational Poly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational Poly::constant_term() const { return coeff(Exponent(nvars_, 0)); }

const std::pair<const Exponent, Rational>& Poly::leading() const {
  if (terms_.empty()) throw InputError("leading term of the zero polynomial");
  return *terms_.begin();
}

void Poly::add_term(const Exponent& e, const Rational& c) {
  if (e.size() != nvars_) throw InputError("exponent length mismatch");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void Poly::check_same_ring(const Poly& o) const {
  if (nvars_ != o.nvars_)
    throw InputError("polynomial variable count mismatch (" +
                     std::to_string(nvars_) + " vs " +
                     std::to_string(o.nvars_) + ")");
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Poly& Poly::operator+=(const Poly& o) {
  check_same_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  check_same_ring(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  a.check_same_ring(b);
  Poly r(a.nvars_);
  Exponent e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Poly Poly::pow(unsigned k) const {
  Poly result = constant(nvars_, 1);
  Poly base = *this;
  while (k) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k) base *= base;
  }
  return result;
}

Poly Poly::diff(std::size_t var) const {
  if (var >= nvars_) throw InputError("variable index out of range");
  Poly r(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent f = e;
    --f[var];
    r.add_term(f, c * e[var]);
  }
  return r;
}

Poly Poly::divide_exact(const Poly& d) const {
  check_same_ring(d);
  if (d.is_zero()) throw InputError("division by the zero polynomial");
  const auto& [ld_e, ld_c] = d.leading();
  Poly rem = *this;
  Poly quot(nvars_);
  Exponent q(nvars_);
  while (!rem.is_zero()) {
    const auto [lr_e, lr_c] = rem.leading();
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (lr_e[i] < ld_e[i]) throw InputError("inexact polynomial division");
      q[i] = lr_e[i] - ld_e[i];
    }
    const Rational c = lr_c / ld_c;
    quot.add_term(q, c);
    for (const auto& [e, v] : d.terms_) {
      Exponent s(nvars_);
      for (std::size_t i = 0; i < nvars_; ++i) s[i] = e[i] + q[i];
      rem.add_term(s, -c * v);
    }
  }
  return quot;
}

namespace {

template <class T>
T eval_generic(const Poly& p, std::span<const T> point) {
  if (point.size() != p.nvars()) throw InputError("evaluation point size mismatch");
  // Power tables keep evaluation to one multiply per term factor.
  std::vector<std::vector<T>> powers(p.nvars());
  for (std::size_t i = 0; i < p.nvars(); ++i) {
    int d = std::max(p.degree_in(i), 0);
    powers[i].resize(static_cast<std::size_t>(d) + 1);
    powers[i][0] = T(1);
    for (int k = 1; k <= d; ++k) powers[i][k] = powers[i][k - 1] * point[i];
  }
  T sum(0);
  for (const auto& [e, c] : p.terms()) {
    T term;
    if constexpr (std::is_same_v<T, Rational>) {
      term = c;
    } else {
      term = T(c.get_d());
    }
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i]) term *= powers[i][e[i]];
    sum += term;
  }
  return sum;
}

} // namespace

Rational Poly::eval(std::span<const Rational> point) const {
  return eval_generic<Rational>(*this, point);
}
Complex Poly::eval(std::span<const Complex> point) const {
  return eval_generic<Complex>(*this, point);
}
double Poly::eval(std::span<const double> point) const {
  return eval_generic<double>(*this, point);
}

Poly Poly::substitute(std::span<const Poly> images) const {
  if (images.size() != nvars_)
    throw InputError("substitution needs one image per variable");
  const std::size_t target = images.empty() ? 0 : images[0].nvars();
  for (const auto& im : images)
    if (im.nvars() != target) throw InputError("substitution images disagree on variable count");
  std::vector<std::vector<Poly>> powers(nvars_);
  for (std::size_t i = 0; i < nvars_; ++i) {
    int d = std::max(degree_in(i), 0);
    powers[i].push_back(constant(target, 1));
    for (int k = 1; k <= d; ++k) powers[i].push_back(powers[i].back() * images[i]);
  }
  Poly r(target);
  for (const auto& [e, c] : terms_) {
    Poly term = constant(target, c);
    for (std::size_t i = 0; i < nvars_; ++i)
      if (e[i]) term *= powers[i][e[i]];
    r += term;
  }
  return r;
}

std::vector<Poly> Poly::coefficients_in(std::size_t var) const {
  if (var >= nvars_) throw InputError("variable index out of range");
  std::vector<Poly> out(static_cast<std::size_t>(std::max(degree_in(var), 0)) + 1,
                        Poly(nvars_));
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    f[var] = 0;
    out[e[var]].add_term(f, c);
  }
  return out;
}

Poly Poly::from_coefficients_in(std::size_t var, std::span<const Poly> coeffs) {
  if (coeffs.empty()) throw InputError("empty coefficient list");
  Poly r(coeffs[0].nvars());
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    for (const auto& [e, c] : coeffs[k].terms()) {
      Exponent f = e;
      f[var] += static_cast<std::uint32_t>(k);
      r.add_term(f, c);
    }
  }
  return r;
}

Poly Poly::extend(std::size_t new_nvars) const {
  if (new_nvars < nvars_) throw InputError("cannot shrink a polynomial ring");
  Poly r(new_nvars);
  for (const auto& [e, c] : terms_) {
    Exponent f = e;
    f.resize(new_nvars, 0);
    r.add_term(f, c);
  }
  return r;
}

std::string Poly::to_string(std::span<const std::string> names) const {
  if (names.size() < nvars_) throw InputError("not enough variable names");
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    bool wrote = false;
    if (mag != 1 || total_degree(e) == 0) {
      os << mag.get_str();
      wrote = true;
    }
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (!e[i]) continue;
      if (wrote) os << '*';
      os << names[i];
      if (e[i] > 1) os << '^' << e[i];
      wrote = true;
    }
  }
  return os.str();
}

std::vector<std::string> default_names(std::size_t nvars) {
  if (nvars == 1) return {"x"};
  if (nvars == 2) return {"x", "y"};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < nvars; ++i) names.push_back("x" + std::to_string(i + 1));
  return names;
}

} // namespace fol
