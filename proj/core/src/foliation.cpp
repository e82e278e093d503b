#include "foliation/foliation.hpp"

#include "foliation/errors.hpp"
#include "foliation/resultant.hpp"

#include <cmath>
#include <sstream>

namespace fol {

PowerProduct::PowerProduct(std::vector<Factor> factors, double scale) : scale_(scale) {
  for (auto& f : factors) {
    if (f.base.nvars() != 2) throw InputError("power product factors must be plane polynomials");
    if (f.power == 0 && f.abs_power == 0.0) continue;
    if (f.base.is_constant()) {
      const double c = to_double(f.base.constant_term());
      scale_ *= std::pow(c, f.power) * std::pow(std::fabs(c), f.abs_power);
      continue;
    }
    factors_.push_back(std::move(f));
  }
  compile();
}

PowerProduct PowerProduct::polynomial(const Poly& g) {
  return PowerProduct({Factor{g, 1, 0.0}});
}

void PowerProduct::compile() {
  eval_.clear();
  for (const auto& f : factors_) eval_.emplace_back(f.base);
}

std::optional<Poly> PowerProduct::as_polynomial() const {
  Poly r = Poly::constant(2, rationalize(scale_));
  for (const auto& f : factors_) {
    if (f.abs_power != 0.0 || f.power < 0) return std::nullopt;
    r *= f.base.pow(static_cast<unsigned>(f.power));
  }
  return r;
}

double PowerProduct::value(double x, double y) const {
  double v = scale_;
  for (std::size_t k = 0; k < factors_.size(); ++k) {
    const double g = eval_[k].value(x, y);
    v *= std::pow(g, factors_[k].power);
    if (factors_[k].abs_power != 0.0) v *= std::pow(std::fabs(g), factors_[k].abs_power);
  }
  return v;
}

std::array<double, 2> PowerProduct::gradient(double x, double y) const {
  const std::size_t m = factors_.size();
  std::vector<double> g(m), part(m);
  for (std::size_t k = 0; k < m; ++k) {
    g[k] = eval_[k].value(x, y);
    part[k] = std::pow(g[k], factors_[k].power);
    if (factors_[k].abs_power != 0.0) part[k] *= std::pow(std::fabs(g[k]), factors_[k].abs_power);
  }
  std::array<double, 2> grad{0.0, 0.0};
  for (std::size_t k = 0; k < m; ++k) {
    const auto& f = factors_[k];
    // d(g^n |g|^a) = (n + a) g^(n-1) |g|^a dg
    double c = (f.power + f.abs_power) * std::pow(g[k], f.power - 1);
    if (f.abs_power != 0.0) c *= std::pow(std::fabs(g[k]), f.abs_power);
    for (std::size_t j = 0; j < m; ++j)
      if (j != k) c *= part[j];
    grad[0] += c * eval_[k].dx(x, y);
    grad[1] += c * eval_[k].dy(x, y);
  }
  grad[0] *= scale_;
  grad[1] *= scale_;
  return grad;
}

std::string PowerProduct::to_string(std::span<const std::string> names) const {
  std::ostringstream os;
  bool first = true;
  if (scale_ != 1.0 || factors_.empty()) {
    os << scale_;
    first = false;
  }
  for (const auto& f : factors_) {
    if (!first) os << " * ";
    first = false;
    const std::string b = "(" + f.base.to_string(names) + ")";
    if (f.power != 0) {
      os << b;
      if (f.power != 1) os << "^" << f.power;
    }
    if (f.abs_power != 0.0) {
      if (f.power != 0) os << " * ";
      os << "|" << f.base.to_string(names) << "|^" << f.abs_power;
    }
  }
  return os.str();
}

std::vector<int> LogarithmicSpec::degrees() const {
  std::vector<int> d;
  for (const auto& g : f) d.push_back(g.degree());
  return d;
}

int LogarithmicSpec::target_degree() const {
  int s = 0;
  for (const auto& g : f) s += g.degree();
  return s - 1;
}

bool LogarithmicSpec::mixed_signs() const {
  bool pos = false, neg = false;
  for (const auto& l : lambda) (sgn(l) > 0 ? pos : neg) = true;
  return pos && neg;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Generic: return "generic";
    case Family::Hamiltonian: return "hamiltonian";
    case Family::Logarithmic: return "logarithmic";
    case Family::DulacA: return "A";
    case Family::DulacB1: return "B1";
    case Family::Pullback: return "pullback";
  }
  return "generic";
}

FoliationRecord make_record(const DifferentialForm& omega, Family family) {
  if (omega.nvars() != 2 || omega.degree() != 1)
    throw InputError("a plane foliation needs a 1-form in two variables");
  FoliationRecord r;
  r.omega = omega;
  r.P = omega.P();
  r.Q = omega.Q();
  r.degree = std::max(r.P.degree(), r.Q.degree());
  if (r.degree < 1) throw InputError("foliation degree must be at least 1");
  r.family = family;
  r.reduced_pair = !have_common_factor(r.P, r.Q);
  return r;
}

FoliationRecord from_vector_field(const Poly& P, const Poly& Q) {
  return make_record(DifferentialForm::plane(P, Q));
}

FoliationRecord hamiltonian(const Poly& f) {
  if (f.nvars() != 2) throw InputError("hamiltonian needs a polynomial in two variables");
  if (f.degree() < 2) throw InputError("hamiltonian needs deg f >= 2");
  FoliationRecord r = make_record(DifferentialForm::exact(f), Family::Hamiltonian);
  r.first_integral = PowerProduct::polynomial(f);
  r.integrating_factor = PowerProduct();
  r.log_spec = LogarithmicSpec{{f}, {Rational(1)}};
  return r;
}

namespace {

void check_log_spec(const LogarithmicSpec& spec) {
  if (spec.f.empty()) throw InputError("logarithmic spec needs at least one f_i");
  if (spec.f.size() != spec.lambda.size())
    throw InputError("logarithmic spec: f and lambda lengths differ");
  for (std::size_t i = 0; i < spec.s(); ++i) {
    if (spec.f[i].nvars() != 2) throw InputError("logarithmic spec: f_i must be plane polynomials");
    if (spec.f[i].degree() < 1) throw InputError("logarithmic spec: f_i must be nonconstant");
    if (spec.lambda[i] == 0) throw InputError("logarithmic spec: lambda_i = 0");
  }
  for (std::size_t i = 0; i < spec.s(); ++i)
    for (std::size_t j = i + 1; j < spec.s(); ++j)
      if (have_common_factor(spec.f[i], spec.f[j]))
        throw InputError("logarithmic spec: f_" + std::to_string(i + 1) + " and f_" +
                         std::to_string(j + 1) + " share a factor");
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

} // namespace

FoliationRecord logarithmic(const LogarithmicSpec& spec) {
  check_log_spec(spec);
  const std::size_t s = spec.s();
  DifferentialForm w(2, 1);
  for (std::size_t i = 0; i < s; ++i) {
    Poly others = Poly::constant(2, spec.lambda[i]);
    for (std::size_t j = 0; j < s; ++j)
      if (j != i) others *= spec.f[j];
    w += others * DifferentialForm::exact(spec.f[i]);
  }
  FoliationRecord r = make_record(w, Family::Logarithmic);

  bool integral = true;
  for (const auto& l : spec.lambda) integral = integral && is_integer(l);
  std::vector<PowerProduct::Factor> F, S;
  for (std::size_t i = 0; i < s; ++i) {
    const Rational& l = spec.lambda[i];
    if (integral) {
      const int n = static_cast<int>(l.get_num().get_si());
      F.push_back({spec.f[i], n, 0.0});
      S.push_back({spec.f[i], 1 - n, 0.0});
    } else {
      F.push_back({spec.f[i], 0, to_double(l)});
      S.push_back({spec.f[i], 1, -to_double(l)});
    }
  }
  r.first_integral = PowerProduct(std::move(F));
  r.integrating_factor = PowerProduct(std::move(S));
  r.log_spec = spec;
  return r;
}

FoliationRecord dulac_family(DulacKind kind, const Poly& p, const Poly& q, unsigned i) {
  if (p.nvars() != 2 || q.nvars() != 2) throw InputError("Dulac families need plane polynomials");
  if (p.degree() != 1) throw InputError("Dulac families need deg p = 1");
  if (q.degree() < 1) throw InputError("Dulac families need deg q >= 1");
  const auto dp = DifferentialForm::exact(p);
  const auto dq = DifferentialForm::exact(q);
  if (kind == DulacKind::A) {
    if (static_cast<int>(i) > q.degree()) throw InputError("A_i needs i <= deg q");
    // p^(i+1) (dp/p + d(q/p^i)) = p^i dp + p dq - i q dp
    DifferentialForm w = p.pow(i) * dp + p * dq - (Rational(i) * q) * dp;
    FoliationRecord r = make_record(w, Family::DulacA);
    r.clearing_factor = p.pow(i + 1);
    r.integrating_factor = PowerProduct({{p, static_cast<int>(i) + 1, 0.0}});
    r.dulac_index = i;
    if (!is_integrating_factor(w, *r.clearing_factor))
      throw NumericError("internal: A_i clearing factor check failed");
    return r;
  }
  // q (dq/q + dp) = dq + q dp
  DifferentialForm w = dq + q * dp;
  FoliationRecord r = make_record(w, Family::DulacB1);
  r.clearing_factor = q;
  r.integrating_factor = PowerProduct::polynomial(q);
  if (!is_integrating_factor(w, q)) throw NumericError("internal: B_1 clearing factor check failed");
  return r;
}

FoliationRecord pullback(const PolyMap& F, const DifferentialForm& omega_n) {
  const auto& comps = F.components;
  if (comps.size() < 2) throw InputError("pullback needs a map with n >= 2 components");
  if (omega_n.degree() != 1) throw InputError("pullback needs a 1-form");
  if (omega_n.nvars() != comps.size())
    throw InputError("pullback: form has " + std::to_string(omega_n.nvars()) +
                     " variables but the map has " + std::to_string(comps.size()) + " components");
  for (const auto& c : comps) {
    if (c.nvars() != 2) throw InputError("pullback: map components must be plane polynomials");
    if (c.is_constant()) throw InputError("pullback: map components must be nonconstant");
  }
  return make_record(pullback_form(comps, omega_n), Family::Pullback);
}

IntegrabilityResult integrability_check(const DifferentialForm& omega_n) {
  if (omega_n.degree() != 1) throw InputError("integrability check needs a 1-form");
  const auto w = wedge(omega_n, exterior_d(omega_n));
  IntegrabilityResult r;
  r.residual = w.coefficients();
  r.integrable = w.is_zero();
  return r;
}

bool is_integrating_factor(const DifferentialForm& omega, const Poly& g) {
  const auto lhs = g * exterior_d(omega) - wedge(DifferentialForm::exact(g), omega);
  return lhs.is_zero();
}

DifferentialForm logarithmic_model(const std::vector<Rational>& lambda) {
  const std::size_t n = lambda.size();
  DifferentialForm w(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    Poly c = Poly::constant(n, lambda[i]);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) c *= Poly::variable(n, j);
    w += c * DifferentialForm::dx(n, i);
  }
  return w;
}

} // namespace fol
