#pragma once

#include "foliation/form.hpp"
#include "foliation/numeric_poly.hpp"
#include "foliation/poly.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace fol {

// c * prod g_k^{n_k} |g_k|^{a_k} on the region where no g_k vanishes.
class PowerProduct {
public:
  struct Factor {
    Poly base;
    int power = 0;
    double abs_power = 0.0;
  };

  PowerProduct() = default;
  explicit PowerProduct(std::vector<Factor> factors, double scale = 1.0);
  static PowerProduct polynomial(const Poly& g);

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  double scale() const noexcept { return scale_; }
  bool is_one() const noexcept { return factors_.empty() && scale_ == 1.0; }
  // Exact polynomial when every exponent is a nonnegative integer.
  std::optional<Poly> as_polynomial() const;

  double value(double x, double y) const;
  // Gradient by the logarithmic product rule; undefined on the zero set.
  std::array<double, 2> gradient(double x, double y) const;

  std::string to_string(std::span<const std::string> names) const;

private:
  void compile();

  std::vector<Factor> factors_;
  double scale_ = 1.0;
  std::vector<PlaneFunction> eval_;
};

// 1 <= s, deg f_i = d_i, lambda_i != 0.  Complex multiplicities are not
// representable: the exact pipeline runs over Q.
struct LogarithmicSpec {
  std::vector<Poly> f;
  std::vector<Rational> lambda;

  std::size_t s() const noexcept { return f.size(); }
  std::vector<int> degrees() const;
  // d = sum d_i - 1.
  int target_degree() const;
  bool mixed_signs() const;
};

enum class Family { Generic, Hamiltonian, Logarithmic, DulacA, DulacB1, Pullback };

const char* family_name(Family f);

struct FoliationRecord {
  DifferentialForm omega{2, 1};
  Poly P{2}, Q{2};
  int degree = 0;
  Family family = Family::Generic;
  // P and Q share no nonconstant factor.
  bool reduced_pair = true;

  std::optional<PowerProduct> first_integral;
  // s with d(omega / s) = 0.
  std::optional<PowerProduct> integrating_factor;
  std::optional<LogarithmicSpec> log_spec;
  // Monomial removed from the closed rational form (Dulac families).
  std::optional<Poly> clearing_factor;
  std::optional<unsigned> dulac_index;
};

// Validates omega (plane 1-form, degree >= 1) and fills the views.
FoliationRecord make_record(const DifferentialForm& omega, Family family = Family::Generic);
FoliationRecord from_vector_field(const Poly& P, const Poly& Q);

FoliationRecord hamiltonian(const Poly& f);
FoliationRecord logarithmic(const LogarithmicSpec& spec);

enum class DulacKind { A, B1 };
FoliationRecord dulac_family(DulacKind kind, const Poly& p, const Poly& q, unsigned i = 0);

// Components of a polynomial map C^2 -> C^n.
struct PolyMap {
  std::vector<Poly> components;
};

FoliationRecord pullback(const PolyMap& F, const DifferentialForm& omega_n);

struct IntegrabilityResult {
  bool integrable = true;
  // Coefficients of omega ^ d omega against the 3-form basis.
  std::vector<Poly> residual;
};

IntegrabilityResult integrability_check(const DifferentialForm& omega_n);

// g d(omega) - dg ^ omega == 0, i.e. omega / g is closed.
bool is_integrating_factor(const DifferentialForm& omega, const Poly& g);

// x1 ... xn * sum lambda_i dx_i / x_i.
DifferentialForm logarithmic_model(const std::vector<Rational>& lambda);

} // namespace fol
