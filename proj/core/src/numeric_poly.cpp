#include "foliation/numeric_poly.hpp"

#include "foliation/errors.hpp"

#include <array>
#include <cmath>

namespace fol {

namespace {
constexpr unsigned kMaxDegree = 63;
}

NumericPoly::NumericPoly(const Poly& p) : nvars_(p.nvars()) {
  for (const auto& [e, c] : p.terms()) {
    coef_.push_back(c.get_d());
    for (auto k : e) {
      if (k > kMaxDegree) throw InputError("degree too large for numeric evaluation");
      exps_.push_back(static_cast<std::uint16_t>(k));
      maxdeg_ = std::max(maxdeg_, k);
    }
  }
}

template <class T>
T NumericPoly::eval2(T x, T y) const {
  if (coef_.empty()) return T(0);
  std::array<T, kMaxDegree + 1> px, py;
  px[0] = py[0] = T(1);
  for (unsigned k = 1; k <= maxdeg_; ++k) {
    px[k] = px[k - 1] * x;
    py[k] = py[k - 1] * y;
  }
  T s(0);
  for (std::size_t t = 0; t < coef_.size(); ++t)
    s += coef_[t] * px[exps_[2 * t]] * py[exps_[2 * t + 1]];
  return s;
}

template double NumericPoly::eval2<double>(double, double) const;
template Complex NumericPoly::eval2<Complex>(Complex, Complex) const;

double NumericPoly::eval(std::span<const double> z) const {
  if (z.size() != nvars_) throw InputError("evaluation point size mismatch");
  double s = 0;
  for (std::size_t t = 0; t < coef_.size(); ++t) {
    double v = coef_[t];
    for (std::size_t i = 0; i < nvars_; ++i) {
      const auto k = exps_[t * nvars_ + i];
      for (unsigned j = 0; j < k; ++j) v *= z[i];
    }
    s += v;
  }
  return s;
}

double NumericPoly::magnitude(double x, double y) const {
  return magnitude(Complex(x), Complex(y));
}

double NumericPoly::magnitude(Complex x, Complex y) const {
  const double ax = std::abs(x), ay = std::abs(y);
  double s = 0;
  for (std::size_t t = 0; t < coef_.size(); ++t)
    s += std::fabs(coef_[t]) * std::pow(ax, exps_[2 * t]) * std::pow(ay, exps_[2 * t + 1]);
  return s;
}

} // namespace fol
