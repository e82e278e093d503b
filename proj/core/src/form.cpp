#include "foliation/form.hpp"

#include "foliation/errors.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace fol {

namespace {

void combinations(std::size_t n, std::size_t k, std::size_t start, FormIndex& cur,
                  std::vector<FormIndex>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

std::size_t basis_position(const std::vector<FormIndex>& basis, const FormIndex& idx) {
  auto it = std::lower_bound(basis.begin(), basis.end(), idx);
  if (it == basis.end() || *it != idx) throw InputError("not a basis index");
  return static_cast<std::size_t>(it - basis.begin());
}

// Sign of the permutation sorting the concatenation a ++ b, or 0 when the
// index sets overlap.
int merge_sign(const FormIndex& a, const FormIndex& b, FormIndex& merged) {
  merged.clear();
  int inversions = 0;
  for (std::size_t i : a)
    for (std::size_t j : b) {
      if (i == j) return 0;
      if (i > j) ++inversions;
    }
  merged = a;
  merged.insert(merged.end(), b.begin(), b.end());
  std::sort(merged.begin(), merged.end());
  return inversions % 2 ? -1 : 1;
}

} // namespace

const std::vector<FormIndex>& form_basis(std::size_t nvars, unsigned degree) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, unsigned>, std::unique_ptr<std::vector<FormIndex>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, degree}];
  if (!slot) {
    slot = std::make_unique<std::vector<FormIndex>>();
    FormIndex cur;
    if (degree <= nvars) combinations(nvars, degree, 0, cur, *slot);
  }
  return *slot;
}

DifferentialForm::DifferentialForm(std::size_t nvars, unsigned degree)
    : nvars_(nvars), degree_(degree), basis_(&form_basis(nvars, degree)),
      coeffs_(basis_->size(), Poly(nvars)) {}

DifferentialForm::DifferentialForm(std::size_t nvars, unsigned degree, std::vector<Poly> coeffs)
    : DifferentialForm(nvars, degree) {
  if (coeffs.size() != coeffs_.size())
    throw InputError("wrong number of form coefficients: expected " +
                     std::to_string(coeffs_.size()));
  for (const auto& c : coeffs)
    if (c.nvars() != nvars) throw InputError("form coefficient in the wrong ring");
  coeffs_ = std::move(coeffs);
}

DifferentialForm DifferentialForm::plane(const Poly& P, const Poly& Q) {
  return DifferentialForm(2, 1, {-Q, P});
}

DifferentialForm DifferentialForm::from_dx_dy(const Poly& A, const Poly& B) {
  return DifferentialForm(2, 1, {A, B});
}

DifferentialForm DifferentialForm::exact(const Poly& g) {
  std::vector<Poly> c;
  for (std::size_t i = 0; i < g.nvars(); ++i) c.push_back(g.diff(i));
  return DifferentialForm(g.nvars(), 1, std::move(c));
}

DifferentialForm DifferentialForm::function(const Poly& g) {
  return DifferentialForm(g.nvars(), 0, {g});
}

DifferentialForm DifferentialForm::dx(std::size_t nvars, std::size_t i) {
  DifferentialForm w(nvars, 1);
  w.coeffs_.at(i) = Poly::constant(nvars, 1);
  return w;
}

const Poly& DifferentialForm::coefficient(const FormIndex& idx) const {
  return coeffs_[basis_position(*basis_, idx)];
}

bool DifferentialForm::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Poly& p) { return p.is_zero(); });
}

Poly DifferentialForm::P() const {
  if (nvars_ != 2 || degree_ != 1) throw InputError("P() needs a plane 1-form");
  return coeffs_[1];
}

Poly DifferentialForm::Q() const {
  if (nvars_ != 2 || degree_ != 1) throw InputError("Q() needs a plane 1-form");
  return -coeffs_[0];
}

void DifferentialForm::check_compatible(const DifferentialForm& o) const {
  if (nvars_ != o.nvars_ || degree_ != o.degree_) throw InputError("incompatible forms");
}

DifferentialForm DifferentialForm::operator-() const {
  DifferentialForm r(*this);
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

DifferentialForm& DifferentialForm::operator+=(const DifferentialForm& o) {
  check_compatible(o);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

DifferentialForm& DifferentialForm::operator-=(const DifferentialForm& o) {
  check_compatible(o);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

DifferentialForm operator*(const Poly& g, const DifferentialForm& w) {
  DifferentialForm r(w);
  for (auto& c : r.coeffs_) c = g * c;
  return r;
}

DifferentialForm operator*(const Rational& c, const DifferentialForm& w) {
  DifferentialForm r(w);
  for (auto& p : r.coeffs_) p *= c;
  return r;
}

DifferentialForm DifferentialForm::map_coefficients(std::span<const Poly> images) const {
  if (images.size() != nvars_) throw InputError("one image per variable required");
  const std::size_t target = images.empty() ? 0 : images[0].nvars();
  std::vector<Poly> c;
  for (const auto& p : coeffs_) c.push_back(p.substitute(images));
  if (target != nvars_) throw InputError("map_coefficients keeps the variable count");
  return DifferentialForm(nvars_, degree_, std::move(c));
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.nvars() != b.nvars()) throw InputError("wedge: variable count mismatch");
  const unsigned deg = a.degree() + b.degree();
  DifferentialForm r(a.nvars(), deg);
  std::vector<Poly> out(r.basis().size(), Poly(a.nvars()));
  FormIndex merged;
  for (std::size_t i = 0; i < a.basis().size(); ++i) {
    if (a.coefficient(i).is_zero()) continue;
    for (std::size_t j = 0; j < b.basis().size(); ++j) {
      if (b.coefficient(j).is_zero()) continue;
      const int s = merge_sign(a.basis()[i], b.basis()[j], merged);
      if (s == 0) continue;
      Poly term = a.coefficient(i) * b.coefficient(j);
      auto& slot = out[basis_position(r.basis(), merged)];
      if (s > 0) slot += term;
      else slot -= term;
    }
  }
  return DifferentialForm(a.nvars(), deg, std::move(out));
}

DifferentialForm exterior_d(const DifferentialForm& a) {
  const std::size_t n = a.nvars();
  DifferentialForm r(n, a.degree() + 1);
  std::vector<Poly> out(r.basis().size(), Poly(n));
  FormIndex merged;
  for (std::size_t i = 0; i < a.basis().size(); ++i) {
    const Poly& c = a.coefficient(i);
    if (c.is_zero()) continue;
    for (std::size_t v = 0; v < n; ++v) {
      const int s = merge_sign(FormIndex{v}, a.basis()[i], merged);
      if (s == 0) continue;
      Poly dc = c.diff(v);
      auto& slot = out[basis_position(r.basis(), merged)];
      if (s > 0) slot += dc;
      else slot -= dc;
    }
  }
  return DifferentialForm(n, a.degree() + 1, std::move(out));
}

DifferentialForm pullback_form(std::span<const Poly> map, const DifferentialForm& w) {
  if (w.degree() != 1) throw InputError("pullback expects a 1-form");
  if (map.size() != w.nvars())
    throw InputError("pullback: map has " + std::to_string(map.size()) +
                     " components but the form lives in " + std::to_string(w.nvars()) +
                     " variables");
  const std::size_t m = map[0].nvars();
  for (const auto& f : map)
    if (f.nvars() != m) throw InputError("pullback: map components disagree on variable count");
  DifferentialForm r(m, 1);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const Poly a = w.coefficient(i).substitute(map);
    r += a * DifferentialForm::exact(map[i]);
  }
  return r;
}

} // namespace fol
