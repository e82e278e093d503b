#pragma once

#include "foliation/form.hpp"
#include "foliation/poly.hpp"

#include <random>

namespace fol::testing {

inline Rational random_rational(std::mt19937_64& rng, long num_bound = 9, long den_bound = 5) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound);
  std::uniform_int_distribution<long> den(1, den_bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline Poly random_poly(std::mt19937_64& rng, std::size_t nvars, unsigned max_degree,
                        std::size_t max_terms = 6) {
  std::uniform_int_distribution<std::size_t> nterms(0, max_terms);
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  Poly p(nvars);
  const std::size_t k = nterms(rng);
  for (std::size_t t = 0; t < k; ++t) {
    Exponent e(nvars, 0);
    unsigned budget = deg(rng);
    for (std::size_t i = 0; i < nvars && budget > 0; ++i) {
      std::uniform_int_distribution<unsigned> part(0, budget);
      e[i] = (i + 1 == nvars) ? budget : part(rng);
      budget -= e[i];
    }
    p.add_term(e, random_rational(rng));
  }
  return p;
}

inline DifferentialForm random_one_form(std::mt19937_64& rng, std::size_t nvars, unsigned max_degree) {
  std::vector<Poly> c;
  for (std::size_t i = 0; i < nvars; ++i) c.push_back(random_poly(rng, nvars, max_degree));
  return DifferentialForm(nvars, 1, std::move(c));
}

} // namespace fol::testing
