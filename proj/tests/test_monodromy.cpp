#include "doctest.h"

#include "foliation/errors.hpp"
#include "foliation/monodromy.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace fol;

namespace {

UPoly U(std::vector<long> c) {
  std::vector<Rational> q;
  for (long v : c) q.emplace_back(v);
  return UPoly(q);
}

IntVector V(std::vector<long> c) {
  IntVector v;
  for (long x : c) v.emplace_back(x);
  return v;
}

bool preserves_form(const HomologyLattice& L, const IntMatrix& M) { return M.transpose() * L.intersection * M == L.intersection; }

bool primitive(const IntVector& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g == 1;
}

// Monodromy of the loop that visits the lassos in traversal order.
IntMatrix ordered_product(const FibrationModel& M, const std::vector<MonodromyOperator>& ops) {
  IntMatrix P = IntMatrix::identity(M.lattice.rank);
  for (std::size_t j : angular_order(M)) P = ops[j].matrix * P;
  return P;
}

void check_model(const FibrationModel& M, const std::vector<MonodromyOperator>& ops) {
  REQUIRE(ops.size() == M.critical_values.size());
  for (const auto& op : ops) {
    CHECK(op.matrix.determinant() == 1);
    CHECK(preserves_form(M.lattice, op.matrix));
    CHECK(primitive(op.vanishing_cycle));
    CHECK(op.matrix.apply(op.vanishing_cycle) == op.vanishing_cycle);
    CHECK(op.matrix == twist(M.lattice, op.vanishing_cycle));
  }
  CHECK(ordered_product(M, ops) == monodromy_at_infinity(M));
}

} // namespace

TEST_CASE("integer matrices and Hermite bases") {
  IntMatrix A(3, 3);
  const long a[3][3] = {{2, -1, 0}, {4, 3, 5}, {-7, 1, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = a[i][j];
  // Cofactor expansion.
  const long det = 2 * (3 * 1 - 5 * 1) - (-1) * (4 * 1 - 5 * (-7)) + 0;
  CHECK(A.determinant() == det);
  CHECK(IntMatrix::identity(4).determinant() == 1);

  const auto H = hermite_basis({V({2, 4, 6}), V({3, 6, 9}), V({0, 0, 5})});
  REQUIRE(H.size() == 2);
  CHECK(H[0] == V({1, 2, 3}));
  CHECK(H[1] == V({0, 0, 5}));
  CHECK(in_lattice(H, V({2, 4, 11})));
  CHECK_FALSE(in_lattice(H, V({2, 4, 7})));
  CHECK_FALSE(in_lattice(H, V({1, 0, 0})));

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long> d(-6, 6);
  for (int k = 0; k < 30; ++k) {
    std::vector<IntVector> gens;
    for (int g = 0; g < 3; ++g) gens.push_back(V({d(rng), d(rng), d(rng), d(rng)}));
    const auto B = hermite_basis(gens);
    for (const auto& g : gens) CHECK(in_lattice(B, g));
    // Integer combinations stay inside.
    IntVector c(4);
    for (int j = 0; j < 4; ++j) c[j] = 3 * gens[0][j] - 2 * gens[1][j] + gens[2][j];
    CHECK(in_lattice(B, c));
    CHECK(hermite_basis(B) == B);
  }
}

TEST_CASE("model construction") {
  const auto M = build_model(U({0, -3, 0, 1}));
  REQUIRE(M.critical_values.size() == 2);
  CHECK(std::abs(M.critical_values[0] - Complex(-2)) < 1e-10);
  CHECK(std::abs(M.critical_values[1] - Complex(2)) < 1e-10);
  CHECK(M.base.real() < -2);
  CHECK(M.lattice.rank == 2);
  CHECK(M.lattice.intersection(0, 1) == 1);
  CHECK(M.lattice.intersection(1, 0) == -1);
  REQUIRE(M.branch_points.size() == 3);
  for (auto r : M.branch_points) {
    const Complex v = r * r * r - 3.0 * r + M.base;
    CHECK(std::abs(v) < 1e-12);
  }
  CHECK_THROWS_AS(build_model(U({0, 0, 1})), InputError);
  CHECK_THROWS_AS(build_model(U({0, 0, -2, 0, 1})), InputError);

  // Discriminant roots are the values -p(c) at the critical points.
  const auto D = critical_value_polynomial(U({1, -3, 0, 1}));
  CHECK(D.degree() == 2);
  CHECK(D.eval(Rational(-1 + 2)) == 0);
  CHECK(D.eval(Rational(-1 - 2)) == 0);
}

TEST_CASE("Picard-Lefschetz generators of y^2 = x^3 - 3x + t") {
  const auto M = build_model(U({0, -3, 0, 1}));
  const auto ops = monodromy_generators(M);
  check_model(M, ops);
  CHECK(abs(M.lattice.pairing(ops[0].vanishing_cycle, ops[1].vanishing_cycle)) == 1);
  const auto IdM = IntMatrix::identity(2);
  for (const auto& op : ops) CHECK_FALSE(op.matrix * op.matrix == IdM);
  const auto orb = orbit_span(ops, M.lattice, ops[0].vanishing_cycle);
  CHECK(orb.rank == 2);
  CHECK_FALSE(cycle_at_infinity(M));

  const auto ball = orbit_ball(ops, M.lattice, ops[0].vanishing_cycle, 2);
  CHECK(ball.size() > 2);
  for (const auto& v : ball) CHECK(in_lattice(orb.basis, v));
}

TEST_CASE("orbit closure: fixed vectors and conjugation") {
  const auto M = build_model(U({0, -3, 0, 1}));
  HomologyLattice L = M.lattice;
  // Rank three chain with a twist orthogonal to gamma_1.
  HomologyLattice L3;
  L3.rank = 3;
  L3.intersection = IntMatrix(3, 3);
  L3.intersection(0, 1) = 1;
  L3.intersection(1, 0) = -1;
  L3.intersection(1, 2) = 1;
  L3.intersection(2, 1) = -1;
  const auto T = twist(L3, V({0, 0, 1}));
  CHECK(L3.pairing(V({1, 0, 0}), V({0, 0, 1})) == 0);
  CHECK(orbit_span({T}, L3, V({1, 0, 0})).rank == 1);
  CHECK(orbit_span({T}, L3, V({0, 1, 0})).rank == 2);
  CHECK_THROWS_AS(orbit_span({T}, L3, V({0, 0, 0})), InputError);

  const auto ops = monodromy_generators(M);
  const IntMatrix U1 = ops[1].matrix, U1i = twist_inverse(L, ops[1].vanishing_cycle);
  CHECK(U1 * U1i == IntMatrix::identity(2));
  std::vector<IntMatrix> conj, plain;
  for (const auto& op : ops) {
    plain.push_back(op.matrix);
    conj.push_back(U1 * op.matrix * U1i);
  }
  for (const auto& start : {V({1, 0}), V({1, 1}), V({2, 0})}) {
    CHECK(orbit_span(plain, L, start).rank == orbit_span(conj, L, U1.apply(start)).rank);
  }
}

TEST_CASE("even degree: cycle at infinity") {
  const auto M = build_model(U({1, 0, -3, 1, 1}));
  const auto ops = monodromy_generators(M);
  check_model(M, ops);
  const auto v = cycle_at_infinity(M);
  REQUIRE(v);
  CHECK(std::any_of(v->begin(), v->end(), [](const Integer& x) { return x != 0; }));
  CHECK(M.lattice.pairing(*v, *v) == 0);
  for (std::size_t i = 0; i < M.lattice.rank; ++i) {
    IntVector e(M.lattice.rank);
    e[i] = 1;
    CHECK(M.lattice.pairing(*v, e) == 0);
  }
  for (const auto& op : ops) CHECK(op.matrix.apply(*v) == *v);
  CHECK(monodromy_at_infinity(M).apply(*v) == *v);
  CHECK(orbit_span(ops, M.lattice, ops[0].vanishing_cycle).rank == 3);
}

TEST_CASE("degree five: full orbit") {
  const auto M = build_model(U({1, 2, 0, -5, 0, 1}));
  const auto ops = monodromy_generators(M);
  check_model(M, ops);
  for (const auto& op : ops) CHECK(orbit_span(ops, M.lattice, op.vanishing_cycle).rank == 4);
}

TEST_CASE("random generic polynomials") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> coef(-5, 5);
  std::uniform_int_distribution<int> deg(3, 7);
  int done = 0;
  while (done < 20) {
    const int m = deg(rng);
    std::vector<long> c(m + 1);
    for (auto& x : c) x = coef(rng);
    c[m] = 1;
    FibrationModel M;
    try {
      M = build_model(U(c));
    } catch (const InputError&) {
      continue;
    }
    const auto ops = monodromy_generators(M);
    check_model(M, ops);
    const auto orb = orbit_span(ops, M.lattice, ops[done % ops.size()].vanishing_cycle);
    CHECK(orb.rank == static_cast<std::size_t>(m - 1));
    ++done;
  }
}

TEST_CASE("projection angle does not change the operators") {
  for (const auto& p : {U({0, -3, 0, 1}), U({1, 0, -3, 1, 1}), U({1, 2, 0, -5, 0, 1}), U({-2, 3, 1, 0, -4, 0, 1})}) {
    const auto M = build_model(p);
    const auto base = monodromy_generators(M);
    int agreed = 0;
    for (double theta : {kProjectionAngles[1], kProjectionAngles[2], 1.0}) {
      std::vector<MonodromyOperator> ops;
      try {
        ops = monodromy_generators(M, {theta});
      } catch (const NumericError& e) {
        continue;
      }
      for (std::size_t j = 0; j < ops.size(); ++j) {
        CHECK(ops[j].projection_angle == theta);
        CHECK(ops[j].matrix == base[j].matrix);
        IntVector neg = base[j].vanishing_cycle;
        for (auto& x : neg) x = -x;
        CHECK((ops[j].vanishing_cycle == base[j].vanishing_cycle || ops[j].vanishing_cycle == neg));
      }
      CHECK(monodromy_at_infinity(M, {theta}) == monodromy_at_infinity(M));
      ++agreed;
    }
    CHECK(agreed >= 1);
  }
}
