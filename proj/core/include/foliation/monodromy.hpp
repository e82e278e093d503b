#pragma once

#include "foliation/rational.hpp"
#include "foliation/upoly.hpp"

#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace fol {

// Dense integer matrix, row-major.
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return r_; }
  std::size_t cols() const noexcept { return c_; }
  Integer& operator()(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Integer& operator()(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  IntMatrix transpose() const;
  Integer determinant() const;
  std::vector<Integer> apply(const std::vector<Integer>& v) const;

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.r_ == b.r_ && a.c_ == b.c_ && a.a_ == b.a_;
  }

private:
  std::size_t r_ = 0, c_ = 0;
  std::vector<Integer> a_;
};

using IntVector = std::vector<Integer>;

// Row-style Hermite normal form of the lattice spanned by `vectors`: pivots
// positive and strictly increasing in column, entries above each pivot
// reduced into [0, pivot).  Zero rows are dropped.
std::vector<IntVector> hermite_basis(std::vector<IntVector> vectors);
bool in_lattice(const std::vector<IntVector>& hnf, const IntVector& v);

// Cycles gamma_i over consecutive branch points (by the projection order at
// the base point), with <gamma_i, gamma_{i+1}> = +1.
struct HomologyLattice {
  std::size_t rank = 0;
  std::vector<std::string> labels;
  IntMatrix intersection;
  Integer pairing(const IntVector& a, const IntVector& b) const;
};

// Fibers f = y^2 - p(x) = t, i.e. y^2 = p(x) + t.
struct FibrationModel {
  UPoly p;
  int m = 0;
  std::vector<Complex> critical_values;
  Complex base{};
  std::vector<Complex> branch_points;
  HomologyLattice lattice;
};

// Discriminant of p(x) + t in x, as a polynomial in t.
UPoly critical_value_polynomial(const UPoly& p);

// base: explicit base point; otherwise min Re(C) - 1.  Throws InputError for
// deg p < 3 and for repeated critical values.
FibrationModel build_model(const UPoly& p, std::optional<Complex> base = std::nullopt);

struct MonodromyOperator {
  std::size_t critical_index = 0;
  IntMatrix matrix;
  IntVector vanishing_cycle;
  // Projection angle the braid word was read with.
  double projection_angle = 0;
};

// gamma -> gamma + <gamma, delta> delta.
IntMatrix twist(const HomologyLattice& L, const IntVector& delta);
IntMatrix twist_inverse(const HomologyLattice& L, const IntVector& delta);

// One generator per critical value: lasso from the base point to a circle of
// radius 0.1 * (distance to the nearest other critical value).  Critical
// values near the straight approach are bypassed on their own side;
// collinear ones are passed above.
// Braid words are read with the first projection angle of `angles` that
// gives an unambiguous word; results are in the base (Re, Im) frame.
std::vector<MonodromyOperator> monodromy_generators(const FibrationModel& model);
std::vector<MonodromyOperator> monodromy_generators(const FibrationModel& model, const std::vector<double>& angles);

// Transport of the cycle basis around the counterclockwise circle |t| = R
// (R beyond all critical values and |base|), reached from the base point
// along the negative real direction.
IntMatrix monodromy_at_infinity(const FibrationModel& model);
IntMatrix monodromy_at_infinity(const FibrationModel& model, const std::vector<double>& angles);

inline const std::vector<double> kProjectionAngles{0.0, std::numbers::pi / 7, std::numbers::pi / 3};

// Critical value indices in the order the counterclockwise loop around all
// of them traverses their lassos: its monodromy is M[o_n] * ... * M[o_1].
// The loop around the point at infinity is the inverse.
std::vector<std::size_t> angular_order(const FibrationModel& model);

struct OrbitReport {
  IntVector start;
  std::size_t generators = 0;
  std::vector<IntVector> basis;
  std::size_t rank = 0;
};

// Smallest lattice containing start and invariant under every matrix and
// its inverse.
OrbitReport orbit_span(const std::vector<IntMatrix>& operators, const HomologyLattice& L, const IntVector& start);
OrbitReport orbit_span(const std::vector<MonodromyOperator>& operators, const HomologyLattice& L,
                       const IntVector& start);

// Distinct images of start under words of length <= max_length in the
// operators and their inverses.
std::vector<IntVector> orbit_ball(const std::vector<MonodromyOperator>& operators, const HomologyLattice& L,
                                  const IntVector& start, std::size_t max_length);

// Class of a large loop around all branch points: gamma_1 + gamma_3 + ... for
// even m, none for odd m.
std::optional<IntVector> cycle_at_infinity(const FibrationModel& model);

} // namespace fol
