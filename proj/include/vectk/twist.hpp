#pragma once

#include <map>

#include "vectk/cochain.hpp"
#include "vectk/graded.hpp"

namespace vectk {

// Lifts of projective transition functions: one r x r unitary per ascending
// edge of the nerve; the reversed edge carries the inverse.
struct unitary_lift_system {
  int rank = 0;
  std::map<int, cmat> unitaries;  // key: index into complex.simplices(1)

  // u_{ab} for an ordered pair of adjacent vertices
  cmat directed(const simplicial_complex& k, int a, int b) const;
};

void validate_lifts(const simplicial_complex& k, const unitary_lift_system& lifts,
                    const tolerances& tol = {});

// The scalar defect of the lifts on each triangle: u_ab u_bc = c_abc u_ac.
// Phases are recognized as rationals with denominator <= q_max; the result is
// an exact cocycle (associativity of the matrix product).
u1_cochain dd_cocycle(const simplicial_complex& k, const unitary_lift_system& lifts,
                      const tolerances& tol = {});

struct dd_class_info {
  class_coordinates coords;
  u1_cochain representative;
  bigint order() const { return coords.order(); }
  bool zero() const { return coords.is_zero(); }
};

// Class of a U(1) 2-cocycle in H^3(X, Z) through the connecting isomorphism.
dd_class_info dd_class(cohomology_cache& cc, const u1_cochain& c);

struct obstruction_result {
  bool solvable = false;
  std::optional<u1_cochain> witness;  // b with delta b = c^r when solvable
};

// A rank-r twisted bundle forces c^r to be a coboundary; decide it exactly.
obstruction_result rank_obstruction(cohomology_cache& cc, const u1_cochain& c, const bigint& r);

// First Chern number of transition turns on a closed oriented surface:
// round the rational defect of the [0,1)-lift on each triangle and pair with
// the fundamental cycle.  Strict cocycles give 0; transition data sampled
// from a line bundle carries its curvature in the defects.
bigint chern_number(const simplicial_complex& k, const u1_cochain& transitions);

}  // namespace vectk
