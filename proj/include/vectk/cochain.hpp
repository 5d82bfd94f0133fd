#pragma once

#include <optional>
#include <string>

#include "vectk/cohomology.hpp"

namespace vectk {

// U(1)-valued Cech k-cochain with exact rational phases: one turn q in [0,1)
// per ascending k-simplex (phase e^{2 pi i q}), antisymmetric under vertex
// transpositions, group law additive modulo 1.
struct u1_cochain {
  int degree = 0;
  std::vector<bigrat> turns;

  friend bool operator==(const u1_cochain&, const u1_cochain&) = default;
};

bigrat normalize_turn(const bigrat& q);          // representative in [0, 1)
bigrat centered_turn(const bigrat& q);           // representative in (-1/2, 1/2]
std::string turn_to_string(const bigrat& q);     // "p/q" reduced, "0" for zero
bigrat turn_from_string(const std::string& s);

u1_cochain zero_u1_cochain(const simplicial_complex& k, int degree);
u1_cochain u1_scale(const u1_cochain& c, const bigint& r);  // turns r*q mod 1
u1_cochain u1_add(const u1_cochain& a, const u1_cochain& b);

// Alternating sum of face turns modulo 1; same sign convention as the integer
// coboundary matrix.
u1_cochain u1_delta(const simplicial_complex& k, const u1_cochain& c);
bool u1_is_cocycle(const simplicial_complex& k, const u1_cochain& c);

// b with delta b = c exactly when c is a coboundary of Q/Z-valued cochains;
// decided through the Smith form of the integer coboundary matrix.
std::optional<u1_cochain> solve_u1_coboundary(cohomology_cache& cc, const u1_cochain& c);

// Lift turns to [0,1)-rationals, apply delta with integer coefficients; the
// result is integral precisely because c is a cocycle.
integer_cochain connecting_to_integer(cohomology_cache& cc, const u1_cochain& c);

}  // namespace vectk
