#include "vectk/twist.hpp"

#include <cmath>
#include <numbers>

namespace vectk {

cmat unitary_lift_system::directed(const simplicial_complex& k, int a, int b) const {
  simplex e{std::min(a, b), std::max(a, b)};
  const int idx = k.index_of(e);
  if (idx < 0) fail(errc::bad_input, "lift requested on a non-edge");
  auto it = unitaries.find(idx);
  if (it == unitaries.end()) fail(errc::bad_input, "missing lift on edge " + std::to_string(idx));
  return a < b ? it->second : cmat(it->second.adjoint());
}

void validate_lifts(const simplicial_complex& k, const unitary_lift_system& lifts,
                    const tolerances& tol) {
  if (k.dim() < 1) return;
  for (int e = 0; e < k.count(1); ++e) {
    auto it = lifts.unitaries.find(e);
    if (it == lifts.unitaries.end()) fail(errc::bad_input, "lift system misses an edge");
    const cmat& u = it->second;
    if (u.rows() != lifts.rank || u.cols() != lifts.rank)
      fail(errc::shape_mismatch, "lift has wrong rank");
    const double defect = (u.adjoint() * u - cmat::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
    if (defect > tol.eps_orth * 10)
      fail(errc::bad_input, "lift is not unitary (defect " + std::to_string(defect) + ")");
  }
}

namespace {

// nearest rational with denominator <= q_max, turn distance measured mod 1
std::optional<bigrat> recognize_turn(double t, int q_max, double eps) {
  double best_err = eps;
  std::optional<bigrat> best;
  for (int q = 1; q <= q_max; ++q) {
    const double scaled = t * q;
    const long long p = std::llround(scaled);
    const double err = std::abs(scaled - static_cast<double>(p)) / q;
    if (err < best_err) {
      best_err = err;
      best = normalize_turn(bigrat(bigint(p), bigint(q)));
    }
  }
  return best;
}

}  // namespace

u1_cochain dd_cocycle(const simplicial_complex& k, const unitary_lift_system& lifts,
                      const tolerances& tol) {
  validate_lifts(k, lifts, tol);
  u1_cochain c = zero_u1_cochain(k, 2);
  if (k.dim() < 2) return c;
  const auto& tris = k.simplices(2);
  for (size_t t = 0; t < tris.size(); ++t) {
    const int a = tris[t][0], b = tris[t][1], g = tris[t][2];
    const cmat m = lifts.directed(k, a, b) * lifts.directed(k, b, g) * lifts.directed(k, a, g).adjoint();
    const cxd s = m.trace() / static_cast<double>(lifts.rank);
    const double defect = (m - s * cmat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
    if (defect > tol.eps_scalar || std::abs(std::abs(s) - 1.0) > tol.eps_scalar)
      fail(errc::not_projectively_flat,
           "triple product on triangle " + k.sample_key(k.sample_id(tris[t])) + " is not a scalar unitary");
    const double turn = std::atan2(s.imag(), s.real()) / (2 * std::numbers::pi);
    auto q = recognize_turn(turn, tol.q_max, tol.eps_scalar);
    if (!q)
      fail(errc::irrational_phase, "no rational phase with denominator <= " +
                                       std::to_string(tol.q_max) + " on triangle " +
                                       k.sample_key(k.sample_id(tris[t])));
    c.turns[t] = *q;
  }
  if (!u1_is_cocycle(k, c))
    fail(errc::irrational_phase, "recognized phases are not a cocycle; denominators too coarse");
  return c;
}

dd_class_info dd_class(cohomology_cache& cc, const u1_cochain& c) {
  if (c.degree != 2) fail(errc::degree_out_of_range, "dd_class expects a degree-2 cochain");
  auto z = connecting_to_integer(cc, c);
  auto cls = cc.integer_class(z);
  return {std::move(cls.coords), c};
}

obstruction_result rank_obstruction(cohomology_cache& cc, const u1_cochain& c, const bigint& r) {
  if (r <= 0) fail(errc::bad_input, "rank must be positive");
  if (!u1_is_cocycle(cc.complex(), c)) fail(errc::not_a_cocycle, "not a U(1) cocycle");
  auto b = solve_u1_coboundary(cc, u1_scale(c, r));
  if (!b) return {false, std::nullopt};
  return {true, std::move(*b)};
}

bigint chern_number(const simplicial_complex& k, const u1_cochain& transitions) {
  if (transitions.degree != 1) fail(errc::degree_out_of_range, "transitions must have degree 1");
  if (static_cast<int>(transitions.turns.size()) != k.count(1))
    fail(errc::bad_input, "cochain has wrong length");
  const std::vector<int> orientation = k.fundamental_surface_cycle();
  const auto& tris = k.simplices(2);
  bigint total = 0;
  for (size_t t = 0; t < tris.size(); ++t) {
    const simplex& s = tris[t];
    // defect of the [0,1) lift on this triangle
    bigrat d = 0;
    int sign = 1;
    for (size_t j = 0; j < 3; ++j) {
      simplex e;
      for (size_t i = 0; i < 3; ++i)
        if (i != j) e.push_back(s[i]);
      const bigrat turn = normalize_turn(transitions.turns[k.index_of(e)]);
      d += sign > 0 ? turn : -turn;
      sign = -sign;
    }
    // round to the nearest integer; a half-integer defect has no winding
    bigrat frac = d - bigrat(boost::multiprecision::numerator(d) / boost::multiprecision::denominator(d));
    if (frac < 0) frac += 1;
    bigint rounded;
    if (frac < bigrat(1, 2)) {
      const bigrat floor_part = d - frac;
      rounded = boost::multiprecision::numerator(floor_part);
    } else if (frac > bigrat(1, 2)) {
      const bigrat floor_part = d - frac;
      rounded = boost::multiprecision::numerator(floor_part) + 1;
    } else {
      fail(errc::not_a_cocycle, "transition defect is exactly half a turn on triangle " +
                                    k.sample_key(k.sample_id(s)));
    }
    total += orientation[t] * rounded;
  }
  return total;
}

}  // namespace vectk
