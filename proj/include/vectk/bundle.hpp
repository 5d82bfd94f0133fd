#pragma once

#include <memory>
#include <optional>

#include "vectk/cochain.hpp"
#include "vectk/graded.hpp"
#include "vectk/twist.hpp"

namespace vectk {

// Fiber of a local graded bundle at one sample point: graded dimensions, the
// Hermitian degree-1 map in the fiber basis (even coordinates first), and,
// when the bundle was cut out of an ambient family, the orthonormal ambient
// basis realizing the fiber as a graded subspace.
struct local_fiber {
  int r0 = 0;
  int r1 = 0;
  cmat h;                            // (r0+r1) x (r0+r1)
  std::optional<cmat> ambient;       // ambient_dim x (r0+r1), homogeneous columns
  std::optional<graded_space> ambient_space;
  int total() const { return r0 + r1; }
};

// (U, (E_a, h_a), phi_ab), possibly with a U(1) twist cocycle.
struct vectorial_bundle {
  std::shared_ptr<const simplicial_complex> base;
  // patch (vertex id) -> sample id -> fiber; defined on the star of the patch
  std::map<int, std::map<int, local_fiber>> fibers;
  // (to, from) -> sample id -> matrix from the `from` fiber to the `to` fiber
  std::map<std::pair<int, int>, std::map<int, cmat>> transitions;
  std::optional<u1_cochain> twist;
  bool verified = false;

  const local_fiber& fiber(int patch, int sample) const;
  const cmat* transition(int to, int from, int sample) const;  // null if absent
};

// Result of comparing two maps on the low spectrum of the source fiber.
struct doteq_point {
  double mu_agree = 0;  // kMuInfinite when the maps agree on the whole spectrum
  bool pass = false;
};

// mu_agree = largest admissible cutoff with ||(f - g) P_{<mu}|| < eps, where
// P projects onto the low spectrum of h_source; pass iff some positive
// admissible cutoff works.
doteq_point doteq_check(const cmat& f, const cmat& g, const cmat& h_source,
                        const tolerances& tol = {});

// samplewise comparison of two map families over a common domain
struct doteq_report {
  std::map<int, doteq_point> points;  // sample id -> result
  bool pass = true;
};
doteq_report doteq_check(const std::map<int, cmat>& f, const std::map<int, cmat>& g,
                         const std::map<int, cmat>& h_source, const tolerances& tol = {});

struct condition_result {
  std::string kind;          // "reflexive" | "pair" | "triple" | "intertwine" | ...
  std::vector<int> patches;
  int sample = -1;
  double mu_agree = kMuInfinite;
  bool pass = true;
  double defect = 0;         // strict-condition residual where applicable
};

struct verify_report {
  bool pass = true;
  double min_mu_agree = kMuInfinite;
  std::vector<condition_result> conditions;
  void add(condition_result r);
};

verify_report verify_vectorial(const vectorial_bundle& vb, const tolerances& tol = {});
verify_report verify_twisted(const vectorial_bundle& vb, const u1_cochain& c,
                             const tolerances& tol = {});

// Per-patch, per-sample degree-0 maps f_a : E_a -> E'_a.
using bundle_maps = std::map<int, std::map<int, cmat>>;

verify_report verify_homomorphism(const bundle_maps& f, const vectorial_bundle& src,
                                  const vectorial_bundle& dst, const tolerances& tol = {});
verify_report verify_isomorphism(const bundle_maps& f, const bundle_maps& f_back,
                                 const vectorial_bundle& src, const vectorial_bundle& dst,
                                 const tolerances& tol = {});

vectorial_bundle direct_sum(const vectorial_bundle& a, const vectorial_bundle& b);

// Sample points where some h_a drops below the singular-value threshold.
std::vector<int> support(const vectorial_bundle& vb, double tol);

// dim E^0 - dim E^1 of the full fiber, checked patch-independent and locally
// constant; one value per connected component of the base.
std::vector<int> graded_index(const vectorial_bundle& vb);

// Trivial rank-(r0, r1) bundle with h = 0 and identity transitions.
vectorial_bundle trivial_bundle(std::shared_ptr<const simplicial_complex> base, int r0, int r1);
inline vectorial_bundle zero_bundle(std::shared_ptr<const simplicial_complex> base) {
  return trivial_bundle(std::move(base), 0, 0);
}

// Conjugate every fiber by a unitary and transport h and phi accordingly.
vectorial_bundle gauge_transform(const vectorial_bundle& vb, const bundle_maps& unitaries);

// U(1) transition turns of a line bundle (fibers of rank (1,0) with ambient
// data): patch trivializations by projecting the patch's vertex-sample vector,
// evaluated at each edge's own barycenter sample, phases snapped to the
// 1/q_max grid.
u1_cochain extract_line_turns(const vectorial_bundle& vb, const tolerances& tol = {});

}  // namespace vectk
