#pragma once

#include "vectk/bundle.hpp"

namespace vectk {

// Sampled family of truncated Fredholm operators: one n1 x n0 matrix per
// sample point of the base.
struct fredholm_family {
  std::shared_ptr<const simplicial_complex> base;
  int n0 = 0;
  int n1 = 0;
  std::map<int, cmat> samples;  // sample id -> A_x
};

// Section of the adjoint Fredholm bundle for a lift system of rank r: local
// families per patch, compatible under conjugation by the lifts.  Lifts act
// on the hat space as diag(g, g), so the matrices are square.
struct twisted_family {
  std::shared_ptr<const simplicial_complex> base;
  unitary_lift_system lifts;
  std::map<int, std::map<int, cmat>> patches;  // patch -> sample -> A_p(x)
};

struct single_approximation {
  double mu = 0;
  graded_subspace space;  // inside the hat space of A
  cmat h;                 // hat(A) restricted, in the fiber basis
};

// Spectral truncation of one operator below an automatically selected gap.
single_approximation approximate_single(const cmat& a, double lambda_max,
                                        const tolerances& tol = {});

struct approx_result {
  vectorial_bundle bundle;
  std::map<int, double> mu_per_patch;
  verify_report verification;
  std::vector<std::pair<int, int>> spectra_jumps;  // Lipschitz diagnostic, sample id pairs
};

// Per patch: cutoff from the sampled spectra of the whole star, fibers by
// fiberwise truncation, transitions by inclusion-then-projection.
approx_result approximate_family(const fredholm_family& f, double lambda_max,
                                 const tolerances& tol = {});

// Twisted version: local families per patch, transitions routed through the
// lift action; the result carries the lifts' Dixmier-Douady cocycle.
approx_result approximate_twisted_family(const twisted_family& t, double lambda_max,
                                         const tolerances& tol = {});

// Realize a strict graded bundle (ambient fibers, h = 0) as the kernel family
// of partial isometries with sigma(hat(A)^2) = {0, 1}.
fredholm_family kernel_bundle_family(const vectorial_bundle& e, const tolerances& tol = {});

// The truncated-model index n0 - n1, one value per connected component.
std::vector<int> index_of_family(const fredholm_family& f);

}  // namespace vectk
