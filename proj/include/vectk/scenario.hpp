#pragma once

#include "vectk/approx.hpp"

namespace vectk {

// Fully populated inputs plus the expected results frozen for tests and
// reports.
struct scenario {
  std::string name;
  std::shared_ptr<const simplicial_complex> base;
  std::optional<fredholm_family> family;
  std::optional<twisted_family> twisted;
  std::optional<vectorial_bundle> line_bundle;  // input bundle for kernel realization
  double lambda_max = 1.0;

  std::vector<int> expected_index;
  std::optional<int> expected_chern;
  std::vector<int> expected_support;      // sample ids
  std::optional<int> expected_dd_order;
  std::string orientation = "first ascending 2-simplex positive";
};

struct scenario_params {
  int circle_vertices = 12;    // flow-s1
  int kernel_even = 1;         // point-operator
  int kernel_odd = 1;
  std::uint64_t seed = 20240915;
};

scenario builtin_scenario(const std::string& name, const scenario_params& params = {});

// Minimal 6-vertex triangulation of the real projective plane.
simplicial_complex rp2_complex();

// Mapping cone of the degree-n covering of a 3-gon circle: a 2-complex with
// H^0 = Z, H^1 = 0, H^2 = Z/n.
simplicial_complex moore_complex(int n);

// Product complexes whose H^3 carries Z/n torsion (n = 2 uses RP^2 x S^1).
simplicial_complex torsion_test_complex(int n);

// An exact degree-2 U(1) cocycle of order exactly n in H^3 (n = the first
// torsion invariant), built from a division witness of the torsion generator.
u1_cochain synthesize_torsion_class(cohomology_cache& cc);

// Z/2-valued 1-cocycle that is not a mod-2 coboundary (one value per edge).
std::vector<int> f2_cocycle_generator(const simplicial_complex& k);

}  // namespace vectk
