#pragma once

#include "vectk/approx.hpp"

namespace vectk {

// Computable shadow of a vectorial-bundle class: the twist class and the
// graded index per connected component.  `point_complete` marks bases where
// these invariants are complete (a single point, where the graded index is
// the Fredholm index).
struct k_class_descriptor {
  class_coordinates twist;
  std::vector<int> index;
  bool point_complete = false;
  std::string provenance;
  std::string witness_tag;  // descriptors with equal non-empty tags are isomorphic
};

struct formal_difference {
  std::vector<k_class_descriptor> plus;
  std::vector<k_class_descriptor> minus;
};

k_class_descriptor class_of(cohomology_cache& cc, const vectorial_bundle& vb,
                            const std::string& provenance = "");

formal_difference make_difference(k_class_descriptor d);
formal_difference add(const formal_difference& a, const formal_difference& b);
formal_difference negate(const formal_difference& a);

// net invariants of a difference
std::vector<int> net_index(const formal_difference& a);

enum class equality_verdict { equal, distinct, unknown };
equality_verdict equals(const formal_difference& a, const formal_difference& b);

}  // namespace vectk
