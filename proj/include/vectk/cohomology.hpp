#pragma once

#include <memory>
#include <optional>

#include "vectk/complex.hpp"
#include "vectk/smith.hpp"

namespace vectk {

// Integer k-cochain: one value per ascending k-simplex (the value on a
// permuted tuple is the permutation sign times the stored value).
struct integer_cochain {
  int degree = 0;
  std::vector<bigint> values;
};

struct cohomology_group {
  int degree = 0;
  int free_rank = 0;
  std::vector<bigint> torsion;  // invariant factors, each > 1, d1 | d2 | ...
  std::vector<integer_cochain> free_reps;
  std::vector<integer_cochain> torsion_reps;
};

struct class_coordinates {
  std::vector<bigint> free_coords;
  std::vector<bigint> torsion_coords;   // reduced into [0, d_i)
  std::vector<bigint> torsion_factors;  // the corresponding d_i
  bool is_zero() const;
  // order of the class; 0 means infinite
  bigint order() const;
};

struct integer_class_result {
  class_coordinates coords;
  // present iff the class vanishes: b of degree k-1 with delta b = c, exact
  std::optional<integer_cochain> witness;
};

// Caches coboundary Smith forms per degree; all answers are exact.
class cohomology_cache {
 public:
  explicit cohomology_cache(std::shared_ptr<const simplicial_complex> k) : k_(std::move(k)) {}

  const simplicial_complex& complex() const { return *k_; }
  const smith_form& coboundary_snf(int degree);  // SNF of delta_degree

  cohomology_group cohomology(int degree);
  integer_class_result integer_class(const integer_cochain& c);

  // delta applied to an integer cochain
  integer_cochain coboundary(const integer_cochain& c);
  bool is_cocycle(const integer_cochain& c);

  // integer solution b of delta b = c (exact), when one exists
  std::optional<integer_cochain> solve_coboundary(const integer_cochain& c);

 private:
  struct quotient_data;  // kernel/image bookkeeping per degree
  const quotient_data& quotient(int degree);

  std::shared_ptr<const simplicial_complex> k_;
  std::map<int, smith_form> snf_;
  std::map<int, std::shared_ptr<quotient_data>> quotients_;
};

}  // namespace vectk
