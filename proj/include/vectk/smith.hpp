#pragma once

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace vectk {

using bigint = boost::multiprecision::cpp_int;
using bigrat = boost::multiprecision::cpp_rational;

// Dense arbitrary-precision integer matrix, row major.
struct imat {
  int rows = 0;
  int cols = 0;
  std::vector<bigint> a;

  imat() = default;
  imat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  bigint& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const bigint& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
  static imat identity(int n);
};

imat imul(const imat& x, const imat& y);
std::vector<bigint> imul(const imat& x, const std::vector<bigint>& v);

// U * M * V = D with U, V unimodular and D diagonal, d1 | d2 | ... and di >= 0.
// u_inv and v_inv are tracked alongside so quotient computations can change
// basis without a separate inversion.
struct smith_form {
  imat d, u, v, u_inv, v_inv;
  int rank = 0;                  // number of nonzero diagonal entries
  std::vector<bigint> diagonal;  // the nonzero entries, in order
};

smith_form smith_normal_form(const imat& m);

// Integer solution of M x = b, via a precomputed Smith form of M.
std::optional<std::vector<bigint>> solve_integer(const smith_form& s, const std::vector<bigint>& b);

// Columns spanning the integer kernel of M (a basis over Z).
std::vector<std::vector<bigint>> integer_kernel(const smith_form& s);

// Exact determinant (Bareiss).  For unimodularity checks in tests.
bigint integer_det(const imat& m);

}  // namespace vectk
