#pragma once

#include <vector>

#include "vectk/types.hpp"

namespace vectk {

// Finite Z2-graded Hermitian space C^{n0} (+) C^{n1} with the standard inner
// product.  Even vectors occupy the first n0 coordinates of the total space.
struct graded_space {
  int dim_even = 0;
  int dim_odd = 0;
  int total() const { return dim_even + dim_odd; }
  friend bool operator==(const graded_space&, const graded_space&) = default;
};

// Hermitian degree-1 map on a graded space: block form [[0, A*], [A, 0]]
// for some A : C^{n0} -> C^{n1}.
struct odd_map {
  graded_space space;
  cmat matrix;  // (n0+n1) x (n0+n1), Hermitian, off-diagonal blocks only

  // The lower-left block A (odd <- even).
  cmat lower_block() const {
    return matrix.block(space.dim_even, 0, space.dim_odd, space.dim_even);
  }
};

// Subspace of a graded space with an orthonormal basis of homogeneous
// vectors (even columns first) and one h^2-eigenvalue label per column.
struct graded_subspace {
  graded_space ambient;
  int dim_even = 0;
  int dim_odd = 0;
  cmat basis;   // ambient.total() x (dim_even + dim_odd)
  dvec labels;  // eigenvalues of h^2, one per basis column
  int total() const { return dim_even + dim_odd; }
};

odd_map hat(const cmat& a);

// Eigendecomposition of a Hermitian matrix: ascending eigenvalues, orthonormal
// eigenvectors.  Throws not_hermitian when the symmetry defect exceeds eps.
struct eig_result {
  dvec values;
  cmat vectors;
};
eig_result hermitian_eig(const cmat& m, double eps_herm = 1e-9);

// Span of all eigenvectors of h^2 with eigenvalue < mu.  The basis is
// homogeneous because h^2 is block diagonal.  mu must stay gap_tol away
// from the spectrum of h^2.
graded_subspace low_spectrum(const odd_map& h, double mu, const tolerances& tol = {});

// Midpoint of the widest interval below lambda_max that avoids every input
// spectrum by more than gap_tol on each side.  Ties resolve to the lowest
// such interval.
double select_gap(const std::vector<std::vector<double>>& spectra, double lambda_max,
                  double gap_tol = 1e-6);

// Matrix of (orthogonal projection onto target) o (inclusion of sub) in the
// two bases; degree 0 by homogeneity of the bases.
cmat orthogonal_project(const graded_subspace& sub, const graded_subspace& target);

// Spectral norm, via SVD.
double op_norm(const cmat& m);

}  // namespace vectk
