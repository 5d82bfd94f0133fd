#include "vectk/graded.hpp"

#include <algorithm>
#include <cmath>

namespace vectk {

odd_map hat(const cmat& a) {
  const int n1 = static_cast<int>(a.rows());
  const int n0 = static_cast<int>(a.cols());
  odd_map h;
  h.space = {n0, n1};
  h.matrix = cmat::Zero(n0 + n1, n0 + n1);
  h.matrix.block(n0, 0, n1, n0) = a;
  h.matrix.block(0, n0, n0, n1) = a.adjoint();
  return h;
}

eig_result hermitian_eig(const cmat& m, double eps_herm) {
  if (m.rows() != m.cols()) fail(errc::not_hermitian, "matrix is not square");
  if (m.size() == 0) return {dvec(0), cmat(0, 0)};
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > eps_herm)
    fail(errc::not_hermitian, "symmetry defect " + std::to_string(defect) + " exceeds tolerance");
  Eigen::SelfAdjointEigenSolver<cmat> solver(m);
  if (m.size() > 0 && solver.info() != Eigen::Success)
    fail(errc::internal, "eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

graded_subspace low_spectrum(const odd_map& h, double mu, const tolerances& tol) {
  const int n0 = h.space.dim_even;
  const int n1 = h.space.dim_odd;
  const cmat a = h.lower_block();
  // h^2 = diag(A*A, AA*); decompose per block so the basis is homogeneous.
  eig_result even = hermitian_eig(cmat(a.adjoint() * a), tol.eps_herm);
  eig_result odd = hermitian_eig(cmat(a * a.adjoint()), tol.eps_herm);

  for (const auto& vals : {even.values, odd.values})
    for (int i = 0; i < vals.size(); ++i)
      if (std::abs(vals[i] - mu) <= tol.gap_tol)
        fail(errc::cutoff_on_spectrum, "cutoff lies within gap_tol of an eigenvalue of h^2");

  std::vector<int> keep_even, keep_odd;
  for (int i = 0; i < even.values.size(); ++i)
    if (even.values[i] < mu) keep_even.push_back(i);
  for (int i = 0; i < odd.values.size(); ++i)
    if (odd.values[i] < mu) keep_odd.push_back(i);

  graded_subspace s;
  s.ambient = h.space;
  s.dim_even = static_cast<int>(keep_even.size());
  s.dim_odd = static_cast<int>(keep_odd.size());
  s.basis = cmat::Zero(n0 + n1, s.total());
  s.labels = dvec(s.total());
  int c = 0;
  for (int i : keep_even) {
    s.basis.block(0, c, n0, 1) = even.vectors.col(i);
    s.labels[c++] = even.values[i];
  }
  for (int i : keep_odd) {
    s.basis.block(n0, c, n1, 1) = odd.vectors.col(i);
    s.labels[c++] = odd.values[i];
  }
  return s;
}

double select_gap(const std::vector<std::vector<double>>& spectra, double lambda_max,
                  double gap_tol) {
  if (spectra.empty()) fail(errc::bad_input, "select_gap: no spectra given");
  if (lambda_max <= 0) fail(errc::bad_input, "select_gap: lambda_max must be positive");

  std::vector<double> pts{0.0, lambda_max};
  for (const auto& s : spectra)
    for (double v : s)
      if (v <= lambda_max) pts.push_back(std::max(v, 0.0));
  std::sort(pts.begin(), pts.end());

  double best_lo = 0, best_hi = 0, best_w = 0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double w = pts[i + 1] - pts[i];
    if (w > best_w + 1e-15 && w > 2 * gap_tol) {
      best_w = w;
      best_lo = pts[i];
      best_hi = pts[i + 1];
    }
  }
  if (best_w == 0) fail(errc::no_gap, "no spectral gap wider than 2*gap_tol below lambda_max");
  return (best_lo + best_hi) / 2;
}

cmat orthogonal_project(const graded_subspace& sub, const graded_subspace& target) {
  if (!(sub.ambient == target.ambient))
    fail(errc::ambient_mismatch, "subspaces live in different graded spaces");
  return target.basis.adjoint() * sub.basis;
}

double op_norm(const cmat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return m.jacobiSvd().singularValues()[0];
}

}  // namespace vectk
