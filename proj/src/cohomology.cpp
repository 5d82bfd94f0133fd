#include "vectk/cohomology.hpp"

#include <algorithm>

namespace vectk {

bool class_coordinates::is_zero() const {
  for (const auto& x : free_coords)
    if (x != 0) return false;
  for (const auto& x : torsion_coords)
    if (x != 0) return false;
  return true;
}

bigint class_coordinates::order() const {
  for (const auto& x : free_coords)
    if (x != 0) return 0;
  bigint ord = 1;
  for (size_t i = 0; i < torsion_coords.size(); ++i) {
    if (torsion_coords[i] == 0) continue;
    bigint d = torsion_factors[i] / boost::multiprecision::gcd(torsion_factors[i], torsion_coords[i]);
    ord = boost::multiprecision::lcm(ord, d);
  }
  return ord;
}

namespace {
bigint positive_mod(const bigint& x, const bigint& d) {
  bigint r = x % d;
  if (r < 0) r += d;
  return r;
}
}  // namespace

// Everything needed to reduce a k-cocycle to coordinates in H^k:
// kernel basis of delta_k (columns of V past the rank), image of delta_{k-1}
// in those coordinates, and the Smith form of that image matrix.
struct cohomology_cache::quotient_data {
  int degree = 0;
  int kernel_dim = 0;
  smith_form snf_up;      // of delta_degree, defines the kernel
  imat image_in_kernel;   // coordinates of im(delta_{degree-1}) in the kernel basis
  smith_form snf_image;   // quotient structure
  std::vector<int> free_rows;                  // rows of t = U_C y that stay free
  std::vector<std::pair<int, bigint>> torsion_rows;  // (row, invariant factor > 1)
};

const smith_form& cohomology_cache::coboundary_snf(int degree) {
  auto it = snf_.find(degree);
  if (it != snf_.end()) return it->second;
  const int nk = k_->count(degree);
  imat m = (degree >= 0 && degree < k_->dim()) ? k_->coboundary_matrix(degree)
                                               : imat(k_->count(degree + 1), nk);
  return snf_.emplace(degree, smith_normal_form(m)).first->second;
}

const cohomology_cache::quotient_data& cohomology_cache::quotient(int degree) {
  auto it = quotients_.find(degree);
  if (it != quotients_.end()) return *it->second;
  // degrees above the dimension degrade to trivial groups
  if (degree < 0) fail(errc::degree_out_of_range, "cohomology degree must be nonnegative");

  auto q = std::make_shared<quotient_data>();
  q->degree = degree;
  q->snf_up = coboundary_snf(degree);
  const int nk = k_->count(degree);
  q->kernel_dim = nk - q->snf_up.rank;

  // image of delta_{degree-1}, written in the kernel basis: the top rank rows
  // of V^-1 * B vanish because delta o delta = 0.
  imat b = degree > 0 && degree - 1 < k_->dim() ? k_->coboundary_matrix(degree - 1)
                                                : imat(nk, degree > 0 ? k_->count(degree - 1) : 0);
  imat w = imul(q->snf_up.v_inv, b);
  q->image_in_kernel = imat(q->kernel_dim, b.cols);
  for (int r = 0; r < q->kernel_dim; ++r)
    for (int c = 0; c < b.cols; ++c)
      q->image_in_kernel.at(r, c) = w.at(q->snf_up.rank + r, c);

  q->snf_image = smith_normal_form(q->image_in_kernel);
  const int n = std::min(q->snf_image.d.rows, q->snf_image.d.cols);
  for (int i = 0; i < q->kernel_dim; ++i) {
    const bigint di = i < n ? q->snf_image.d.at(i, i) : bigint(0);
    if (di == 0)
      q->free_rows.push_back(i);
    else if (di > 1)
      q->torsion_rows.emplace_back(i, di);
  }
  quotients_[degree] = q;
  return *q;
}

integer_cochain cohomology_cache::coboundary(const integer_cochain& c) {
  if (c.degree < 0) fail(errc::degree_out_of_range, "cochain degree out of range");
  if (static_cast<int>(c.values.size()) != k_->count(c.degree))
    fail(errc::bad_input, "cochain has wrong length");
  integer_cochain out{c.degree + 1, std::vector<bigint>(k_->count(c.degree + 1))};
  if (c.degree >= k_->dim()) return out;
  imat m = k_->coboundary_matrix(c.degree);
  out.values = imul(m, c.values);
  return out;
}

bool cohomology_cache::is_cocycle(const integer_cochain& c) {
  auto d = coboundary(c);
  return std::all_of(d.values.begin(), d.values.end(), [](const bigint& x) { return x == 0; });
}

cohomology_group cohomology_cache::cohomology(int degree) {
  const auto& q = quotient(degree);
  cohomology_group g;
  g.degree = degree;
  g.free_rank = static_cast<int>(q.free_rows.size());
  const int nk = k_->count(degree);

  // representative for quotient coordinate t = e_row: y = U_C^-1 e_row,
  // cocycle = kernel basis applied to y
  auto representative = [&](int row) {
    integer_cochain rep{degree, std::vector<bigint>(nk)};
    for (int i = 0; i < q.kernel_dim; ++i) {
      const bigint& yi = q.snf_image.u_inv.at(i, row);
      if (yi == 0) continue;
      for (int r = 0; r < nk; ++r) rep.values[r] += q.snf_up.v.at(r, q.snf_up.rank + i) * yi;
    }
    return rep;
  };

  for (const auto& [row, d] : q.torsion_rows) {
    g.torsion.push_back(d);
    g.torsion_reps.push_back(representative(row));
  }
  for (int row : q.free_rows) g.free_reps.push_back(representative(row));
  return g;
}

integer_class_result cohomology_cache::integer_class(const integer_cochain& c) {
  if (!is_cocycle(c)) fail(errc::not_a_cocycle, "integer cochain is not a cocycle");
  const auto& q = quotient(c.degree);

  // kernel coordinates
  std::vector<bigint> w = imul(q.snf_up.v_inv, c.values);
  for (int i = 0; i < q.snf_up.rank; ++i)
    if (w[i] != 0) fail(errc::internal, "cocycle outside kernel span");
  std::vector<bigint> y(w.begin() + q.snf_up.rank, w.end());
  std::vector<bigint> t = imul(q.snf_image.u, y);

  integer_class_result res;
  for (const auto& [row, d] : q.torsion_rows) {
    res.coords.torsion_coords.push_back(positive_mod(t[row], d));
    res.coords.torsion_factors.push_back(d);
  }
  for (int row : q.free_rows) res.coords.free_coords.push_back(t[row]);

  if (res.coords.is_zero()) {
    auto b = solve_coboundary(c);
    if (!b) fail(errc::internal, "zero class without coboundary witness");
    res.witness = std::move(*b);
  }
  return res;
}

std::optional<integer_cochain> cohomology_cache::solve_coboundary(const integer_cochain& c) {
  if (c.degree == 0) {
    // delta_{-1} is the zero map from the empty cochain group
    bool zero = std::all_of(c.values.begin(), c.values.end(), [](const bigint& x) { return x == 0; });
    if (!zero) return std::nullopt;
    return integer_cochain{-1, {}};
  }
  const auto& s = coboundary_snf(c.degree - 1);
  auto x = solve_integer(s, c.values);
  if (!x) return std::nullopt;
  return integer_cochain{c.degree - 1, std::move(*x)};
}

}  // namespace vectk
