#include "vectk/scenario.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace vectk {

simplicial_complex rp2_complex() {
  return simplicial_complex::from_maximal(
      6, {{0, 1, 4}, {0, 1, 5}, {0, 2, 3}, {0, 2, 5}, {0, 3, 4},
          {1, 2, 3}, {1, 2, 4}, {1, 3, 5}, {2, 4, 5}, {3, 4, 5}});
}

simplicial_complex moore_complex(int n) {
  if (n < 1) fail(errc::bad_input, "moore_complex needs n >= 1");
  const int k = 3;                      // base circle
  const int base0 = 0;                  // b_0..b_{k-1}
  const int mid0 = k;                   // m_0..m_{nk-1}
  const int hub = k + n * k;
  std::vector<simplex> tris;
  for (int i = 0; i < n * k; ++i) {
    const int b1 = base0 + i % k;
    const int b2 = base0 + (i + 1) % k;
    const int m1 = mid0 + i;
    const int m2 = mid0 + (i + 1) % (n * k);
    tris.push_back({b1, b2, m1});
    tris.push_back({m1, m2, b2});
    tris.push_back({m1, m2, hub});
  }
  return simplicial_complex::from_maximal(hub + 1, tris);
}

simplicial_complex torsion_test_complex(int n) {
  if (n == 2) return ordered_product(rp2_complex(), circle_complex(3));
  return ordered_product(moore_complex(n), circle_complex(3));
}

u1_cochain synthesize_torsion_class(cohomology_cache& cc) {
  auto h3 = cc.cohomology(3);
  if (h3.torsion.empty()) fail(errc::bad_input, "the complex has no degree-3 torsion");
  const bigint n = h3.torsion.front();
  const integer_cochain& z = h3.torsion_reps.front();

  // n [z] = 0, so n z = delta w for an integer w; w/n is the wanted cocycle
  integer_cochain nz{z.degree, z.values};
  for (auto& v : nz.values) v *= n;
  auto w = cc.solve_coboundary(nz);
  if (!w) fail(errc::internal, "torsion witness did not divide");
  u1_cochain c{2, std::vector<bigrat>(w->values.size())};
  for (size_t i = 0; i < w->values.size(); ++i) c.turns[i] = normalize_turn(bigrat(w->values[i], n));
  return c;
}

namespace {

// F2 Gaussian elimination; rows are dense 0/1 vectors.
struct f2_solver {
  std::vector<std::vector<int>> rows;
  std::vector<int> pivot_col;

  void reduce() {
    size_t r = 0;
    const size_t ncols = rows.empty() ? 0 : rows[0].size();
    for (size_t c = 0; c < ncols && r < rows.size(); ++c) {
      size_t sel = r;
      while (sel < rows.size() && rows[sel][c] == 0) ++sel;
      if (sel == rows.size()) continue;
      std::swap(rows[r], rows[sel]);
      for (size_t i = 0; i < rows.size(); ++i)
        if (i != r && rows[i][c])
          for (size_t j = 0; j < ncols; ++j) rows[i][j] ^= rows[r][j];
      pivot_col.push_back(static_cast<int>(c));
      ++r;
    }
    rows.resize(r);
  }
};

std::vector<std::vector<int>> f2_kernel_basis(const std::vector<std::vector<int>>& mat, int ncols) {
  f2_solver s;
  s.rows = mat;
  s.reduce();
  std::vector<bool> is_pivot(ncols, false);
  for (int c : s.pivot_col) is_pivot[c] = true;
  std::vector<std::vector<int>> basis;
  for (int free = 0; free < ncols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<int> v(ncols, 0);
    v[free] = 1;
    for (size_t r = 0; r < s.rows.size(); ++r)
      if (s.rows[r][free]) v[s.pivot_col[r]] = 1;
    basis.push_back(std::move(v));
  }
  return basis;
}

bool f2_in_image(const std::vector<std::vector<int>>& mat, int ncols,
                 const std::vector<int>& target) {
  // solve mat^T ... we solve M x = target where columns of M generate the image
  f2_solver s;
  s.rows.resize(target.size());
  for (size_t r = 0; r < target.size(); ++r) {
    s.rows[r] = mat.empty() ? std::vector<int>() : std::vector<int>(mat[0].size() + 1, 0);
    if (!mat.empty()) {
      for (size_t c = 0; c < mat[0].size(); ++c) s.rows[r][c] = mat[r][c];
      s.rows[r][mat[0].size()] = target[r];
    }
  }
  if (mat.empty() || mat[0].empty())
    return std::all_of(target.begin(), target.end(), [](int x) { return x == 0; });
  const size_t aug = mat[0].size();
  s.reduce();
  for (size_t r = 0; r < s.rows.size(); ++r) {
    bool lhs_zero = true;
    for (size_t c = 0; c < aug; ++c)
      if (s.rows[r][c]) lhs_zero = false;
    if (lhs_zero && s.rows[r][aug]) return false;
  }
  (void)ncols;
  return true;
}

}  // namespace

std::vector<int> f2_cocycle_generator(const simplicial_complex& k) {
  const int ne = k.count(1);
  std::vector<std::vector<int>> d1(k.count(2), std::vector<int>(ne, 0));
  for (int t = 0; t < k.count(2); ++t) {
    const simplex& s = k.simplices(2)[t];
    for (size_t j = 0; j < 3; ++j) {
      simplex e;
      for (size_t i = 0; i < 3; ++i)
        if (i != j) e.push_back(s[i]);
      d1[t][k.index_of(e)] = 1;
    }
  }
  std::vector<std::vector<int>> d0(ne, std::vector<int>(k.count(0), 0));
  for (int e = 0; e < ne; ++e) {
    d0[e][k.simplices(1)[e][0]] = 1;
    d0[e][k.simplices(1)[e][1]] = 1;
  }
  for (const auto& v : f2_kernel_basis(d1, ne))
    if (!f2_in_image(d0, k.count(0), v)) return v;
  fail(errc::bad_input, "complex has no mod-2 one-dimensional cohomology");
}

namespace {

cmat random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  cmat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cxd(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<cmat> qr(m);
  cmat q = qr.householderQ();
  // fix phases so the factorization is unique given the input
  cmat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const cxd d = r(i, i);
    if (std::abs(d) > 1e-12) q.col(i) *= d / std::abs(d);
  }
  return q;
}

scenario make_point_operator(const scenario_params& p) {
  scenario sc;
  sc.name = "point-operator";
  sc.base = std::make_shared<simplicial_complex>(
      simplicial_complex::from_maximal(1, {{0}}));
  const int rank = 2;
  const int n0 = p.kernel_even + rank;
  const int n1 = p.kernel_odd + rank;

  std::mt19937_64 rng(p.seed);
  cmat sigma = cmat::Zero(n1, n0);
  for (int i = 0; i < rank; ++i) sigma(i, i) = 0.7 + 0.4 * i;
  const cmat u = random_unitary(n1, rng);
  const cmat v = random_unitary(n0, rng);

  fredholm_family fam;
  fam.base = sc.base;
  fam.n0 = n0;
  fam.n1 = n1;
  fam.samples[0] = u * sigma * v.adjoint();
  sc.family = std::move(fam);
  sc.lambda_max = 0.25;  // below the smallest nonzero singular value squared
  sc.expected_index = {n0 - n1};
  sc.expected_support = {0};
  return sc;
}

scenario make_flow_s1(const scenario_params& p) {
  scenario sc;
  sc.name = "flow-s1";
  const int n = p.circle_vertices;
  sc.base = std::make_shared<simplicial_complex>(circle_complex(n));
  const auto& k = *sc.base;

  fredholm_family fam;
  fam.base = sc.base;
  fam.n0 = 1;
  fam.n1 = 1;
  for (int sid = 0; sid < k.sample_count(); ++sid) {
    const simplex& s = k.sample_simplex(sid);
    double x = 0, y = 0;
    for (int v : s) {
      x += std::cos(2 * std::numbers::pi * v / n);
      y += std::sin(2 * std::numbers::pi * v / n);
    }
    double theta = std::atan2(y, x);
    if (theta < 0) theta += 2 * std::numbers::pi;
    cmat a(1, 1);
    a(0, 0) = std::sin(theta / 2);  // vanishes transversally at theta = 0 only
    fam.samples[sid] = a;
  }
  sc.family = std::move(fam);
  sc.lambda_max = 1.5;
  sc.expected_index = {0};
  sc.expected_support = {k.sample_id({0})};
  return sc;
}

cvec sphere_section_north(double x, double y, double z) {
  cvec v(2);
  v << cxd(1 + z, 0), cxd(x, y);
  return v / v.norm();
}

cvec sphere_section_south(double x, double y, double z) {
  cvec v(2);
  v << cxd(x, -y), cxd(1 - z, 0);
  return v / v.norm();
}

scenario make_bott_s2(const scenario_params&) {
  scenario sc;
  sc.name = "bott-s2";
  sc.base = std::make_shared<simplicial_complex>(boundary_simplex(2));
  const auto& k = *sc.base;

  // regular tetrahedron inscribed in the unit sphere, vertex 0 at the pole
  const double r = 2 * std::sqrt(2.0) / 3;
  std::vector<std::array<double, 3>> coords{{0, 0, 1}};
  for (int j = 0; j < 3; ++j) {
    const double phi = 2 * std::numbers::pi * j / 3;
    coords.push_back({r * std::cos(phi), r * std::sin(phi), -1.0 / 3});
  }
  auto sample_point = [&](int sid) {
    const simplex& s = k.sample_simplex(sid);
    std::array<double, 3> m{0, 0, 0};
    for (int v : s)
      for (int i = 0; i < 3; ++i) m[i] += coords[v][i];
    const double len = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
    return std::array<double, 3>{m[0] / len, m[1] / len, m[2] / len};
  };

  // the +1 eigenline of x.sigma as a subbundle of the trivial C^2, with the
  // north gauge on patch 0 and the south gauge elsewhere
  vectorial_bundle e;
  e.base = sc.base;
  auto gauge = [&](int patch, int sid) {
    auto pt = sample_point(sid);
    return patch == 0 ? sphere_section_north(pt[0], pt[1], pt[2])
                      : sphere_section_south(pt[0], pt[1], pt[2]);
  };
  for (int v = 0; v < k.vertex_count(); ++v)
    for (int sid = 0; sid < k.sample_count(); ++sid) {
      const simplex& s = k.sample_simplex(sid);
      if (!std::binary_search(s.begin(), s.end(), v)) continue;
      local_fiber f;
      f.r0 = 1;
      f.r1 = 0;
      f.h = cmat::Zero(1, 1);
      cmat basis = cmat::Zero(3, 1);
      basis.block(0, 0, 2, 1) = gauge(v, sid);
      f.ambient = basis;
      f.ambient_space = graded_space{2, 1};
      e.fibers[v][sid] = std::move(f);
    }
  for (const auto& edge : k.simplices(1))
    for (int dir = 0; dir < 2; ++dir) {
      const int a = dir ? edge[1] : edge[0];
      const int b = dir ? edge[0] : edge[1];
      for (int sid = 0; sid < k.sample_count(); ++sid) {
        const simplex& s = k.sample_simplex(sid);
        if (!std::includes(s.begin(), s.end(), edge.begin(), edge.end())) continue;
        cmat t(1, 1);
        t(0, 0) = gauge(a, sid).dot(gauge(b, sid));
        e.transitions[{a, b}][sid] = t;
      }
    }
  e.verified = true;
  sc.line_bundle = e;
  sc.family = kernel_bundle_family(e);
  sc.lambda_max = 1.0;
  sc.expected_index = {1};
  sc.expected_chern = -1;
  for (int sid = 0; sid < k.sample_count(); ++sid) sc.expected_support.push_back(sid);
  return sc;
}

scenario make_pauli_torsion(const scenario_params&) {
  scenario sc;
  sc.name = "pauli-torsion";
  const simplicial_complex rp2 = rp2_complex();
  sc.base = std::make_shared<simplicial_complex>(ordered_product(rp2, circle_complex(3)));
  const auto& k = *sc.base;
  const int nl = 3;

  // mod-2 cocycles pulled back from the factors through the projections
  const std::vector<int> gen_rp2 = f2_cocycle_generator(rp2);
  auto rp2_edge_value = [&](int va, int vb) {
    const int pa = va / nl, pb = vb / nl;
    if (pa == pb) return 0;
    return gen_rp2[rp2.index_of({std::min(pa, pb), std::max(pa, pb)})];
  };
  auto s1_edge_value = [&](int va, int vb) {
    const int pa = va % nl, pb = vb % nl;
    if (pa == pb) return 0;
    // generator of the circle supported on the wrap edge {0, 2}
    return (std::min(pa, pb) == 0 && std::max(pa, pb) == nl - 1) ? 1 : 0;
  };

  cmat sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;

  unitary_lift_system lifts;
  lifts.rank = 2;
  for (int e = 0; e < k.count(1); ++e) {
    const simplex& edge = k.simplices(1)[e];
    cmat u = cmat::Identity(2, 2);
    if (s1_edge_value(edge[0], edge[1])) u = u * sx;
    if (rp2_edge_value(edge[0], edge[1])) u = u * sz;
    lifts.unitaries[e] = u;
  }

  // scalar section vanishing at the barycenter of the first triangle and
  // climbing through 0.6 on its star; scalars conjugate trivially, so every
  // patch carries the same local family.  With lambda_max = 2 the patches
  // that see the dip truncate above the whole local spectrum, so fiber
  // dimensions stay constant per patch.
  const simplex tri0 = k.simplices(2)[0];
  const int zero_sid = k.sample_id(tri0);
  auto meets_tri0 = [&](const simplex& s) {
    for (int v : s)
      if (std::binary_search(tri0.begin(), tri0.end(), v)) return true;
    return false;
  };
  twisted_family tf;
  tf.base = sc.base;
  tf.lifts = lifts;
  star_cover cover = make_star_cover(k);
  for (int v = 0; v < k.vertex_count(); ++v)
    for (int sid : cover.patch_samples[v]) {
      const double f =
          sid == zero_sid ? 0.0 : (meets_tri0(k.sample_simplex(sid)) ? 0.6 : 1.0);
      tf.patches[v][sid] = f * cmat::Identity(2, 2);
    }
  sc.twisted = std::move(tf);
  sc.lambda_max = 2.0;
  sc.expected_index = {0};
  sc.expected_support = {zero_sid};
  sc.expected_dd_order = 2;
  return sc;
}

}  // namespace

scenario builtin_scenario(const std::string& name, const scenario_params& params) {
  if (name == "point-operator") return make_point_operator(params);
  if (name == "flow-s1") return make_flow_s1(params);
  if (name == "bott-s2") return make_bott_s2(params);
  if (name == "pauli-torsion") return make_pauli_torsion(params);
  fail(errc::unknown_scenario, "unknown scenario '" + name + "'");
}

}  // namespace vectk
