#include "vectk/approx.hpp"

#include <algorithm>

#include "vectk/parallel.hpp"

namespace vectk {

namespace {

std::vector<double> spectrum_of_hat_squared(const cmat& a, const tolerances& tol) {
  eig_result even = hermitian_eig(cmat(a.adjoint() * a), tol.eps_herm);
  eig_result odd = hermitian_eig(cmat(a * a.adjoint()), tol.eps_herm);
  std::vector<double> s;
  for (int i = 0; i < even.values.size(); ++i) s.push_back(std::max(0.0, even.values[i]));
  for (int i = 0; i < odd.values.size(); ++i) s.push_back(std::max(0.0, odd.values[i]));
  std::sort(s.begin(), s.end());
  return s;
}

local_fiber fiber_from_subspace(const odd_map& h, const graded_subspace& sub) {
  local_fiber f;
  f.r0 = sub.dim_even;
  f.r1 = sub.dim_odd;
  f.h = sub.basis.adjoint() * h.matrix * sub.basis;
  f.ambient = sub.basis;
  f.ambient_space = sub.ambient;
  return f;
}

}  // namespace

single_approximation approximate_single(const cmat& a, double lambda_max, const tolerances& tol) {
  const odd_map h = hat(a);
  const double mu = select_gap({spectrum_of_hat_squared(a, tol)}, lambda_max, tol.gap_tol);
  single_approximation out;
  out.mu = mu;
  out.space = low_spectrum(h, mu, tol);
  out.h = out.space.basis.adjoint() * h.matrix * out.space.basis;
  return out;
}

namespace {

struct patch_setup {
  // per sample of the patch: the hat operator and its truncation
  std::map<int, odd_map> hats;
  double mu = 0;
};

// shared assembly for the plain and twisted constructions
approx_result assemble(std::shared_ptr<const simplicial_complex> base,
                       const std::function<cmat(int patch, int sample)>& local_matrix,
                       const std::function<cmat(int to, int from)>& hat_lift,
                       std::optional<u1_cochain> twist, double lambda_max,
                       const tolerances& tol) {
  const simplicial_complex& k = *base;
  approx_result res;
  res.bundle.base = base;
  res.bundle.twist = std::move(twist);

  star_cover cover = make_star_cover(k);

  // cutoff per patch from all sampled spectra of its star
  std::vector<std::map<int, graded_subspace>> patch_fibers(k.vertex_count());
  std::vector<double> mus(k.vertex_count());
  std::vector<std::string> gap_errors(k.vertex_count());
  parallel_for(k.vertex_count(), tol.jobs, [&](int v) {
    std::vector<std::vector<double>> spectra;
    for (int sid : cover.patch_samples[v])
      spectra.push_back(spectrum_of_hat_squared(local_matrix(v, sid), tol));
    double mu;
    try {
      mu = select_gap(spectra, lambda_max, tol.gap_tol);
    } catch (const error& e) {
      gap_errors[v] = e.what();
      return;
    }
    mus[v] = mu;
    for (int sid : cover.patch_samples[v]) {
      const odd_map h = hat(local_matrix(v, sid));
      patch_fibers[v][sid] = low_spectrum(h, mu, tol);
    }
  });
  for (int v = 0; v < k.vertex_count(); ++v)
    if (!gap_errors[v].empty())
      fail(errc::no_gap, "patch " + std::to_string(v) + ": " + gap_errors[v]);

  for (int v = 0; v < k.vertex_count(); ++v) {
    res.mu_per_patch[v] = mus[v];
    int r0 = -1, r1 = -1;
    for (int sid : cover.patch_samples[v]) {
      const graded_subspace& sub = patch_fibers[v][sid];
      if (r0 < 0) {
        r0 = sub.dim_even;
        r1 = sub.dim_odd;
      } else if (sub.dim_even != r0 || sub.dim_odd != r1) {
        fail(errc::no_gap, "patch " + std::to_string(v) +
                               ": fiber dimension jumps between samples; sampling too coarse "
                               "for the selected gap");
      }
      const odd_map h = hat(local_matrix(v, sid));
      res.bundle.fibers[v][sid] = fiber_from_subspace(h, sub);
    }
  }

  // transitions on ordered overlaps: project the `from` fiber through the
  // lift action into the `to` fiber
  if (k.dim() >= 1)
    for (const auto& e : k.simplices(1))
      for (int dir = 0; dir < 2; ++dir) {
        const int to = dir ? e[1] : e[0];
        const int from = dir ? e[0] : e[1];
        const cmat g = hat_lift(to, from);
        for (int sid : cover.overlap_samples(e)) {
          const graded_subspace& st = patch_fibers[to][sid];
          const graded_subspace& sf = patch_fibers[from][sid];
          res.bundle.transitions[{to, from}][sid] =
              g.rows() > 0 ? cmat(st.basis.adjoint() * g * sf.basis)
                           : cmat(st.basis.adjoint() * sf.basis);
        }
      }

  // optional diagnostic: neighboring samples whose spectra differ too much
  if (tol.lipschitz_bound > 0 && k.dim() >= 1) {
    for (const auto& e : k.simplices(1)) {
      const int sa = k.sample_id({e[0]});
      const int sb = k.sample_id({e[1]});
      const int se = k.sample_id(e);
      auto jump = [&](int patch, int x, int y) {
        auto s1 = spectrum_of_hat_squared(local_matrix(patch, x), tol);
        auto s2 = spectrum_of_hat_squared(local_matrix(patch, y), tol);
        double d = 0;
        for (size_t i = 0; i < s1.size() && i < s2.size(); ++i)
          d = std::max(d, std::abs(s1[i] - s2[i]));
        return d;
      };
      if (jump(e[0], sa, se) > tol.lipschitz_bound) res.spectra_jumps.emplace_back(sa, se);
      if (jump(e[1], se, sb) > tol.lipschitz_bound) res.spectra_jumps.emplace_back(se, sb);
    }
  }

  res.verification = res.bundle.twist ? verify_twisted(res.bundle, *res.bundle.twist, tol)
                                      : verify_vectorial(res.bundle, tol);
  res.bundle.verified = res.verification.pass;
  return res;
}

}  // namespace

approx_result approximate_family(const fredholm_family& f, double lambda_max,
                                 const tolerances& tol) {
  const simplicial_complex& k = *f.base;
  for (int sid = 0; sid < k.sample_count(); ++sid) {
    auto it = f.samples.find(sid);
    if (it == f.samples.end())
      fail(errc::bad_input, "family misses sample " + k.sample_key(sid));
    if (it->second.rows() != f.n1 || it->second.cols() != f.n0)
      fail(errc::shape_mismatch, "family matrix at " + k.sample_key(sid) + " has wrong shape");
  }
  return assemble(
      f.base, [&](int, int sid) { return f.samples.at(sid); },
      [&](int, int) { return cmat(); }, std::nullopt, lambda_max, tol);
}

approx_result approximate_twisted_family(const twisted_family& t, double lambda_max,
                                         const tolerances& tol) {
  const simplicial_complex& k = *t.base;
  const int r = t.lifts.rank;
  star_cover cover = make_star_cover(k);
  for (int v = 0; v < k.vertex_count(); ++v) {
    auto p = t.patches.find(v);
    if (p == t.patches.end()) fail(errc::bad_input, "twisted family misses patch " + std::to_string(v));
    for (int sid : cover.patch_samples[v]) {
      auto it = p->second.find(sid);
      if (it == p->second.end())
        fail(errc::bad_input, "patch " + std::to_string(v) + " misses sample " + k.sample_key(sid));
      if (it->second.rows() != r || it->second.cols() != r)
        fail(errc::shape_mismatch, "twisted local family must be rank x rank");
    }
  }

  // compatibility: A_p = g_pq A_q g_pq^{-1} at shared samples
  if (k.dim() >= 1)
    for (const auto& e : k.simplices(1))
      for (int sid : cover.overlap_samples(e)) {
        const cmat g = t.lifts.directed(k, e[0], e[1]);
        const cmat& ap = t.patches.at(e[0]).at(sid);
        const cmat& aq = t.patches.at(e[1]).at(sid);
        const double defect = (ap - g * aq * g.adjoint()).cwiseAbs().maxCoeff();
        if (defect > tol.eps_compat)
          fail(errc::incompatible_section,
               "local families incompatible on edge " + k.sample_key(k.sample_id(e)) +
                   " at sample " + k.sample_key(sid) + " (defect " + std::to_string(defect) + ")");
      }

  u1_cochain c = dd_cocycle(k, t.lifts, tol);
  return assemble(
      t.base, [&](int v, int sid) { return t.patches.at(v).at(sid); },
      [&](int to, int from) {
        const cmat g = t.lifts.directed(k, to, from);
        cmat gh = cmat::Zero(2 * r, 2 * r);
        gh.topLeftCorner(r, r) = g;
        gh.bottomRightCorner(r, r) = g;
        return gh;
      },
      c, lambda_max, tol);
}

fredholm_family kernel_bundle_family(const vectorial_bundle& e, const tolerances& tol) {
  const simplicial_complex& k = *e.base;
  fredholm_family out;
  out.base = e.base;

  // every patch at a sample must cut out the same ambient subspaces
  struct sample_data {
    cmat even;  // orthonormal basis of the even subspace in C^{n0}
    cmat odd;
  };
  std::map<int, sample_data> spans;
  graded_space ambient{-1, -1};
  for (int sid = 0; sid < k.sample_count(); ++sid) {
    const simplex& s = k.sample_simplex(sid);
    sample_data data;
    bool first = true;
    for (int v : s) {
      const local_fiber& f = e.fiber(v, sid);
      if (!f.ambient || !f.ambient_space)
        fail(errc::bad_input, "kernel realization needs ambient fiber data");
      if (ambient.dim_even < 0) ambient = *f.ambient_space;
      if (!(*f.ambient_space == ambient))
        fail(errc::ambient_mismatch, "fibers live in different ambient spaces");
      if (f.total() > 0 && op_norm(f.h) > tol.eps_doteq)
        fail(errc::bad_input, "kernel realization expects h = 0");
      cmat ev = f.ambient->leftCols(f.r0).topRows(ambient.dim_even);
      cmat od = f.ambient->rightCols(f.r1).bottomRows(ambient.dim_odd);
      if (first) {
        data.even = ev;
        data.odd = od;
        first = false;
      } else {
        // strictness: spans must agree across patches
        const double d_even = ev.cols() != data.even.cols()
                                  ? kMuInfinite
                                  : op_norm(ev * ev.adjoint() - data.even * data.even.adjoint());
        const double d_odd = od.cols() != data.odd.cols()
                                  ? kMuInfinite
                                  : op_norm(od * od.adjoint() - data.odd * data.odd.adjoint());
        if (std::max(d_even, d_odd) > 1e-7)
          fail(errc::bad_input, "fibers of different patches disagree at sample " +
                                    k.sample_key(sid) + "; the bundle is not strict");
      }
    }
    spans[sid] = std::move(data);
  }

  const int n0 = ambient.dim_even;
  const int n1 = ambient.dim_odd;
  int r0 = -1, r1 = -1;
  for (auto& [sid, data] : spans) {
    if (r0 < 0) {
      r0 = static_cast<int>(data.even.cols());
      r1 = static_cast<int>(data.odd.cols());
    } else if (data.even.cols() != r0 || data.odd.cols() != r1) {
      fail(errc::bad_input, "kernel realization needs constant fiber dimensions");
    }
  }
  if (n0 < r0 || n1 < r1)
    fail(errc::embedding_too_small, "ambient space too small for the requested kernels");
  if (n0 - r0 != n1 - r1)
    fail(errc::embedding_too_small,
         "ambient dimensions incompatible: the complements of kernel and cokernel must match");

  out.n0 = n0;
  out.n1 = n1;
  for (auto& [sid, data] : spans) {
    // complement bases via the low eigenvectors of the span projectors
    auto complement = [](const cmat& basis, int n) {
      const cmat p = basis.cols() > 0 ? cmat(basis * basis.adjoint()) : cmat(cmat::Zero(n, n));
      eig_result eig = hermitian_eig(p, 1e-7);
      return cmat(eig.vectors.leftCols(n - basis.cols()));
    };
    const cmat w0 = complement(data.even, n0);
    const cmat w1 = complement(data.odd, n1);
    out.samples[sid] = w1 * w0.adjoint();
  }
  return out;
}

std::vector<int> index_of_family(const fredholm_family& f) {
  return std::vector<int>(f.base->component_count(), f.n0 - f.n1);
}

}  // namespace vectk
