#include "vectk/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace vectk {

const local_fiber& vectorial_bundle::fiber(int patch, int sample) const {
  auto p = fibers.find(patch);
  if (p == fibers.end()) fail(errc::bad_input, "no fibers for patch " + std::to_string(patch));
  auto s = p->second.find(sample);
  if (s == p->second.end())
    fail(errc::bad_input, "patch " + std::to_string(patch) + " has no fiber at sample " +
                              base->sample_key(sample));
  return s->second;
}

const cmat* vectorial_bundle::transition(int to, int from, int sample) const {
  auto t = transitions.find({to, from});
  if (t == transitions.end()) return nullptr;
  auto s = t->second.find(sample);
  return s == t->second.end() ? nullptr : &s->second;
}

doteq_point doteq_check(const cmat& f, const cmat& g, const cmat& h_source,
                        const tolerances& tol) {
  if (f.rows() != g.rows() || f.cols() != g.cols())
    fail(errc::shape_mismatch, "compared maps have different shapes");
  if (h_source.rows() != h_source.cols() || h_source.cols() != f.cols())
    fail(errc::shape_mismatch, "source map does not match the compared maps");

  if (f.cols() == 0) return {kMuInfinite, true};  // nothing below any cutoff

  eig_result eig = hermitian_eig(h_source, tol.eps_herm * 16);
  // sort by h^2 eigenvalue
  const int n = static_cast<int>(eig.values.size());
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<double> sq(n);
  for (int i = 0; i < n; ++i) sq[i] = eig.values[i] * eig.values[i];
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sq[a] < sq[b]; });

  cmat dv(f.rows(), n);
  const cmat diff = f - g;
  std::vector<double> lambda(n);
  for (int i = 0; i < n; ++i) {
    dv.col(i) = diff * eig.vectors.col(order[i]);
    lambda[i] = sq[order[i]];
  }

  // clusters separated by more than 2*gap_tol; cutoffs live between clusters
  std::vector<int> cluster_end;  // exclusive index per cluster
  for (int i = 1; i < n; ++i)
    if (lambda[i] - lambda[i - 1] > 2 * tol.gap_tol) cluster_end.push_back(i);
  cluster_end.push_back(n);

  int agree_until = 0;  // number of leading clusters that agree
  for (size_t c = 0; c < cluster_end.size(); ++c) {
    const int end = cluster_end[c];
    if (op_norm(dv.leftCols(end)) < tol.eps_doteq)
      agree_until = static_cast<int>(c) + 1;
    else
      break;
  }

  if (agree_until == static_cast<int>(cluster_end.size())) return {kMuInfinite, true};
  if (agree_until == 0) {
    // no cluster agrees: a positive cutoff exists only below the bottom cluster
    if (lambda[0] > 2 * tol.gap_tol) return {lambda[0] / 2, true};
    return {0.0, false};
  }
  const double lo = lambda[cluster_end[agree_until - 1] - 1];
  const double hi = lambda[cluster_end[agree_until - 1]];
  return {(lo + hi) / 2, true};
}

void verify_report::add(condition_result r) {
  pass = pass && r.pass;
  if (r.mu_agree < min_mu_agree) min_mu_agree = r.mu_agree;
  conditions.push_back(std::move(r));
}

namespace {

bool same_base(const vectorial_bundle& a, const vectorial_bundle& b) {
  if (a.base == b.base) return true;
  if (!a.base || !b.base) return false;
  if (a.base->vertex_count() != b.base->vertex_count() ||
      a.base->sample_count() != b.base->sample_count())
    return false;
  for (int s = 0; s < a.base->sample_count(); ++s)
    if (a.base->sample_simplex(s) != b.base->sample_simplex(s)) return false;
  return true;
}

bool same_twist(const vectorial_bundle& a, const vectorial_bundle& b) {
  const bool ta = a.twist.has_value(), tb = b.twist.has_value();
  if (!ta && !tb) return true;
  auto is_zero = [](const u1_cochain& c) {
    return std::all_of(c.turns.begin(), c.turns.end(), [](const bigrat& t) { return t == 0; });
  };
  if (ta != tb) return is_zero(ta ? *a.twist : *b.twist);
  return *a.twist == *b.twist;
}

cxd twist_scalar(const std::optional<u1_cochain>& twist, const simplicial_complex& k,
                 const simplex& tri) {
  if (!twist) return cxd(1, 0);
  const int idx = k.index_of(tri);
  const double t = static_cast<double>(twist->turns[idx]);
  return std::polar(1.0, 2 * std::numbers::pi * t);
}

// structural pass over a bundle: fibers everywhere on each star, constant
// graded dims per patch, Hermitian degree-1 h
void check_structure(const vectorial_bundle& vb, verify_report& rep, const tolerances& tol) {
  const auto& k = *vb.base;
  for (int v = 0; v < k.vertex_count(); ++v) {
    int r0 = -1, r1 = -1;
    for (int sid = 0; sid < k.sample_count(); ++sid) {
      const simplex& s = k.sample_simplex(sid);
      if (!std::binary_search(s.begin(), s.end(), v)) continue;
      condition_result c{"structure", {v}, sid};
      auto p = vb.fibers.find(v);
      const local_fiber* f =
          p != vb.fibers.end() && p->second.count(sid) ? &p->second.at(sid) : nullptr;
      if (!f) {
        c.pass = false;
        c.mu_agree = 0;
        rep.add(std::move(c));
        continue;
      }
      if (r0 < 0) {
        r0 = f->r0;
        r1 = f->r1;
      }
      const bool dims_ok = f->r0 == r0 && f->r1 == r1 && f->h.rows() == f->total() &&
                           f->h.cols() == f->total();
      double herm = 0, degree = 0;
      if (dims_ok && f->total() > 0) {
        herm = (f->h - f->h.adjoint()).cwiseAbs().maxCoeff();
        if (f->r0 > 0) degree = f->h.topLeftCorner(f->r0, f->r0).cwiseAbs().maxCoeff();
        if (f->r1 > 0)
          degree = std::max(degree,
                            f->h.bottomRightCorner(f->r1, f->r1).cwiseAbs().maxCoeff());
      }
      c.defect = std::max(herm, degree);
      c.pass = dims_ok && c.defect <= tol.eps_doteq;
      if (!c.pass) c.mu_agree = 0;
      rep.add(std::move(c));
    }
  }
}

void check_conditions(const vectorial_bundle& vb, verify_report& rep, const tolerances& tol) {
  const auto& k = *vb.base;
  check_structure(vb, rep, tol);

  // stored self-transitions: phi_aa = 1 on the low spectrum
  for (const auto& [pair_key, by_sample] : vb.transitions) {
    if (pair_key.first != pair_key.second) continue;
    for (const auto& [sid, phi] : by_sample) {
      const local_fiber& f = vb.fiber(pair_key.first, sid);
      auto r = doteq_check(phi, cmat::Identity(f.total(), f.total()), f.h, tol);
      rep.add({"reflexive", {pair_key.first}, sid, r.mu_agree, r.pass});
    }
  }

  // ordered overlaps: strict intertwining, and phi_ab phi_ba = 1 low
  if (k.dim() >= 1)
    for (const auto& e : k.simplices(1))
      for (int dir = 0; dir < 2; ++dir) {
        const int a = dir ? e[1] : e[0];
        const int b = dir ? e[0] : e[1];
        for (int sid = 0; sid < k.sample_count(); ++sid) {
          const simplex& s = k.sample_simplex(sid);
          if (!std::includes(s.begin(), s.end(), e.begin(), e.end())) continue;
          const local_fiber& fa = vb.fiber(a, sid);
          const local_fiber& fb = vb.fiber(b, sid);
          const cmat* ab = vb.transition(a, b, sid);
          const cmat* ba = vb.transition(b, a, sid);
          if (!ab || !ba) {
            rep.add({"pair", {a, b}, sid, 0, false});
            continue;
          }
          condition_result ic{"intertwine", {a, b}, sid};
          ic.defect = ab->rows() == fa.total() && ab->cols() == fb.total()
                          ? op_norm(fa.h * *ab - *ab * fb.h)
                          : kMuInfinite;
          ic.pass = ic.defect <= tol.eps_doteq;
          if (!ic.pass) ic.mu_agree = 0;
          rep.add(std::move(ic));

          auto r = doteq_check(*ab * *ba, cmat::Identity(fa.total(), fa.total()), fa.h, tol);
          rep.add({"pair", {a, b}, sid, r.mu_agree, r.pass});
        }
      }

  // ascending triples with the (possibly twisted) cocycle condition
  if (k.dim() >= 2)
    for (const auto& tri : k.simplices(2)) {
      const int a = tri[0], b = tri[1], g = tri[2];
      const cxd scalar = twist_scalar(vb.twist, k, tri);
      for (int sid = 0; sid < k.sample_count(); ++sid) {
        const simplex& s = k.sample_simplex(sid);
        if (!std::includes(s.begin(), s.end(), tri.begin(), tri.end())) continue;
        const cmat* ab = vb.transition(a, b, sid);
        const cmat* bg = vb.transition(b, g, sid);
        const cmat* ag = vb.transition(a, g, sid);
        if (!ab || !bg || !ag) {
          rep.add({"triple", {a, b, g}, sid, 0, false});
          continue;
        }
        const local_fiber& fg = vb.fiber(g, sid);
        auto r = doteq_check(*ab * *bg, scalar * *ag, fg.h, tol);
        rep.add({"triple", {a, b, g}, sid, r.mu_agree, r.pass});
      }
    }
}

}  // namespace

verify_report verify_vectorial(const vectorial_bundle& vb, const tolerances& tol) {
  if (vb.twist) {
    auto nonzero = std::any_of(vb.twist->turns.begin(), vb.twist->turns.end(),
                               [](const bigrat& t) { return t != 0; });
    if (nonzero) fail(errc::twist_mismatch, "bundle is twisted; use verify_twisted");
  }
  verify_report rep;
  check_conditions(vb, rep, tol);
  return rep;
}

verify_report verify_twisted(const vectorial_bundle& vb, const u1_cochain& c,
                             const tolerances& tol) {
  if (c.degree != 2) fail(errc::degree_out_of_range, "twist must be a degree-2 cochain");
  if (vb.twist && !(*vb.twist == c))
    fail(errc::twist_mismatch, "bundle twist differs from the cocycle being checked");
  vectorial_bundle checked = vb;  // cheap: shared base, matrices copied
  checked.twist = c;
  verify_report rep;
  check_conditions(checked, rep, tol);
  return rep;
}

verify_report verify_homomorphism(const bundle_maps& f, const vectorial_bundle& src,
                                  const vectorial_bundle& dst, const tolerances& tol) {
  if (!same_base(src, dst)) fail(errc::cover_mismatch, "bundles live over different covers");
  if (!same_twist(src, dst)) fail(errc::twist_mismatch, "bundles carry different twists");
  const auto& k = *src.base;
  verify_report rep;

  for (int v = 0; v < k.vertex_count(); ++v)
    for (int sid = 0; sid < k.sample_count(); ++sid) {
      const simplex& s = k.sample_simplex(sid);
      if (!std::binary_search(s.begin(), s.end(), v)) continue;
      const local_fiber& fs = src.fiber(v, sid);
      const local_fiber& fd = dst.fiber(v, sid);
      auto pf = f.find(v);
      const cmat* m = pf != f.end() && pf->second.count(sid) ? &pf->second.at(sid) : nullptr;
      if (!m || m->rows() != fd.total() || m->cols() != fs.total()) {
        rep.add({"hom-shape", {v}, sid, 0, false});
        continue;
      }
      // degree 0: no even<->odd blocks
      double deg = 0;
      if (fd.r0 > 0 && fs.r1 > 0) deg = m->topRightCorner(fd.r0, fs.r1).cwiseAbs().maxCoeff();
      if (fd.r1 > 0 && fs.r0 > 0)
        deg = std::max(deg, m->bottomLeftCorner(fd.r1, fs.r0).cwiseAbs().maxCoeff());
      condition_result dc{"hom-degree", {v}, sid};
      dc.defect = deg;
      dc.pass = deg <= tol.eps_doteq;
      if (!dc.pass) dc.mu_agree = 0;
      rep.add(std::move(dc));

      condition_result ic{"hom-intertwine", {v}, sid};
      ic.defect = op_norm(*m * fs.h - fd.h * *m);
      ic.pass = ic.defect <= tol.eps_doteq;
      if (!ic.pass) ic.mu_agree = 0;
      rep.add(std::move(ic));
    }

  if (k.dim() >= 1)
    for (const auto& e : k.simplices(1))
      for (int dir = 0; dir < 2; ++dir) {
        const int a = dir ? e[1] : e[0];
        const int b = dir ? e[0] : e[1];
        for (int sid = 0; sid < k.sample_count(); ++sid) {
          const simplex& s = k.sample_simplex(sid);
          if (!std::includes(s.begin(), s.end(), e.begin(), e.end())) continue;
          const cmat* phi_src = src.transition(a, b, sid);
          const cmat* phi_dst = dst.transition(a, b, sid);
          auto fa = f.find(a), fb = f.find(b);
          if (!phi_src || !phi_dst || fa == f.end() || fb == f.end() ||
              !fa->second.count(sid) || !fb->second.count(sid)) {
            rep.add({"hom-overlap", {a, b}, sid, 0, false});
            continue;
          }
          const local_fiber& sb = src.fiber(b, sid);
          auto r = doteq_check(fa->second.at(sid) * *phi_src, *phi_dst * fb->second.at(sid),
                               sb.h, tol);
          rep.add({"hom-overlap", {a, b}, sid, r.mu_agree, r.pass});
        }
      }
  return rep;
}

verify_report verify_isomorphism(const bundle_maps& f, const bundle_maps& f_back,
                                 const vectorial_bundle& src, const vectorial_bundle& dst,
                                 const tolerances& tol) {
  verify_report rep = verify_homomorphism(f, src, dst, tol);
  verify_report back = verify_homomorphism(f_back, dst, src, tol);
  for (auto& c : back.conditions) rep.add(std::move(c));

  const auto& k = *src.base;
  for (int v = 0; v < k.vertex_count(); ++v)
    for (int sid = 0; sid < k.sample_count(); ++sid) {
      const simplex& s = k.sample_simplex(sid);
      if (!std::binary_search(s.begin(), s.end(), v)) continue;
      const local_fiber& fs = src.fiber(v, sid);
      const local_fiber& fd = dst.fiber(v, sid);
      const cmat& m = f.at(v).at(sid);
      const cmat& mb = f_back.at(v).at(sid);
      auto r1 = doteq_check(mb * m, cmat::Identity(fs.total(), fs.total()), fs.h, tol);
      rep.add({"iso-left", {v}, sid, r1.mu_agree, r1.pass});
      auto r2 = doteq_check(m * mb, cmat::Identity(fd.total(), fd.total()), fd.h, tol);
      rep.add({"iso-right", {v}, sid, r2.mu_agree, r2.pass});
    }
  return rep;
}

namespace {

// place block `m` (mapping fibers with even-first layout) into the direct sum
cmat graded_block(const cmat& ma, int ar0t, int ar1t, int ar0s, int ar1s, const cmat& mb,
                  int br0t, int br1t, int br0s, int br1s) {
  cmat out = cmat::Zero(ar0t + br0t + ar1t + br1t, ar0s + br0s + ar1s + br1s);
  // target row offsets: a-even 0, b-even ar0t, a-odd ar0t+br0t, b-odd +ar1t
  auto place = [&](const cmat& m, int r0t, int r1t, int r0s, int r1s, int rev, int rov, int cev,
                   int cov) {
    if (r0t && r0s) out.block(rev, cev, r0t, r0s) = m.topLeftCorner(r0t, r0s);
    if (r0t && r1s) out.block(rev, cov, r0t, r1s) = m.topRightCorner(r0t, r1s);
    if (r1t && r0s) out.block(rov, cev, r1t, r0s) = m.bottomLeftCorner(r1t, r0s);
    if (r1t && r1s) out.block(rov, cov, r1t, r1s) = m.bottomRightCorner(r1t, r1s);
  };
  place(ma, ar0t, ar1t, ar0s, ar1s, 0, ar0t + br0t, 0, ar0s + br0s);
  place(mb, br0t, br1t, br0s, br1s, ar0t, ar0t + br0t + ar1t, ar0s, ar0s + br0s + ar1s);
  return out;
}

}  // namespace

vectorial_bundle direct_sum(const vectorial_bundle& a, const vectorial_bundle& b) {
  if (!same_base(a, b)) fail(errc::cover_mismatch, "direct sum needs a common cover");
  if (!same_twist(a, b)) fail(errc::twist_mismatch, "direct sum needs equal twists");
  vectorial_bundle out;
  out.base = a.base;
  out.twist = a.twist ? a.twist : b.twist;
  out.verified = a.verified && b.verified;

  for (const auto& [v, by_sample] : a.fibers)
    for (const auto& [sid, fa] : by_sample) {
      const local_fiber& fb = b.fiber(v, sid);
      local_fiber f;
      f.r0 = fa.r0 + fb.r0;
      f.r1 = fa.r1 + fb.r1;
      f.h = graded_block(fa.h, fa.r0, fa.r1, fa.r0, fa.r1, fb.h, fb.r0, fb.r1, fb.r0, fb.r1);
      out.fibers[v][sid] = std::move(f);
    }
  for (const auto& [key, by_sample] : a.transitions)
    for (const auto& [sid, ma] : by_sample) {
      const cmat* mb = b.transition(key.first, key.second, sid);
      if (!mb) continue;
      const local_fiber& at = a.fiber(key.first, sid);
      const local_fiber& as = a.fiber(key.second, sid);
      const local_fiber& bt = b.fiber(key.first, sid);
      const local_fiber& bs = b.fiber(key.second, sid);
      out.transitions[key][sid] =
          graded_block(ma, at.r0, at.r1, as.r0, as.r1, *mb, bt.r0, bt.r1, bs.r0, bs.r1);
    }
  return out;
}

std::vector<int> support(const vectorial_bundle& vb, double tol) {
  std::set<int> pts;
  for (const auto& [v, by_sample] : vb.fibers)
    for (const auto& [sid, f] : by_sample) {
      if (f.total() == 0) continue;
      eig_result e = hermitian_eig(f.h, 1e-7);
      double min_sv = kMuInfinite;
      for (int i = 0; i < e.values.size(); ++i) min_sv = std::min(min_sv, std::abs(e.values[i]));
      if (min_sv < tol) pts.insert(sid);
    }
  return {pts.begin(), pts.end()};
}

std::vector<int> graded_index(const vectorial_bundle& vb) {
  const auto& k = *vb.base;
  auto comp = k.vertex_components();
  const int ncomp = k.component_count();
  std::vector<int> value(ncomp, 0);
  std::vector<bool> seen(ncomp, false);
  for (const auto& [v, by_sample] : vb.fibers)
    for (const auto& [sid, f] : by_sample) {
      const int c = comp[k.sample_simplex(sid)[0]];
      const int d = f.r0 - f.r1;
      if (!seen[c]) {
        seen[c] = true;
        value[c] = d;
      } else if (value[c] != d) {
        fail(errc::inconsistent_index,
             "graded index differs across patches or samples in one component");
      }
    }
  for (int c = 0; c < ncomp; ++c)
    if (!seen[c]) fail(errc::bad_input, "a component carries no fibers");
  return value;
}

vectorial_bundle trivial_bundle(std::shared_ptr<const simplicial_complex> base, int r0, int r1) {
  vectorial_bundle vb;
  vb.base = std::move(base);
  const auto& k = *vb.base;
  const int n = r0 + r1;
  for (int v = 0; v < k.vertex_count(); ++v)
    for (int sid = 0; sid < k.sample_count(); ++sid) {
      const simplex& s = k.sample_simplex(sid);
      if (!std::binary_search(s.begin(), s.end(), v)) continue;
      local_fiber f;
      f.r0 = r0;
      f.r1 = r1;
      f.h = cmat::Zero(n, n);
      vb.fibers[v][sid] = std::move(f);
    }
  if (k.dim() >= 1)
    for (const auto& e : k.simplices(1))
      for (int dir = 0; dir < 2; ++dir) {
        const int a = dir ? e[1] : e[0];
        const int b = dir ? e[0] : e[1];
        for (int sid = 0; sid < k.sample_count(); ++sid) {
          const simplex& s = k.sample_simplex(sid);
          if (std::includes(s.begin(), s.end(), e.begin(), e.end()))
            vb.transitions[{a, b}][sid] = cmat::Identity(n, n);
        }
      }
  vb.verified = true;
  return vb;
}

vectorial_bundle gauge_transform(const vectorial_bundle& vb, const bundle_maps& unitaries) {
  vectorial_bundle out = vb;
  auto u_of = [&](int v, int sid) -> const cmat& { return unitaries.at(v).at(sid); };
  for (auto& [v, by_sample] : out.fibers)
    for (auto& [sid, f] : by_sample) {
      const cmat& u = u_of(v, sid);
      f.h = u * f.h * u.adjoint();
      if (f.ambient) f.ambient = *f.ambient * u.adjoint();
    }
  for (auto& [key, by_sample] : out.transitions)
    for (auto& [sid, m] : by_sample)
      m = u_of(key.first, sid) * m * u_of(key.second, sid).adjoint();
  return out;
}

u1_cochain extract_line_turns(const vectorial_bundle& vb, const tolerances& tol) {
  const auto& k = *vb.base;
  u1_cochain out = zero_u1_cochain(k, 1);

  // reference vector per patch: the kernel line at the patch's own vertex
  std::map<int, cvec> refs;
  for (int v = 0; v < k.vertex_count(); ++v) {
    const int sid = k.sample_id({v});
    const local_fiber& f = vb.fiber(v, sid);
    if (f.r0 != 1 || f.r1 != 0 || !f.ambient)
      fail(errc::bad_input, "line-bundle extraction needs rank-(1,0) fibers with ambient data");
    refs[v] = f.ambient->col(0);
  }

  const auto& edges = k.simplices(1);
  for (size_t e = 0; e < edges.size(); ++e) {
    const int a = edges[e][0], b = edges[e][1];
    const int sid = k.sample_id(edges[e]);
    auto section = [&](int patch) {
      const local_fiber& f = vb.fiber(patch, sid);
      if (f.r0 != 1 || f.r1 != 0 || !f.ambient)
        fail(errc::bad_input, "line-bundle extraction needs rank-(1,0) fibers with ambient data");
      const cvec& basis = f.ambient->col(0);
      cvec proj = basis * (basis.adjoint() * refs[patch]);
      const double norm = proj.norm();
      if (norm < 1e-9)
        fail(errc::bad_input, "patch reference is orthogonal to the fiber at an edge sample");
      return cvec(proj / norm);
    };
    const cxd pairing = section(a).dot(section(b));
    const double turn = std::atan2(pairing.imag(), pairing.real()) / (2 * std::numbers::pi);
    // snap to the recognition grid
    const long long num = std::llround(turn * tol.q_max);
    out.turns[e] = normalize_turn(bigrat(bigint(num), bigint(tol.q_max)));
  }
  return out;
}

}  // namespace vectk
