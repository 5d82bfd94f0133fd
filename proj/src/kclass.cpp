#include "vectk/kclass.hpp"

#include <algorithm>

namespace vectk {

namespace {

bool same_coords(const class_coordinates& a, const class_coordinates& b) {
  return a.free_coords == b.free_coords && a.torsion_coords == b.torsion_coords &&
         a.torsion_factors == b.torsion_factors;
}

bool same_descriptor(const k_class_descriptor& a, const k_class_descriptor& b) {
  return same_coords(a.twist, b.twist) && a.index == b.index &&
         a.point_complete == b.point_complete && a.provenance == b.provenance &&
         a.witness_tag == b.witness_tag;
}

bool compatible_twists(const formal_difference& a, const formal_difference& b) {
  const class_coordinates* ref = nullptr;
  for (const auto* side : {&a.plus, &a.minus, &b.plus, &b.minus})
    for (const auto& d : *side) {
      if (!ref)
        ref = &d.twist;
      else if (!same_coords(*ref, d.twist))
        return false;
    }
  return true;
}

}  // namespace

k_class_descriptor class_of(cohomology_cache& cc, const vectorial_bundle& vb,
                            const std::string& provenance) {
  if (!vb.verified) fail(errc::verification_failed, "class_of needs a verified bundle");
  k_class_descriptor d;
  if (vb.twist) {
    d.twist = dd_class(cc, *vb.twist).coords;
  } else {
    // zero class in the ambient H^3
    auto zero = zero_u1_cochain(cc.complex(), std::min(2, cc.complex().dim()));
    if (zero.degree == 2) d.twist = dd_class(cc, zero).coords;
  }
  d.index = graded_index(vb);
  d.point_complete = vb.base->sample_count() == 1;
  d.provenance = provenance;
  return d;
}

formal_difference make_difference(k_class_descriptor d) {
  formal_difference f;
  f.plus.push_back(std::move(d));
  return f;
}

namespace {

// drop descriptor pairs that cancel across the two sides
void reduce(formal_difference& f) {
  for (size_t i = 0; i < f.plus.size();) {
    bool cancelled = false;
    for (size_t j = 0; j < f.minus.size(); ++j) {
      const auto& p = f.plus[i];
      const auto& m = f.minus[j];
      const bool invariants_match = same_coords(p.twist, m.twist) && p.index == m.index;
      const bool witnessed = (p.point_complete && m.point_complete) ||
                             (!p.witness_tag.empty() && p.witness_tag == m.witness_tag) ||
                             same_descriptor(p, m);
      if (invariants_match && witnessed) {
        f.minus.erase(f.minus.begin() + j);
        f.plus.erase(f.plus.begin() + i);
        cancelled = true;
        break;
      }
    }
    if (!cancelled) ++i;
  }
}

}  // namespace

formal_difference add(const formal_difference& a, const formal_difference& b) {
  if (!compatible_twists(a, b)) fail(errc::twist_mismatch, "summands carry different twists");
  formal_difference out = a;
  out.plus.insert(out.plus.end(), b.plus.begin(), b.plus.end());
  out.minus.insert(out.minus.end(), b.minus.begin(), b.minus.end());
  reduce(out);
  return out;
}

formal_difference negate(const formal_difference& a) {
  formal_difference out;
  out.plus = a.minus;
  out.minus = a.plus;
  return out;
}

std::vector<int> net_index(const formal_difference& a) {
  std::vector<int> idx;
  auto fold = [&](const std::vector<k_class_descriptor>& side, int sign) {
    for (const auto& d : side) {
      if (idx.size() < d.index.size()) idx.resize(d.index.size(), 0);
      for (size_t i = 0; i < d.index.size(); ++i) idx[i] += sign * d.index[i];
    }
  };
  fold(a.plus, 1);
  fold(a.minus, -1);
  return idx;
}

equality_verdict equals(const formal_difference& a, const formal_difference& b) {
  // a - b: distinct when a computed invariant separates them
  const class_coordinates* ta = nullptr;
  const class_coordinates* tb = nullptr;
  for (const auto& d : a.plus) ta = &d.twist;
  for (const auto& d : b.plus) tb = &d.twist;
  if (ta && tb && !same_coords(*ta, *tb)) return equality_verdict::distinct;
  if (net_index(a) != net_index(b)) return equality_verdict::distinct;

  // syntactically identical differences are equal
  auto identical = [](const std::vector<k_class_descriptor>& x,
                      const std::vector<k_class_descriptor>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (!same_descriptor(x[i], y[i])) return false;
    return true;
  };
  if (identical(a.plus, b.plus) && identical(a.minus, b.minus)) return equality_verdict::equal;

  // over a point the invariants are complete
  auto all_point = [](const formal_difference& f) {
    for (const auto& d : f.plus)
      if (!d.point_complete) return false;
    for (const auto& d : f.minus)
      if (!d.point_complete) return false;
    return true;
  };
  if (all_point(a) && all_point(b)) return equality_verdict::equal;

  // witness chaining: the symmetric difference must cancel
  try {
    formal_difference diff = add(a, negate(b));
    if (diff.plus.empty() && diff.minus.empty()) return equality_verdict::equal;
  } catch (const error&) {
    return equality_verdict::unknown;
  }
  return equality_verdict::unknown;
}

}  // namespace vectk
