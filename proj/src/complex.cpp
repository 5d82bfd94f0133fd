#include "vectk/complex.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace vectk {

simplicial_complex simplicial_complex::from_maximal(int n_vertices,
                                                    const std::vector<simplex>& maximal) {
  std::set<simplex> all;
  for (simplex s : maximal) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int v : s)
      if (v < 0) fail(errc::bad_input, "negative vertex id");
    if (s.empty()) continue;
    // all nonempty subsets
    const int m = static_cast<int>(s.size());
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      simplex f;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) f.push_back(s[i]);
      all.insert(f);
    }
  }
  simplicial_complex k;
  k.n_vertices_ = n_vertices;
  for (const auto& s : all) {
    k.n_vertices_ = std::max(k.n_vertices_, s.back() + 1);
    const int d = static_cast<int>(s.size()) - 1;
    if (d >= static_cast<int>(k.by_dim_.size())) k.by_dim_.resize(d + 1);
    k.by_dim_[d].push_back(s);
  }
  if (k.by_dim_.empty()) fail(errc::bad_input, "empty complex");
  k.finish();
  return k;
}

void simplicial_complex::finish() {
  for (auto& v : by_dim_) std::sort(v.begin(), v.end());
  for (int d = 0; d <= dim(); ++d)
    for (int i = 0; i < count(d); ++i) {
      index_[by_dim_[d][i]] = i;
      sample_index_[by_dim_[d][i]] = static_cast<int>(samples_.size());
      samples_.push_back(by_dim_[d][i]);
    }
}

int simplicial_complex::index_of(const simplex& s) const {
  auto it = index_.find(s);
  return it == index_.end() ? -1 : it->second;
}

int simplicial_complex::sample_id(const simplex& s) const {
  auto it = sample_index_.find(s);
  return it == sample_index_.end() ? -1 : it->second;
}

std::string simplicial_complex::sample_key(int sid) const {
  std::ostringstream os;
  const simplex& s = samples_[sid];
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    os << s[i];
  }
  return os.str();
}

int simplicial_complex::sample_from_key(const std::string& key) const {
  simplex s;
  std::istringstream is(key);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    if (tok.empty()) return -1;
    s.push_back(std::stoi(tok));
  }
  std::sort(s.begin(), s.end());
  return sample_id(s);
}

std::vector<int> simplicial_complex::vertex_components() const {
  std::vector<int> parent(n_vertices_);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  if (dim() >= 1)
    for (const auto& e : by_dim_[1]) parent[find(e[0])] = find(e[1]);
  std::vector<int> comp(n_vertices_, -1);
  int next = 0;
  for (int v = 0; v < n_vertices_; ++v) {
    int r = find(v);
    if (comp[r] < 0) comp[r] = next++;
    comp[v] = comp[r];
  }
  return comp;
}

int simplicial_complex::component_count() const {
  auto comp = vertex_components();
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

int simplicial_complex::component_of_sample(int sid) const {
  return vertex_components()[samples_[sid][0]];
}

imat simplicial_complex::coboundary_matrix(int k) const {
  if (k < 0 || k >= dim())
    fail(errc::degree_out_of_range, "coboundary degree out of range");
  imat m(count(k + 1), count(k));
  for (int r = 0; r < count(k + 1); ++r) {
    const simplex& s = by_dim_[k + 1][r];
    int sign = 1;
    for (size_t j = 0; j < s.size(); ++j) {
      simplex face;
      for (size_t i = 0; i < s.size(); ++i)
        if (i != j) face.push_back(s[i]);
      m.at(r, index_of(face)) = sign;
      sign = -sign;
    }
  }
  return m;
}

std::vector<int> simplicial_complex::fundamental_surface_cycle() const {
  if (dim() != 2) fail(errc::not_closed_surface, "complex is not 2-dimensional");
  if (component_count() != 1) fail(errc::not_closed_surface, "complex is not connected");
  const auto& tris = by_dim_[2];
  // edge -> incident triangles
  std::map<simplex, std::vector<int>> inc;
  for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
    const simplex& s = tris[t];
    for (size_t j = 0; j < 3; ++j) {
      simplex e;
      for (size_t i = 0; i < 3; ++i)
        if (i != j) e.push_back(s[i]);
      inc[e].push_back(t);
    }
  }
  for (const auto& e : by_dim_[1])
    if (inc.count(e) == 0 || inc[e].size() != 2)
      fail(errc::not_closed_surface, "an edge does not lie in exactly two triangles");

  auto coeff = [&](const simplex& tri, const simplex& edge) {
    for (size_t j = 0; j < 3; ++j) {
      simplex f;
      for (size_t i = 0; i < 3; ++i)
        if (i != j) f.push_back(tri[i]);
      if (f == edge) return j % 2 == 0 ? 1 : -1;
    }
    return 0;
  };

  std::vector<int> sign(tris.size(), 0);
  sign[0] = 1;
  std::vector<int> queue{0};
  while (!queue.empty()) {
    int t = queue.back();
    queue.pop_back();
    const simplex& s = tris[t];
    for (size_t j = 0; j < 3; ++j) {
      simplex e;
      for (size_t i = 0; i < 3; ++i)
        if (i != j) e.push_back(s[i]);
      for (int t2 : inc[e]) {
        if (t2 == t) continue;
        // opposite induced orientations cancel on the shared edge
        int wanted = -sign[t] * coeff(s, e) * coeff(tris[t2], e);
        if (sign[t2] == 0) {
          sign[t2] = wanted;
          queue.push_back(t2);
        } else if (sign[t2] != wanted) {
          fail(errc::not_closed_surface, "surface is not orientable");
        }
      }
    }
  }
  return sign;
}

star_cover make_star_cover(const simplicial_complex& k) {
  star_cover c;
  c.complex = &k;
  c.patch_samples.resize(k.vertex_count());
  c.sample_patches.resize(k.sample_count());
  for (int sid = 0; sid < k.sample_count(); ++sid) {
    const simplex& s = k.sample_simplex(sid);
    c.sample_patches[sid] = s;
    for (int v : s) c.patch_samples[v].push_back(sid);
  }
  return c;
}

std::vector<int> star_cover::overlap_samples(const simplex& vertices) const {
  std::vector<int> out;
  if (!complex->has(vertices)) return out;
  for (int sid = 0; sid < complex->sample_count(); ++sid) {
    const simplex& s = complex->sample_simplex(sid);
    if (std::includes(s.begin(), s.end(), vertices.begin(), vertices.end())) out.push_back(sid);
  }
  return out;
}

simplicial_complex ordered_product(const simplicial_complex& k, const simplicial_complex& l) {
  const int nl = l.vertex_count();
  auto vid = [nl](int v, int w) { return v * nl + w; };

  // Maximal chains from (min,min) to (max,max) in sigma x tau, for every pair
  // of maximal-dimension usage; emitting all pairs of simplices is simplest
  // and face closure dedupes.
  std::vector<simplex> maximal;
  for (int dk = 0; dk <= k.dim(); ++dk)
    for (const auto& sk : k.simplices(dk))
      for (int dl = 0; dl <= l.dim(); ++dl)
        for (const auto& sl : l.simplices(dl)) {
          const int p = static_cast<int>(sk.size()), q = static_cast<int>(sl.size());
          // lattice paths: p-1 moves advancing in sk, q-1 advancing in sl
          std::vector<int> moves;
          moves.insert(moves.end(), p - 1, 0);
          moves.insert(moves.end(), q - 1, 1);
          do {
            simplex chain;
            int i = 0, j = 0;
            chain.push_back(vid(sk[0], sl[0]));
            for (int m : moves) {
              if (m == 0) ++i; else ++j;
              chain.push_back(vid(sk[i], sl[j]));
            }
            std::sort(chain.begin(), chain.end());
            maximal.push_back(chain);
          } while (std::next_permutation(moves.begin(), moves.end()));
        }
  return simplicial_complex::from_maximal(k.vertex_count() * nl, maximal);
}

simplicial_complex circle_complex(int n) {
  if (n < 3) fail(errc::bad_input, "circle needs at least 3 vertices");
  std::vector<simplex> edges;
  for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n});
  return simplicial_complex::from_maximal(n, edges);
}

simplicial_complex boundary_simplex(int n) {
  std::vector<simplex> faces;
  for (int skip = 0; skip <= n + 1; ++skip) {
    simplex f;
    for (int v = 0; v <= n + 1; ++v)
      if (v != skip) f.push_back(v);
    faces.push_back(f);
  }
  return simplicial_complex::from_maximal(n + 2, faces);
}

}  // namespace vectk
