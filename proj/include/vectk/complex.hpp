#pragma once

#include <map>
#include <string>
#include <vector>

#include "vectk/smith.hpp"
#include "vectk/types.hpp"

namespace vectk {

using simplex = std::vector<int>;  // vertex ids, ascending

// Finite simplicial complex, closed under faces.  Simplices of each dimension
// are stored sorted lexicographically; a global sample id enumerates all
// simplices across dimensions (one abstract sample point per simplex, its
// barycenter).
class simplicial_complex {
 public:
  simplicial_complex() = default;

  static simplicial_complex from_maximal(int n_vertices, const std::vector<simplex>& maximal);

  int vertex_count() const { return n_vertices_; }
  int dim() const { return static_cast<int>(by_dim_.size()) - 1; }
  int count(int k) const {
    return (k >= 0 && k <= dim()) ? static_cast<int>(by_dim_[k].size()) : 0;
  }
  const std::vector<simplex>& simplices(int k) const { return by_dim_[k]; }
  int index_of(const simplex& s) const;  // -1 when absent
  bool has(const simplex& s) const { return index_of(s) >= 0; }

  // Flat enumeration of all simplices (ascending dimension, then lex).
  int sample_count() const { return static_cast<int>(samples_.size()); }
  const simplex& sample_simplex(int sid) const { return samples_[sid]; }
  int sample_id(const simplex& s) const;
  std::string sample_key(int sid) const;           // "0,1,2"
  int sample_from_key(const std::string& key) const;

  std::vector<int> vertex_components() const;      // component id per vertex
  int component_count() const;
  int component_of_sample(int sid) const;

  // delta_k : C^k -> C^{k+1}, alternating signs over ascending vertex order.
  imat coboundary_matrix(int k) const;

  // Closed oriented surface: pure 2-dim, each edge in exactly two triangles,
  // connected, orientable.  Returns one sign per triangle (the fundamental
  // cycle; first triangle in lex order gets +1).
  std::vector<int> fundamental_surface_cycle() const;

 private:
  int n_vertices_ = 0;
  std::vector<std::vector<simplex>> by_dim_;
  std::map<simplex, int> index_;          // simplex -> index within its dimension
  std::vector<simplex> samples_;          // flat list
  std::map<simplex, int> sample_index_;
  void finish();
};

// Open cover of |K| by vertex stars.  U_{a..w} is nonempty iff {a..w} is a
// simplex; the samples of a patch are the simplices containing its vertex.
struct star_cover {
  const simplicial_complex* complex = nullptr;
  std::vector<std::vector<int>> patch_samples;  // per vertex: sample ids
  std::vector<std::vector<int>> sample_patches; // per sample: vertex ids

  // Samples of the common overlap of a set of patches (the star of the
  // simplex they span); empty when the vertices span no simplex.
  std::vector<int> overlap_samples(const simplex& vertices) const;
};

star_cover make_star_cover(const simplicial_complex& k);

// Staircase triangulation of |K| x |L|: simplices are chains in the product
// of the vertex orders whose projections are simplices of the factors.
// Vertex (v, w) gets id v * L.vertex_count() + w.
simplicial_complex ordered_product(const simplicial_complex& k, const simplicial_complex& l);

// Circle with n >= 3 vertices.
simplicial_complex circle_complex(int n);

// Boundary of the full simplex on n+1 vertices (a triangulated S^n).
simplicial_complex boundary_simplex(int n);

}  // namespace vectk
