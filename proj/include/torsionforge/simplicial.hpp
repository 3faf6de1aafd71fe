#pragma once

#include "torsionforge/complexes.hpp"

#include <map>
#include <utility>

namespace tf {

// Finite abstract simplicial complex; simplices are ascending vertex lists,
// kept in lexicographic order within each dimension.
struct SimplicialComplex {
  int num_vertices = 0;
  std::vector<std::vector<std::vector<int>>> simplices;  // by dimension

  int dim() const { return int(simplices.size()) - 1; }
  int count(int d) const {
    return d >= 0 && d <= dim() ? int(simplices[d].size()) : 0;
  }
  int index_of(int d, const std::vector<int>& s) const;  // -1 if absent
  Int euler_characteristic() const;
};

SimplicialComplex from_facets(int num_vertices, std::vector<std::vector<int>> facets);

// Cochain complex with integer coefficients, identity metrics and unit scales.
Complex cochain_complex(const SimplicialComplex& sc);

// Flat system of free Z-modules on the vertices: an invertible integer matrix
// per oriented edge (u, v) with u < v, mapping the fiber at u to the fiber at
// v.  Missing edges carry the identity.
struct LocalSystem {
  int rank = 1;
  std::map<std::pair<int, int>, IntMat> transport;

  IntMat forward(int u, int v) const;   // u < v
  IntMat backward(int v, int u) const;  // inverse of forward(u, v)
};

// Invertibility over Z and flatness around every 2-simplex.
void validate_local_system(const SimplicialComplex& sc, const LocalSystem& ls);

// Twisted cochain complex; each simplex carries the fiber at its least
// vertex, and the degree-k basis is ordered simplex-major.
Complex cochain_complex(const SimplicialComplex& sc, const LocalSystem& ls);

// Simplicial automorphisms, given as vertex permutations.
bool is_automorphism(const SimplicialComplex& sc, const std::vector<int>& vertex_map);

// Pullback by the inverse on cochains, so that composition of maps matches
// multiplication of matrices.  Throws if the map is not an automorphism.
std::vector<IntMat> action_matrices(const SimplicialComplex& sc,
                                    const std::vector<int>& vertex_map);

// Every power of the map that fixes a simplex setwise fixes it pointwise.
bool is_regular_action(const SimplicialComplex& sc, const std::vector<int>& vertex_map,
                       int order);

// Full subcomplex on the simplices fixed pointwise; vertices renumbered in
// increasing order.  The original names of the surviving vertices are
// reported through `vertex_names` when given.
SimplicialComplex fixed_subcomplex(const SimplicialComplex& sc,
                                   const std::vector<int>& vertex_map,
                                   std::vector<int>* vertex_names = nullptr);

// Barycentric subdivision.  Vertex t of the subdivision is the t-th simplex
// of the complex in dimension-major order.
SimplicialComplex barycentric_subdivision(const SimplicialComplex& sc);

// Vertex map induced on the subdivision by an automorphism.
std::vector<int> subdivided_vertex_map(const SimplicialComplex& sc,
                                       const std::vector<int>& vertex_map);

// Local system induced on the subdivision: the fiber at a subdivision vertex
// is the fiber at the least vertex of the corresponding simplex.
LocalSystem subdivided_local_system(const SimplicialComplex& sc, const LocalSystem& ls);

}  // namespace tf
