#include "torsionforge/simplicial.hpp"

#include <algorithm>
#include <set>

namespace tf {

int SimplicialComplex::index_of(int d, const std::vector<int>& s) const {
  if (d < 0 || d > dim()) return -1;
  const auto& list = simplices[d];
  auto it = std::lower_bound(list.begin(), list.end(), s);
  if (it == list.end() || *it != s) return -1;
  return int(it - list.begin());
}

Int SimplicialComplex::euler_characteristic() const {
  Int chi = 0;
  for (int d = 0; d <= dim(); ++d) chi += Int((d % 2 == 0) ? 1 : -1) * count(d);
  return chi;
}

SimplicialComplex from_facets(int num_vertices, std::vector<std::vector<int>> facets) {
  std::set<std::vector<int>> seen;
  std::vector<char> used(num_vertices, 0);
  int top = -1;
  for (auto& f : facets) {
    std::sort(f.begin(), f.end());
    if (std::adjacent_find(f.begin(), f.end()) != f.end())
      fail(Err::InputError, "facet has a repeated vertex");
    if (f.empty() || f.front() < 0 || f.back() >= num_vertices)
      fail(Err::InputError, "facet vertex out of range");
    for (int v : f) used[v] = 1;
    top = std::max(top, int(f.size()) - 1);
    // downward closure through subset bitmasks
    int k = int(f.size());
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
      std::vector<int> s;
      for (int b = 0; b < k; ++b)
        if (mask & (1u << b)) s.push_back(f[b]);
      seen.insert(std::move(s));
    }
  }
  for (int v = 0; v < num_vertices; ++v)
    if (!used[v]) fail(Err::InputError, "vertex missing from every facet");

  SimplicialComplex sc;
  sc.num_vertices = num_vertices;
  sc.simplices.assign(top + 1, {});
  for (const auto& s : seen) sc.simplices[s.size() - 1].push_back(s);
  for (auto& list : sc.simplices) std::sort(list.begin(), list.end());
  return sc;
}

Complex cochain_complex(const SimplicialComplex& sc) {
  LocalSystem trivial;
  trivial.rank = 1;
  return cochain_complex(sc, trivial);
}

IntMat LocalSystem::forward(int u, int v) const {
  auto it = transport.find({u, v});
  return it == transport.end() ? IntMat::identity(rank) : it->second;
}

IntMat LocalSystem::backward(int v, int u) const {
  auto inv = integer_coordinates(forward(u, v), IntMat::identity(rank));
  if (!inv) fail(Err::InvalidLocalSystem, "transport is not invertible over Z");
  return *inv;
}

void validate_local_system(const SimplicialComplex& sc, const LocalSystem& ls) {
  if (ls.rank < 0) fail(Err::InvalidLocalSystem, "negative rank");
  for (const auto& [edge, m] : ls.transport) {
    if (m.rows() != ls.rank || m.cols() != ls.rank)
      fail(Err::InvalidLocalSystem, "transport has wrong shape");
    if (edge.first >= edge.second) fail(Err::InvalidLocalSystem, "edge must be ascending");
    if (sc.index_of(1, {edge.first, edge.second}) < 0)
      fail(Err::InvalidLocalSystem, "transport on a pair that is not an edge");
    if (abs_int(det_int(m)) != 1)
      fail(Err::InvalidLocalSystem, "transport is not invertible over Z");
  }
  for (int t = 0; t < sc.count(2); ++t) {
    const auto& s = sc.simplices[2][t];
    IntMat around = ls.forward(s[1], s[2]) * ls.forward(s[0], s[1]);
    if (!(around == ls.forward(s[0], s[2])))
      fail(Err::InvalidLocalSystem, "transports do not commute around a 2-simplex");
  }
}

Complex cochain_complex(const SimplicialComplex& sc, const LocalSystem& ls) {
  validate_local_system(sc, ls);
  const int r = ls.rank;
  if (sc.dim() < 0) return make_complex({0}, {});

  std::vector<int> ranks;
  for (int d = 0; d <= sc.dim(); ++d) ranks.push_back(sc.count(d) * r);
  std::vector<IntMat> diff;
  for (int d = 0; d + 1 <= sc.dim(); ++d) {
    IntMat m(ranks[d + 1], ranks[d]);
    for (int t = 0; t < sc.count(d + 1); ++t) {
      const auto& tau = sc.simplices[d + 1][t];
      for (int j = 0; j < int(tau.size()); ++j) {
        std::vector<int> face = tau;
        face.erase(face.begin() + j);
        int s = sc.index_of(d, face);
        if (s < 0) fail(Err::AssertionFailed, "face missing from the complex");
        int sign = (j % 2 == 0) ? 1 : -1;
        IntMat block = j == 0 ? ls.backward(tau[1], tau[0]) : IntMat::identity(r);
        for (int a = 0; a < r; ++a)
          for (int b = 0; b < r; ++b) m.at(t * r + a, s * r + b) += Int(sign) * block.at(a, b);
      }
    }
    diff.push_back(std::move(m));
  }
  return make_complex(std::move(ranks), std::move(diff));
}

namespace {

void check_permutation(const SimplicialComplex& sc, const std::vector<int>& vertex_map) {
  if (int(vertex_map.size()) != sc.num_vertices)
    fail(Err::ActionInvalid, "vertex map has wrong length");
  std::vector<char> hit(sc.num_vertices, 0);
  for (int v : vertex_map) {
    if (v < 0 || v >= sc.num_vertices || hit[v])
      fail(Err::ActionInvalid, "vertex map is not a permutation");
    hit[v] = 1;
  }
}

std::vector<int> sorted_image(const std::vector<int>& s, const std::vector<int>& map) {
  std::vector<int> out;
  out.reserve(s.size());
  for (int v : s) out.push_back(map[v]);
  std::sort(out.begin(), out.end());
  return out;
}

// parity of the permutation sorting the tuple, as +1 / -1
int sort_sign(std::vector<int> t) {
  int inversions = 0;
  for (size_t i = 0; i < t.size(); ++i)
    for (size_t j = i + 1; j < t.size(); ++j)
      if (t[i] > t[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

std::vector<int> inverse_map(const std::vector<int>& map) {
  std::vector<int> inv(map.size());
  for (size_t v = 0; v < map.size(); ++v) inv[map[v]] = int(v);
  return inv;
}

}  // namespace

bool is_automorphism(const SimplicialComplex& sc, const std::vector<int>& vertex_map) {
  check_permutation(sc, vertex_map);
  for (int d = 0; d <= sc.dim(); ++d)
    for (const auto& s : sc.simplices[d])
      if (sc.index_of(d, sorted_image(s, vertex_map)) < 0) return false;
  return true;
}

std::vector<IntMat> action_matrices(const SimplicialComplex& sc,
                                    const std::vector<int>& vertex_map) {
  if (!is_automorphism(sc, vertex_map))
    fail(Err::ActionInvalid, "vertex map does not preserve the complex");
  std::vector<int> inv = inverse_map(vertex_map);
  std::vector<IntMat> out;
  for (int d = 0; d <= sc.dim(); ++d) {
    IntMat a(sc.count(d), sc.count(d));
    for (int t = 0; t < sc.count(d); ++t) {
      std::vector<int> pre;
      for (int v : sc.simplices[d][t]) pre.push_back(inv[v]);
      int sign = sort_sign(pre);
      std::sort(pre.begin(), pre.end());
      a.at(t, sc.index_of(d, pre)) = sign;
    }
    out.push_back(std::move(a));
  }
  return out;
}

bool is_regular_action(const SimplicialComplex& sc, const std::vector<int>& vertex_map,
                       int order) {
  check_permutation(sc, vertex_map);
  if (order < 1) fail(Err::InputError, "order must be positive");
  std::vector<int> power(sc.num_vertices);
  for (int v = 0; v < sc.num_vertices; ++v) power[v] = v;
  for (int e = 1; e < order; ++e) {
    for (int v = 0; v < sc.num_vertices; ++v) power[v] = vertex_map[power[v]];
    for (int d = 0; d <= sc.dim(); ++d)
      for (const auto& s : sc.simplices[d]) {
        if (sorted_image(s, power) != s) continue;
        for (int v : s)
          if (power[v] != v) return false;
      }
  }
  return true;
}

SimplicialComplex fixed_subcomplex(const SimplicialComplex& sc,
                                   const std::vector<int>& vertex_map,
                                   std::vector<int>* vertex_names) {
  check_permutation(sc, vertex_map);
  std::vector<int> rename(sc.num_vertices, -1);
  std::vector<int> names;
  for (int v = 0; v < sc.num_vertices; ++v)
    if (vertex_map[v] == v && sc.index_of(0, {v}) >= 0) {
      rename[v] = int(names.size());
      names.push_back(v);
    }
  SimplicialComplex out;
  out.num_vertices = int(names.size());
  for (int d = 0; d <= sc.dim(); ++d) {
    std::vector<std::vector<int>> level;
    for (const auto& s : sc.simplices[d]) {
      bool keep = true;
      for (int v : s)
        if (rename[v] < 0) {
          keep = false;
          break;
        }
      if (!keep) continue;
      std::vector<int> renamed;
      for (int v : s) renamed.push_back(rename[v]);
      level.push_back(std::move(renamed));
    }
    if (!level.empty()) {
      std::sort(level.begin(), level.end());
      out.simplices.push_back(std::move(level));
    }
  }
  if (vertex_names) *vertex_names = std::move(names);
  return out;
}

namespace {

std::vector<int> sd_offsets(const SimplicialComplex& sc) {
  std::vector<int> off(sc.dim() + 2, 0);
  for (int d = 0; d <= sc.dim(); ++d) off[d + 1] = off[d] + sc.count(d);
  return off;
}

bool is_facet(const SimplicialComplex& sc, int d, int idx) {
  if (d == sc.dim()) return true;
  const auto& s = sc.simplices[d][idx];
  // contained in a larger simplex iff it is the face of some (d+1)-simplex
  for (const auto& t : sc.simplices[d + 1]) {
    if (std::includes(t.begin(), t.end(), s.begin(), s.end())) return false;
  }
  return true;
}

}  // namespace

SimplicialComplex barycentric_subdivision(const SimplicialComplex& sc) {
  std::vector<int> off = sd_offsets(sc);
  std::vector<std::vector<int>> chains;
  for (int d = 0; d <= sc.dim(); ++d)
    for (int idx = 0; idx < sc.count(d); ++idx) {
      if (!is_facet(sc, d, idx)) continue;
      std::vector<int> verts = sc.simplices[d][idx];
      std::sort(verts.begin(), verts.end());
      do {
        std::vector<int> chain;
        std::vector<int> prefix;
        for (int v : verts) {
          prefix.push_back(v);
          std::vector<int> sorted = prefix;
          std::sort(sorted.begin(), sorted.end());
          int k = int(sorted.size()) - 1;
          chain.push_back(off[k] + sc.index_of(k, sorted));
        }
        chains.push_back(std::move(chain));
      } while (std::next_permutation(verts.begin(), verts.end()));
    }
  return from_facets(off.back(), std::move(chains));
}

std::vector<int> subdivided_vertex_map(const SimplicialComplex& sc,
                                       const std::vector<int>& vertex_map) {
  if (!is_automorphism(sc, vertex_map))
    fail(Err::ActionInvalid, "vertex map does not preserve the complex");
  std::vector<int> off = sd_offsets(sc);
  std::vector<int> out;
  for (int d = 0; d <= sc.dim(); ++d)
    for (const auto& s : sc.simplices[d])
      out.push_back(off[d] + sc.index_of(d, sorted_image(s, vertex_map)));
  return out;
}

LocalSystem subdivided_local_system(const SimplicialComplex& sc, const LocalSystem& ls) {
  validate_local_system(sc, ls);
  std::vector<int> off = sd_offsets(sc);
  auto decode = [&](int t) -> const std::vector<int>& {
    int d = 0;
    while (t >= off[d + 1]) ++d;
    return sc.simplices[d][t - off[d]];
  };
  SimplicialComplex sd = barycentric_subdivision(sc);
  LocalSystem out;
  out.rank = ls.rank;
  for (int e = 0; e < sd.count(1); ++e) {
    const auto& edge = sd.simplices[1][e];
    const auto& s = decode(edge[0]);
    const auto& t = decode(edge[1]);
    int ms = s.front(), mt = t.front();
    if (ms == mt) continue;
    // the larger simplex contains both least vertices, so they span an edge
    out.transport[{edge[0], edge[1]}] = ls.backward(ms, mt);
  }
  return out;
}

}  // namespace tf
