#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torsionforge/simplicial.hpp"

using namespace tf;

namespace {

SimplicialComplex triangle_boundary() { return from_facets(3, {{0, 1}, {1, 2}, {0, 2}}); }

SimplicialComplex projective_plane() {
  return from_facets(6, {{0, 1, 3},
                         {0, 1, 5},
                         {0, 2, 3},
                         {0, 2, 4},
                         {0, 4, 5},
                         {1, 2, 4},
                         {1, 2, 5},
                         {1, 3, 4},
                         {2, 3, 5},
                         {3, 4, 5}});
}

SimplicialComplex seven_vertex_torus() {
  std::vector<std::vector<int>> facets;
  for (int i = 0; i < 7; ++i) {
    facets.push_back({i, (i + 1) % 7, (i + 3) % 7});
    facets.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return from_facets(7, facets);
}

SimplicialComplex cycle_graph(int n) {
  std::vector<std::vector<int>> facets;
  for (int i = 0; i < n; ++i) facets.push_back({i, (i + 1) % n});
  return from_facets(n, facets);
}

}  // namespace

TEST_CASE("facet closure and counting") {
  SimplicialComplex t = from_facets(3, {{2, 1, 0}});
  CHECK(t.dim() == 2);
  CHECK(t.count(0) == 3);
  CHECK(t.count(1) == 3);
  CHECK(t.count(2) == 1);
  CHECK(t.euler_characteristic() == 1);
  CHECK(t.index_of(1, {0, 2}) == 1);
  CHECK(t.index_of(1, {0, 3}) == -1);

  CHECK_THROWS_AS(from_facets(2, {{0, 0}}), Error);
  CHECK_THROWS_AS(from_facets(2, {{0, 5}}), Error);
  CHECK_THROWS_AS(from_facets(3, {{0, 1}}), Error);  // vertex 2 unused
}

TEST_CASE("cohomology of small surfaces") {
  auto h_circle = cohomology(cochain_complex(triangle_boundary()));
  CHECK(h_circle[0].free_rank == 1);
  CHECK(h_circle[1].free_rank == 1);
  CHECK(h_circle[1].torsion.empty());

  SimplicialComplex rp2 = projective_plane();
  CHECK(rp2.euler_characteristic() == 1);
  auto h_rp2 = cohomology(cochain_complex(rp2));
  CHECK(h_rp2[0].free_rank == 1);
  CHECK(h_rp2[1].free_rank == 0);
  CHECK(h_rp2[1].torsion.empty());
  CHECK(h_rp2[2].free_rank == 0);
  REQUIRE(h_rp2[2].torsion.size() == 1);
  CHECK(h_rp2[2].torsion[0] == 2);

  SimplicialComplex torus = seven_vertex_torus();
  CHECK(torus.euler_characteristic() == 0);
  auto h_torus = cohomology(cochain_complex(torus));
  CHECK(h_torus[0].free_rank == 1);
  CHECK(h_torus[1].free_rank == 2);
  CHECK(h_torus[2].free_rank == 1);
  CHECK(h_torus[1].torsion.empty());
  CHECK(h_torus[2].torsion.empty());
}

TEST_CASE("twisted coefficients on the circle") {
  SimplicialComplex c = triangle_boundary();
  LocalSystem flip;
  flip.rank = 1;
  flip.transport[{0, 2}] = IntMat{{-1}};
  auto h = cohomology(cochain_complex(c, flip));
  CHECK(h[0].free_rank == 0);
  CHECK(h[0].torsion.empty());
  CHECK(h[1].free_rank == 0);
  REQUIRE(h[1].torsion.size() == 1);
  CHECK(h[1].torsion[0] == 2);

  LocalSystem swap2;
  swap2.rank = 2;
  swap2.transport[{0, 2}] = IntMat{{0, 1}, {1, 0}};
  auto h2 = cohomology(cochain_complex(c, swap2));
  CHECK(h2[0].free_rank == 1);  // invariants of the swap
  CHECK(h2[1].free_rank == 1);
  CHECK(h2[1].torsion.empty());
}

TEST_CASE("bad local systems are rejected") {
  SimplicialComplex t = from_facets(3, {{0, 1, 2}});
  LocalSystem nonflat;
  nonflat.rank = 1;
  nonflat.transport[{0, 2}] = IntMat{{-1}};
  CHECK_THROWS_AS(validate_local_system(t, nonflat), Error);

  LocalSystem noninv;
  noninv.rank = 1;
  noninv.transport[{0, 1}] = IntMat{{2}};
  CHECK_THROWS_AS(validate_local_system(t, noninv), Error);

  LocalSystem offedge;
  offedge.rank = 1;
  offedge.transport[{0, 3}] = IntMat{{1}};
  CHECK_THROWS_AS(validate_local_system(triangle_boundary(), offedge), Error);
}

TEST_CASE("action matrices form a representation that commutes with d") {
  SimplicialComplex c = triangle_boundary();
  std::vector<int> rot{1, 2, 0};
  REQUIRE(is_automorphism(c, rot));
  auto a = action_matrices(c, rot);
  Complex cx = cochain_complex(c);
  for (int d = 0; d + 1 <= cx.top(); ++d) CHECK(a[d + 1] * cx.diff[d] == cx.diff[d] * a[d]);
  CHECK(a[0] * a[0] * a[0] == IntMat::identity(3));

  std::vector<int> rot2{2, 0, 1};
  auto a2 = action_matrices(c, rot2);
  CHECK(a[0] * a[0] == a2[0]);
  CHECK(a[1] * a[1] == a2[1]);

  std::vector<int> refl{0, 2, 1};
  auto ar = action_matrices(c, refl);
  CHECK(ar[0] * ar[0] == IntMat::identity(3));
  CHECK(ar[1] * ar[1] == IntMat::identity(3));

  CHECK_THROWS_AS(action_matrices(c, std::vector<int>{0, 1, 1}), Error);
}

TEST_CASE("regularity of actions") {
  SimplicialComplex c = triangle_boundary();
  CHECK_FALSE(is_regular_action(c, {0, 2, 1}, 2));  // an edge flips onto itself
  CHECK(is_regular_action(c, {1, 2, 0}, 3));        // free rotation

  SimplicialComplex square = cycle_graph(4);
  CHECK(is_regular_action(square, {1, 2, 3, 0}, 4));

  SimplicialComplex torus = seven_vertex_torus();
  std::vector<int> shift{1, 2, 3, 4, 5, 6, 0};
  REQUIRE(is_automorphism(torus, shift));
  CHECK(is_regular_action(torus, shift, 7));

  // subdividing repairs the reflection
  SimplicialComplex sd = barycentric_subdivision(c);
  std::vector<int> sd_refl = subdivided_vertex_map(c, {0, 2, 1});
  CHECK(is_regular_action(sd, sd_refl, 2));
}

TEST_CASE("fixed subcomplex of a reflection") {
  SimplicialComplex hex = cycle_graph(6);
  std::vector<int> refl{0, 5, 4, 3, 2, 1};
  REQUIRE(is_automorphism(hex, refl));
  std::vector<int> names;
  SimplicialComplex fix = fixed_subcomplex(hex, refl, &names);
  CHECK(fix.num_vertices == 2);
  CHECK(fix.dim() == 0);
  CHECK(fix.euler_characteristic() == 2);
  CHECK(names == std::vector<int>{0, 3});

  // free rotation leaves nothing
  SimplicialComplex none = fixed_subcomplex(hex, {1, 2, 3, 4, 5, 0});
  CHECK(none.num_vertices == 0);
  CHECK(none.euler_characteristic() == 0);
}

TEST_CASE("barycentric subdivision preserves cohomology") {
  SimplicialComplex c = triangle_boundary();
  SimplicialComplex sd = barycentric_subdivision(c);
  CHECK(sd.count(0) == 6);
  CHECK(sd.count(1) == 6);

  SimplicialComplex rp2 = projective_plane();
  SimplicialComplex sd_rp2 = barycentric_subdivision(rp2);
  CHECK(sd_rp2.euler_characteristic() == 1);
  auto h = cohomology(cochain_complex(sd_rp2));
  CHECK(h[0].free_rank == 1);
  CHECK(h[1].free_rank == 0);
  REQUIRE(h[2].torsion.size() == 1);
  CHECK(h[2].torsion[0] == 2);  // torsion survives subdivision
}

TEST_CASE("subdivision carries local systems along") {
  SimplicialComplex c = triangle_boundary();
  LocalSystem flip;
  flip.rank = 1;
  flip.transport[{0, 2}] = IntMat{{-1}};
  SimplicialComplex sd = barycentric_subdivision(c);
  LocalSystem sd_flip = subdivided_local_system(c, flip);
  validate_local_system(sd, sd_flip);
  auto h = cohomology(cochain_complex(sd, sd_flip));
  CHECK(h[0].free_rank == 0);
  REQUIRE(h[1].torsion.size() == 1);
  CHECK(h[1].torsion[0] == 2);
}

TEST_CASE("subdivided action is an automorphism of the subdivision") {
  SimplicialComplex torus = seven_vertex_torus();
  std::vector<int> shift{1, 2, 3, 4, 5, 6, 0};
  SimplicialComplex sd = barycentric_subdivision(torus);
  std::vector<int> sd_shift = subdivided_vertex_map(torus, shift);
  CHECK(is_automorphism(sd, sd_shift));
  CHECK(is_regular_action(sd, sd_shift, 7));

  Complex cx = cochain_complex(sd);
  auto a = action_matrices(sd, sd_shift);
  for (int d = 0; d + 1 <= cx.top(); ++d) CHECK(a[d + 1] * cx.diff[d] == cx.diff[d] * a[d]);
}
