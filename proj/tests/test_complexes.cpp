#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_support.hpp"
#include "torsionforge/fpla.hpp"

using namespace tf;
using tf::testing::random_complex;

namespace {

int count_divisible(const std::vector<Int>& torsion, uint32_t p) {
  int n = 0;
  for (const Int& t : torsion)
    if (t % p == 0) ++n;
  return n;
}

}  // namespace

TEST_CASE("multiplication by 3 in top degree") {
  Complex c = make_complex({1, 1}, {IntMat{{3}}});
  auto h = cohomology(c);
  CHECK(h[0].free_rank == 0);
  CHECK(h[0].torsion.empty());
  CHECK(h[1].free_rank == 0);
  REQUIRE(h[1].torsion.size() == 1);
  CHECK(h[1].torsion[0] == 3);
  CHECK(h[1].torsion_order() == 3);
}

TEST_CASE("circle with two cells") {
  Complex c = make_complex({2, 2}, {IntMat{{-1, 1}, {1, -1}}});
  auto h = cohomology(c);
  CHECK(h[0].free_rank == 1);
  CHECK(h[0].torsion.empty());
  CHECK(h[0].regulator_sq == 2);  // constant function (1,1)
  CHECK(h[1].free_rank == 1);
  CHECK(h[1].torsion.empty());
  CHECK(h[1].regulator_sq == Rat(1, 2));
}

TEST_CASE("mixed free and torsion part") {
  Complex c = make_complex({1, 2}, {IntMat{{0}, {2}}});
  auto h = cohomology(c);
  CHECK(h[0].free_rank == 0);
  CHECK(h[1].free_rank == 1);
  REQUIRE(h[1].torsion.size() == 1);
  CHECK(h[1].torsion[0] == 2);
}

TEST_CASE("validation rejects malformed inputs") {
  CHECK_THROWS_AS(make_complex({1, 1, 1}, {IntMat{{1}}, IntMat{{1}}}), Error);
  CHECK_THROWS_AS(make_complex({2, 1}, {IntMat{{1}}}), Error);
  Complex c = make_complex({1, 1}, {IntMat{{2}}});
  c.metric[0] = RatMat{{-1}};
  CHECK_THROWS_AS(validate(c), Error);
  c.metric[0] = RatMat{{1}};
  c.scale[1] = 0;
  CHECK_THROWS_AS(validate(c), Error);
}

TEST_CASE("harmonic representative properties") {
  Complex c = make_complex({2, 2}, {IntMat{{-1, 1}, {1, -1}}});
  CHECK_THROWS_AS(harmonic_representative(c, 0, {Rat(1), Rat(0)}), Error);

  auto h = harmonic_representative(c, 1, {Rat(1), Rat(0)});
  CHECK(h[0] == Rat(1, 2));
  CHECK(h[1] == Rat(1, 2));

  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Complex r = random_complex(rng, int(rng.range(2, 4)), 4);
    for (int i = 0; i <= r.top(); ++i) {
      IntMat ker = kernel_saturated(r.d_out(i));
      if (ker.cols() == 0) continue;
      // random integer cocycle
      IntMat w(ker.cols(), 1);
      for (int t = 0; t < ker.cols(); ++t) w.at(t, 0) = rng.range(-3, 3);
      RatMat v = RatMat::from_int(ker * w);
      RatMat hh = harmonic_representative_cols(r, i, v);
      // difference lies in the image of the incoming differential
      RatMat A = RatMat::from_int(r.d_in(i));
      CHECK(solve_many(A, v - hh).has_value());
      // projection is orthogonal to that image
      RatMat ip = A.transpose() * r.metric[i] * hh;
      for (int t = 0; t < ip.rows(); ++t) CHECK(ip.at(t, 0) == 0);
    }
  }
}

TEST_CASE("rank bookkeeping and euler characteristic") {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    Complex c = random_complex(rng, int(rng.range(2, 5)), 5);
    auto h = cohomology(c);
    Int chi_ranks = 0, chi_cohom = 0;
    for (int i = 0; i <= c.top(); ++i) {
      int sign = (i % 2 == 0) ? 1 : -1;
      chi_ranks += Int(sign) * c.ranks[i];
      chi_cohom += Int(sign) * h[i].free_rank;
      CHECK(h[i].free_rank ==
            c.ranks[i] - rank_int(c.d_out(i)) - rank_int(c.d_in(i)));
      CHECK(h[i].regulator_sq > 0);
      for (size_t t = 1; t < h[i].torsion.size(); ++t)
        CHECK(h[i].torsion[t] % h[i].torsion[t - 1] == 0);
    }
    CHECK(chi_ranks == chi_cohom);
  }
}

TEST_CASE("mod-p dimensions agree with universal coefficients") {
  Rng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    Complex c = random_complex(rng, int(rng.range(2, 5)), 5);
    auto h = cohomology(c);
    for (uint32_t p : {2u, 3u, 5u}) {
      for (int i = 0; i <= c.top(); ++i) {
        fp::Mat dout = fp::Mat::from_int(c.d_out(i), p);
        fp::Mat din = fp::Mat::from_int(c.d_in(i), p);
        int dim_fp = c.ranks[i] - fp::rank(dout) - fp::rank(din);
        int expected = h[i].free_rank + count_divisible(h[i].torsion, p);
        if (i + 1 <= c.top()) expected += count_divisible(h[i + 1].torsion, p);
        CHECK(dim_fp == expected);
      }
    }
  }
}

TEST_CASE("free basis is a basis of the free quotient") {
  Rng rng(14);
  for (int trial = 0; trial < 25; ++trial) {
    Complex c = random_complex(rng, int(rng.range(2, 4)), 4);
    auto h = cohomology(c);
    for (int i = 0; i <= c.top(); ++i) {
      CHECK(h[i].free_basis.cols() == h[i].free_rank);
      if (h[i].free_rank == 0) continue;
      // columns are cocycles
      CHECK((c.d_out(i) * h[i].free_basis).is_zero());
      // and stay independent after harmonic projection
      RatMat proj = harmonic_representative_cols(c, i, RatMat::from_int(h[i].free_basis));
      CHECK(rank(proj) == h[i].free_rank);
    }
  }
}

TEST_CASE("direct sum adds cohomology") {
  Complex circle = make_complex({2, 2}, {IntMat{{-1, 1}, {1, -1}}});
  Complex mod3 = make_complex({1, 1}, {IntMat{{3}}});
  Complex s = direct_sum(circle, mod3);
  auto h = cohomology(s);
  CHECK(h[0].free_rank == 1);
  CHECK(h[1].free_rank == 1);
  REQUIRE(h[1].torsion.size() == 1);
  CHECK(h[1].torsion[0] == 3);
}

TEST_CASE("tensor product of two circles is a torus") {
  Complex circle = make_complex({2, 2}, {IntMat{{-1, 1}, {1, -1}}});
  Complex t = tensor_product(circle, circle);
  auto h = cohomology(t);
  CHECK(h[0].free_rank == 1);
  CHECK(h[1].free_rank == 2);
  CHECK(h[2].free_rank == 1);
  for (auto& d : h) CHECK(d.torsion.empty());
}

TEST_CASE("tensor product picks up torsion from both factors") {
  Complex mod3 = make_complex({1, 1}, {IntMat{{3}}});
  Complex t = tensor_product(mod3, mod3);
  auto h = cohomology(t);
  CHECK(h[0].free_rank == 0);
  CHECK(h[0].torsion.empty());
  REQUIRE(h[1].torsion.size() == 1);  // Tor of the two degree-1 groups
  CHECK(h[1].torsion[0] == 3);
  REQUIRE(h[2].torsion.size() == 1);
  CHECK(h[2].torsion[0] == 3);
}
