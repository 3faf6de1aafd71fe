#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "torsionforge/basechange.hpp"

#include <map>
#include <memory>
#include <set>
#include <vector>

using namespace tf;

namespace {

template <typename F>
Err code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("an error was expected");
  return Err::AssertionFailed;
}

Group sl2(int p, int deg) {
  return enumerate_group(matrix_carrier(p, deg), sl2_generators(p, deg));
}

Subgroup borel_of(const Group& g, int p, int deg) {
  std::vector<int> gens;
  for (uint64_t c : borel_generators(p, deg)) gens.push_back(g.element_index(c));
  return subgroup_closure(g, gens);
}

Group symmetric_three() {
  return enumerate_group(perm_carrier(3), {pack_perm({1, 0, 2}), pack_perm({1, 2, 0})});
}

// two plain copies of the base with the coordinate swap
TwistedGroup swap_square(Group base) {
  auto bp = std::make_shared<Group>(std::move(base));
  Group sq = enumerate_group(product_carrier(bp, 2), product_generators(*bp, 2));
  return make_twisted(std::move(sq), shift_twist(bp->size(), 2), 2);
}

TwistedGroup frobenius_nine() {
  return make_twisted(sl2(3, 2), frobenius_twist(3, 2), 2);
}

TwistedGroup inversion_cyclic(long n) {
  auto c = abelian_carrier({n});
  Group g = enumerate_group(c, abelian_generators(*c));
  return make_twisted(std::move(g), abelian_inversion_twist(c), 2);
}

long ordinary_centralizer_order(const Group& g, int a) {
  long n = 0;
  for (int x = 0; x < g.size(); ++x)
    if (g.mul(x, a) == g.mul(a, x)) ++n;
  return n;
}

int tau_apply(const TwistedGroup& t, int delta0, int x) {
  return t.group.mul(t.group.mul(delta0, t.twist(x)), t.group.inv(delta0));
}

int tau_norm(const TwistedGroup& t, int delta0, int z) {
  int acc = z, cur = z;
  for (int e = 1; e < t.prime; ++e) {
    cur = tau_apply(t, delta0, cur);
    acc = t.group.mul(acc, cur);
  }
  return acc;
}

// classes of {z : z tau(z) ... tau^(p-1)(z) = e} under z -> a z tau(a)^{-1}
// with a running over the ordinary centralizer of c
int fiber_count_via_centralizer(const TwistedGroup& t, int c, int delta0) {
  const Group& g = t.group;
  std::vector<int> zc;
  for (int x = 0; x < g.size(); ++x)
    if (g.mul(x, c) == g.mul(c, x)) zc.push_back(x);

  std::vector<int> cocycles;
  for (int z = 0; z < g.size(); ++z)
    if (tau_norm(t, delta0, z) == g.id()) cocycles.push_back(z);

  std::vector<char> seen(g.elements.size(), 0);
  int count = 0;
  for (int seed : cocycles) {
    if (seen[size_t(seed)]) continue;
    ++count;
    std::vector<int> orbit{seed};
    seen[size_t(seed)] = 1;
    for (size_t head = 0; head < orbit.size(); ++head) {
      for (int a : zc) {
        int w = g.mul(g.mul(a, orbit[head]), g.inv(tau_apply(t, delta0, a)));
        if (!seen[size_t(w)]) {
          seen[size_t(w)] = 1;
          orbit.push_back(w);
        }
      }
    }
  }
  return count;
}

}  // namespace

TEST_CASE("special linear groups over small fields have the expected orders") {
  Group g3 = sl2(3, 1);
  Group g5 = sl2(5, 1);
  Group g9 = sl2(3, 2);
  CHECK(g3.size() == 24);
  CHECK(g5.size() == 120);
  CHECK(g9.size() == 720);

  CHECK(borel_of(g3, 3, 1).size() == 6);
  CHECK(borel_of(g5, 5, 1).size() == 20);
  CHECK(borel_of(g9, 3, 2).size() == 72);

  CHECK(right_cosets(g3, borel_of(g3, 3, 1)).reps.size() == 4);
  CHECK(right_cosets(g9, borel_of(g9, 3, 2)).reps.size() == 10);
}

TEST_CASE("enumeration is deterministic, identity-first, and closed") {
  Group a = symmetric_three();
  Group b = symmetric_three();
  CHECK(a.size() == 6);
  CHECK(a.elements == b.elements);
  CHECK(a.elements[0] == a.carrier->identity());
  for (int i = 0; i < a.size(); ++i) {
    CHECK(a.mul(i, a.inv(i)) == a.id());
    CHECK(a.inv(a.inv(i)) == i);
  }

  Subgroup flip = subgroup_closure(a, {a.element_index(pack_perm({1, 0, 2}))});
  CHECK(flip.size() == 2);
  Subgroup rot = subgroup_closure(a, {a.element_index(pack_perm({1, 2, 0}))});
  CHECK(rot.size() == 3);
  CHECK(right_cosets(a, rot).reps.size() == 2);
}

TEST_CASE("inversion on cyclic groups produces the brute-force twisted classes") {
  struct Row {
    long n;
    int classes;
    int h1;
  };
  for (Row r : {Row{3, 1, 1}, Row{4, 2, 2}, Row{5, 1, 1}, Row{6, 2, 2}}) {
    TwistedGroup t = inversion_cyclic(r.n);
    TwistedClassReport rep = twisted_classes(t, whole_group(t.group));
    CHECK(int(rep.classes.size()) == r.classes);
    CHECK(rep.h1_size == r.h1);
    for (const TwistedClass& c : rep.classes) CHECK(c.norm_trivial);
  }

  // direct modular arithmetic oracle on Z/12: orbits of g + 2x are the two
  // cosets of the even residues
  TwistedGroup t = inversion_cyclic(12);
  TwistedClassReport rep = twisted_classes(t, whole_group(t.group));
  REQUIRE(rep.classes.size() == 2);
  std::set<long> reps;
  for (const TwistedClass& c : rep.classes) {
    CHECK(c.size == 6);
    auto* ab = dynamic_cast<const AbelianCarrier*>(t.group.carrier.get());
    REQUIRE(ab != nullptr);
    reps.insert(ab->coords(t.group.elements[size_t(c.representative)])[0] % 2);
  }
  CHECK(reps == std::set<long>{0, 1});
}

TEST_CASE("the norm intertwines the twist with ordinary conjugation") {
  std::vector<TwistedGroup> zoo;
  zoo.push_back(inversion_cyclic(4));
  zoo.push_back(swap_square(symmetric_three()));
  zoo.push_back(frobenius_nine());
  {
    Group s3 = symmetric_three();
    auto twist = perm_conjugation_twist(3, {0, 2, 1});
    zoo.push_back(make_twisted(std::move(s3), twist, 2));
  }
  for (const TwistedGroup& t : zoo) {
    const Group& g = t.group;
    for (int a = 0; a < g.size(); ++a) {
      int na = norm_element(t, a);
      for (int x : g.generators) {
        int moved = g.mul(g.mul(x, a), g.inv(t.twist(x)));
        CHECK(norm_element(t, moved) == g.mul(g.mul(x, na), g.inv(x)));
      }
    }
  }
}

TEST_CASE("swap products index the conjugacy classes of the base group") {
  struct Model {
    Group base;
    int base_classes;
  };
  std::vector<Model> models;
  models.push_back({symmetric_three(), 3});
  models.push_back({sl2(3, 1), 7});

  for (Model& m : models) {
    std::set<int> seen;
    for (int a = 0; a < m.base.size(); ++a) seen.insert(conjugacy_class(m.base, a).front());
    REQUIRE(int(seen.size()) == m.base_classes);

    int base_size = m.base.size();
    Group base_copy = m.base;
    TwistedGroup t = swap_square(std::move(base_copy));
    TwistedClassReport rep = twisted_classes(t, whole_group(t.group));
    CHECK(int(rep.classes.size()) == m.base_classes);
    CHECK(rep.h1_size == 1);

    std::set<int> norm_classes;
    for (const TwistedClass& c : rep.classes) norm_classes.insert(c.norm_class);
    CHECK(int(norm_classes.size()) == m.base_classes);

    // norm of (a, b) is (ab, ba), checked against the packing
    for (int a = 0; a < base_size && a < 6; ++a)
      for (int b = 0; b < base_size; ++b) {
        int g = t.group.element_index(uint64_t(a) + uint64_t(base_size) * uint64_t(b));
        int expect = t.group.element_index(uint64_t(m.base.mul(a, b)) +
                                           uint64_t(base_size) * uint64_t(m.base.mul(b, a)));
        CHECK(norm_element(t, g) == expect);
      }
  }
}

TEST_CASE("twisted centralizers match fixed subgroups and base centralizers") {
  TwistedGroup f9 = frobenius_nine();
  TwistedCentralizer ze = twisted_centralizer(f9, f9.group.id());
  long fixed = 0;
  for (int x = 0; x < f9.group.size(); ++x)
    if (f9.twist(x) == x) ++fixed;
  CHECK(ze.order == Int(24));
  CHECK(Int(fixed) == ze.order);

  TwistedGroup s3sq = swap_square(symmetric_three());
  for (int a = 0; a < 6; ++a) {
    Group s3 = symmetric_three();
    int delta = s3sq.group.element_index(uint64_t(a));
    TwistedCentralizer z = twisted_centralizer(s3sq, delta);
    CHECK(z.order == Int(ordinary_centralizer_order(s3, a)));
  }

  // class equation: orbit size times stabilizer order covers the group
  TwistedClassReport rep = twisted_classes(f9, whole_group(f9.group));
  for (const TwistedClass& c : rep.classes) {
    TwistedCentralizer z = twisted_centralizer(f9, c.representative);
    CHECK(Int(c.size) * z.order == Int(f9.group.size()));
  }
}

TEST_CASE("fixed cosets of the twisted translation agree between both counts") {
  TwistedGroup t3 = swap_square(sl2(3, 1));
  Group base = sl2(3, 1);
  std::vector<int> bg;
  for (uint64_t c : borel_generators(3, 1)) {
    int s = base.element_index(c);
    bg.push_back(t3.group.element_index(pack_product(base, 2, {s, 0})));
    bg.push_back(t3.group.element_index(pack_product(base, 2, {0, s})));
  }
  Subgroup h3 = subgroup_closure(t3.group, bg);
  CHECK(h3.size() == 36);

  CHECK(induced_trace(t3, h3, t3.group.id()) == Int(4));
  int u = base.element_index(pack_matrix(3, {1}, {1}, {0}, {1}));
  int delta_u = t3.group.element_index(pack_product(base, 2, {u, 0}));
  CHECK(induced_trace(t3, h3, delta_u) == Int(1));

  TwistedGroup f9 = frobenius_nine();
  Subgroup b9 = borel_of(f9.group, 3, 2);
  CHECK(induced_trace(f9, b9, f9.group.id()) == Int(4));
  int u9 = f9.group.element_index(pack_matrix(3, {1}, {1}, {0}, {1}));
  CHECK(induced_trace(f9, b9, u9) == Int(1));

  // the internal cross-check runs on every call; sample widely
  Rng rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    induced_trace(t3, h3, int(rng.below(uint64_t(t3.group.size()))));
    induced_trace(f9, b9, int(rng.below(uint64_t(f9.group.size()))));
  }
}

TEST_CASE("flag fixed points collapse to the base group for swap products") {
  Group base = sl2(3, 1);
  Subgroup borel = borel_of(base, 3, 1);
  CosetSpace flags = right_cosets(base, borel);

  TwistedGroup t = swap_square(base);
  std::vector<int> bg;
  for (uint64_t c : borel_generators(3, 1)) {
    int s = base.element_index(c);
    bg.push_back(t.group.element_index(pack_product(base, 2, {s, 0})));
    bg.push_back(t.group.element_index(pack_product(base, 2, {0, s})));
  }
  Subgroup h = subgroup_closure(t.group, bg);

  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    int a = int(rng.below(uint64_t(base.size())));
    int b = int(rng.below(uint64_t(base.size())));
    int delta = t.group.element_index(pack_product(base, 2, {a, b}));
    long fixed = 0;
    int ab = base.mul(a, b);
    for (int rep : flags.reps)
      if (flags.label[size_t(base.mul(rep, ab))] == rep) ++fixed;
    CHECK(induced_trace(t, h, delta) == Int(fixed));
  }
}

TEST_CASE("fixed-point ratios follow the norm type across the odd primes") {
  std::vector<int> primes{3, 5, 7, 11, 13};

  std::vector<RatioRow> uni = c_ratio_sweep(primes, NormKind::unipotent);
  REQUIRE(uni.size() == primes.size());
  for (size_t i = 0; i < uni.size(); ++i) {
    CHECK(uni[i].fixed_points == Int(1));
    CHECK(uni[i].ratio == Rat(1, primes[i] + 1));
    if (i > 0) CHECK(uni[i].ratio < uni[i - 1].ratio);
  }

  std::vector<RatioRow> rss = c_ratio_sweep(primes, NormKind::regular_semisimple);
  CHECK(rss[0].fixed_points == Int(0));
  for (size_t i = 1; i < rss.size(); ++i) CHECK(rss[i].fixed_points == Int(2));
  for (size_t i = 0; i < rss.size(); ++i) {
    CHECK(rss[i].ratio <= Rat(2, primes[i] + 1));
    CHECK(rss[i].ratio <= Rat(1));
  }

  std::vector<RatioRow> triv = c_ratio_sweep(primes, NormKind::trivial);
  for (const RatioRow& row : triv) CHECK(row.ratio == Rat(1));
}

TEST_CASE("norm fibers are counted by twisted cocycles of the centralizer") {
  std::vector<TwistedGroup> zoo;
  zoo.push_back(inversion_cyclic(4));
  zoo.push_back(swap_square(symmetric_three()));
  zoo.push_back(swap_square(sl2(3, 1)));
  zoo.push_back(frobenius_nine());

  for (const TwistedGroup& t : zoo) {
    TwistedClassReport rep = twisted_classes(t, whole_group(t.group));
    std::map<int, int> fiber_size;
    for (const TwistedClass& c : rep.classes) ++fiber_size[c.norm_class];

    for (const auto& [norm_class, size] : fiber_size) {
      // a base point whose norm hits the class representative exactly
      int delta0 = -1;
      for (const TwistedClass& c : rep.classes) {
        if (c.norm_class != norm_class) continue;
        for (int w : twisted_orbit(t, whole_group(t.group), c.representative))
          if (norm_element(t, w) == norm_class) {
            delta0 = w;
            break;
          }
        if (delta0 >= 0) break;
      }
      REQUIRE(delta0 >= 0);
      CHECK(fiber_count_via_centralizer(t, norm_class, delta0) == size);
    }
  }
}

TEST_CASE("twisted centralizer orders land on fixed-field centralizer counts") {
  TwistedGroup f9 = frobenius_nine();
  const Group& g = f9.group;
  int minus_one = g.element_index(pack_matrix(3, {2}, {0}, {0}, {2}));

  // matrix codes store the entries as 8-bit field indices a + 3b
  auto trace_coeffs = [](uint64_t code) {
    int e00 = int(code & 0xff), e11 = int((code >> 24) & 0xff);
    return std::pair<int, int>{(e00 % 3 + e11 % 3) % 3, (e00 / 3 + e11 / 3) % 3};
  };

  for (int delta = 0; delta < g.size(); ++delta) {
    int n = norm_element(f9, delta);
    TwistedCentralizer z = twisted_centralizer(f9, delta);
    auto [ta, tb] = trace_coeffs(g.elements[size_t(n)]);
    CHECK(tb == 0);  // norms have traces in the prime field

    if (n == g.id() || n == minus_one) {
      // the centralizer is the whole group; its fixed-field points are the
      // 24 elements over F_3
      CHECK(z.order == Int(24));
      CHECK(z.norm_centralizer_order == Int(720));
    } else if (ta == 1 || ta == 2) {
      // unipotent type: sign times translations, 2 * 3 points over F_3
      CHECK(z.order == Int(6));
      CHECK(z.norm_centralizer_order == Int(18));
    } else {
      // regular semisimple: a one-dimensional torus, 3 -+ 1 points over F_3
      CHECK((z.order == Int(2) || z.order == Int(4)));
      CHECK(z.norm_centralizer_order == Int(8));
    }
  }
}

TEST_CASE("tensor trace of the swapped product matches the plain product trace") {
  IntMat id3 = IntMat::identity(3);
  CHECK(tensor_trace_identity(id3, id3) == Int(3));
  IntMat sw{{0, 1}, {1, 0}};
  CHECK(tensor_trace_identity(sw, IntMat::identity(2)) == Int(0));

  Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    IntMat a(3, 3), b(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        a.at(i, j) = rng.range(-5, 5);
        b.at(i, j) = rng.range(-5, 5);
      }
    Int direct = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) direct += a.at(i, j) * b.at(j, i);
    CHECK(tensor_trace_identity(a, b) == direct);
  }
}

TEST_CASE("invalid inputs are rejected with the right categories") {
  CHECK(code_of([] {
          auto c = abelian_carrier({1024, 1024});
          enumerate_group(c, abelian_generators(*c));
        }) == Err::EnumerationBoundExceeded);

  CHECK(code_of([] {
          TwistedGroup f9 = frobenius_nine();
          int ux = f9.group.element_index(pack_matrix(3, {1}, {0, 1}, {0}, {1}));
          Subgroup line = subgroup_closure(f9.group, {ux});
          h1(f9, line);
        }) == Err::SubgroupNotSigmaStable);

  CHECK(code_of([] {
          auto c = abelian_carrier({5});
          Group g = enumerate_group(c, abelian_generators(*c));
          make_twisted(std::move(g), abelian_matrix_twist(c, {{2}}), 2);
        }) == Err::ActionInvalid);

  CHECK(code_of([] {
          Group flip = enumerate_group(perm_carrier(3), {pack_perm({1, 0, 2})});
          make_twisted(std::move(flip), perm_conjugation_twist(3, {0, 2, 1}), 2);
        }) == Err::ActionInvalid);

  CHECK(code_of([] { c_ratio_sweep({2}, NormKind::unipotent); }) == Err::InputError);
  CHECK(code_of([] { c_ratio_sweep({17}, NormKind::unipotent); }) ==
        Err::EnumerationBoundExceeded);

  CHECK(code_of([] { tensor_trace_identity(IntMat(2, 3), IntMat(3, 2)); }) == Err::InputError);
  CHECK(code_of([] { pack_perm({0, 0, 1}); }) == Err::InputError);
  CHECK(code_of([] {
          abelian_matrix_twist(abelian_carrier({2, 4}), {{0, 1}, {1, 0}});
        }) == Err::InputError);
}
