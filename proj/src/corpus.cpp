#include "torsionforge/corpus.hpp"

#include "torsionforge/basechange.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>

namespace tf {

namespace {

Int max_abs_entry(const IntMat& m) {
  Int bound = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) bound = std::max(bound, abs_int(m.at(i, j)));
  return bound;
}

}  // namespace

Complex seeded_complex(Rng& rng, int degrees, int max_rank, int max_entry) {
  std::vector<int> ranks;
  for (int i = 0; i < degrees; ++i) ranks.push_back(int(rng.range(0, max_rank)));
  std::vector<IntMat> diff;
  for (int i = 0; i + 1 < degrees; ++i) {
    IntMat constraint = i == 0 ? IntMat::identity(ranks[0]).transpose()
                               : kernel_saturated(diff[i - 1].transpose()).transpose();
    IntMat d(ranks[i + 1], ranks[i]);
    for (int attempt = 0; attempt < 16; ++attempt) {
      IntMat r(ranks[i + 1], constraint.rows());
      for (int a = 0; a < r.rows(); ++a)
        for (int b = 0; b < r.cols(); ++b) r.at(a, b) = rng.range(-2, 2);
      IntMat candidate = r * constraint;
      if (max_abs_entry(candidate) <= max_entry) {
        d = candidate;
        break;
      }
    }
    diff.push_back(std::move(d));
  }
  return make_complex(std::move(ranks), std::move(diff));
}

namespace {

Complex three_complex() { return make_complex({1, 1}, {IntMat{{3}}}); }
Complex four_complex() { return make_complex({1, 1}, {IntMat{{4}}}); }
Complex five_complex() { return make_complex({1, 1}, {IntMat{{5}}}); }

SimplicialComplex cycle_graph(int n) {
  std::vector<std::vector<int>> facets;
  for (int i = 0; i < n; ++i) facets.push_back({i, (i + 1) % n});
  return from_facets(n, facets);
}

SimplicialComplex seven_vertex_torus() {
  std::vector<std::vector<int>> facets;
  for (int i = 0; i < 7; ++i) {
    facets.push_back({i, (i + 1) % 7, (i + 3) % 7});
    facets.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return from_facets(7, facets);
}

SimplicialComplex octahedron() {
  return from_facets(6, {{0, 1, 2},
                         {0, 1, 5},
                         {0, 2, 4},
                         {0, 4, 5},
                         {1, 2, 3},
                         {1, 3, 5},
                         {2, 3, 4},
                         {3, 4, 5}});
}

Complex circle_complex() { return cochain_complex(cycle_graph(3)); }

ComplexWithAction negated(Complex c) {
  std::vector<IntMat> act;
  for (int r : c.ranks) {
    IntMat m = IntMat::identity(r);
    for (int k = 0; k < r; ++k) m.at(k, k) = -1;
    act.push_back(std::move(m));
  }
  return with_action(std::move(c), std::move(act), 2);
}

ComplexWithAction block_action(const ComplexWithAction& a, const ComplexWithAction& b) {
  Complex c = direct_sum(a.complex, b.complex);
  std::vector<IntMat> act;
  for (int i = 0; i <= c.top(); ++i) {
    const int ra = a.complex.ranks[i], rb = b.complex.ranks[i];
    IntMat m(ra + rb, ra + rb);
    for (int x = 0; x < ra; ++x)
      for (int y = 0; y < ra; ++y) m.at(x, y) = a.action[i].at(x, y);
    for (int x = 0; x < rb; ++x)
      for (int y = 0; y < rb; ++y) m.at(ra + x, ra + y) = b.action[i].at(x, y);
    act.push_back(std::move(m));
  }
  return with_action(std::move(c), std::move(act), a.prime);
}

}  // namespace

std::vector<ComplexWithAction> involutive_corpus(uint64_t seed) {
  Rng rng(seed);
  std::vector<ComplexWithAction> out;
  out.push_back(cyclic_union(seeded_complex(rng, 3, 4, 5), 2));
  out.push_back(negated(three_complex()));
  out.push_back(simplicial_action(cycle_graph(6), {0, 5, 4, 3, 2, 1}, 2));
  out.push_back(simplicial_action(cycle_graph(4), {2, 3, 0, 1}, 2));
  {
    SimplicialComplex tri = cycle_graph(3);
    out.push_back(simplicial_action(barycentric_subdivision(tri),
                                    subdivided_vertex_map(tri, {0, 2, 1}), 2));
  }
  out.push_back(negated(five_complex()));
  while (out.size() < 20) {
    int d = int(rng.range(2, 4));
    switch (out.size() % 3) {
      case 0:
        out.push_back(cyclic_union(seeded_complex(rng, d, 3, 5), 2));
        break;
      case 1:
        out.push_back(negated(seeded_complex(rng, d, 3, 5)));
        break;
      default:
        out.push_back(block_action(cyclic_union(seeded_complex(rng, d, 3, 5), 2),
                                   negated(seeded_complex(rng, d, 3, 5))));
        break;
    }
  }
  return out;
}

std::vector<SimplicialCase> simplicial_corpus() {
  std::vector<SimplicialCase> out;
  auto add = [&out](std::string name, SimplicialComplex sc, std::vector<int> map, int p) {
    out.push_back({std::move(name), std::move(sc), std::move(map), p});
  };
  auto add_subdivided = [&add](std::string name, const SimplicialComplex& sc,
                               const std::vector<int>& map, int p) {
    add(std::move(name), barycentric_subdivision(sc), subdivided_vertex_map(sc, map), p);
  };

  add("reflection-circle", cycle_graph(6), {0, 5, 4, 3, 2, 1}, 2);
  add("free-rotation", cycle_graph(4), {2, 3, 0, 1}, 2);
  add("triangle-rotation", cycle_graph(3), {1, 2, 0}, 3);
  add("pentagon-rotation", cycle_graph(5), {1, 2, 3, 4, 0}, 5);
  add("torus-shift", seven_vertex_torus(), {1, 2, 3, 4, 5, 6, 0}, 7);
  add("torus-shift-2", seven_vertex_torus(), {2, 3, 4, 5, 6, 0, 1}, 7);
  add_subdivided("sd-triangle-reflection", cycle_graph(3), {0, 2, 1}, 2);
  add_subdivided("sd-solid-triangle-reflection", from_facets(3, {{0, 1, 2}}), {0, 2, 1}, 2);
  add("hexagon-antipodal", cycle_graph(6), {3, 4, 5, 0, 1, 2}, 2);
  add("hexagon-rotation-2", cycle_graph(6), {2, 3, 4, 5, 0, 1}, 3);
  add("octahedron-antipodal", octahedron(), {3, 4, 5, 0, 1, 2}, 2);
  add("octahedron-axis-rotation", octahedron(), {0, 4, 5, 3, 1, 2}, 2);
  add("two-triangles-swap", from_facets(6, {{0, 1, 2}, {3, 4, 5}}), {3, 4, 5, 0, 1, 2}, 2);
  add("square-diagonal-reflection", cycle_graph(4), {0, 3, 2, 1}, 2);
  add("path-reflection", from_facets(3, {{0, 1}, {1, 2}}), {2, 1, 0}, 2);
  add("two-points-swap", from_facets(2, {{0}, {1}}), {1, 0}, 2);
  add("three-edges-rotation", from_facets(6, {{0, 1}, {2, 3}, {4, 5}}), {2, 3, 4, 5, 0, 1}, 3);
  add("decagon-reflection", cycle_graph(10), {0, 9, 8, 7, 6, 5, 4, 3, 2, 1}, 2);
  add("octagon-antipodal", cycle_graph(8), {4, 5, 6, 7, 0, 1, 2, 3}, 2);
  add("nonagon-rotation", cycle_graph(9), {3, 4, 5, 6, 7, 8, 0, 1, 2}, 3);
  add_subdivided("sd-hexagon-edge-reflection", cycle_graph(6), {1, 0, 5, 4, 3, 2}, 2);
  add_subdivided("sd-pentagon-reflection", cycle_graph(5), {0, 4, 3, 2, 1}, 2);
  return out;
}

namespace {

struct GammaChoice {
  std::string name;
  Subgroup subgroup;
};

struct PoolEntry {
  std::string name;
  TwistedGroup twisted;
  std::vector<GammaChoice> gammas;
  bool abelian = false;
};

TwistedGroup swap_square(Group base) {
  auto bp = std::make_shared<Group>(std::move(base));
  Group sq = enumerate_group(product_carrier(bp, 2), product_generators(*bp, 2));
  return make_twisted(std::move(sq), shift_twist(bp->size(), 2), 2);
}

TwistedGroup abelian_inversion(std::vector<long> moduli) {
  auto c = abelian_carrier(std::move(moduli));
  Group g = enumerate_group(c, abelian_generators(*c));
  return make_twisted(std::move(g), abelian_inversion_twist(c), 2);
}

Group sl2_group(int p, int deg) {
  return enumerate_group(matrix_carrier(p, deg), sl2_generators(p, deg));
}

std::vector<int> borel_indices(const Group& g, int p, int deg) {
  std::vector<int> out;
  for (uint64_t c : borel_generators(p, deg)) out.push_back(g.element_index(c));
  return out;
}

// code of the product element with `elem` in one coordinate and the identity
// elsewhere
uint64_t embed_code(const Group& base, int copies, int which, int elem) {
  std::vector<int> idx(size_t(copies), 0);
  idx[size_t(which)] = elem;
  return pack_product(base, copies, idx);
}

std::vector<PoolEntry> trace_formula_pool() {
  std::vector<PoolEntry> pool;

  auto cyclic = [](long n, std::vector<long> gens) {
    PoolEntry e;
    std::ostringstream name;
    name << "inversion-z" << n;
    e.name = name.str();
    e.twisted = abelian_inversion({n});
    e.gammas.push_back({"whole", whole_group(e.twisted.group)});
    for (long g : gens) {
      std::ostringstream gn;
      gn << "cyclic-" << g;
      e.gammas.push_back({gn.str(), subgroup_closure(e.twisted.group,
                                                     {e.twisted.group.element_index(uint64_t(g))})});
    }
    e.abelian = true;
    return e;
  };
  pool.push_back(cyclic(6, {0, 3}));
  pool.push_back(cyclic(9, {3}));
  pool.push_back(cyclic(20, {4, 0}));
  pool.push_back(cyclic(45, {9}));

  auto coordinate_shift = [](long m, int copies, int p) {
    PoolEntry e;
    std::ostringstream name;
    name << "shift-" << copies << "x" << m;
    e.name = name.str();
    auto c = abelian_carrier(std::vector<long>(size_t(copies), m));
    Group g = enumerate_group(c, abelian_generators(*c));
    std::vector<std::vector<long>> rot(size_t(copies), std::vector<long>(size_t(copies), 0));
    for (int i = 0; i < copies; ++i) rot[size_t(i)][size_t((i + 1) % copies)] = 1;
    std::vector<long> ones(size_t(copies), 1);
    uint64_t diag_code = c->pack(ones);
    e.twisted = make_twisted(std::move(g), abelian_matrix_twist(c, rot), p);
    e.gammas.push_back({"diagonal", subgroup_closure(e.twisted.group,
                                                     {e.twisted.group.element_index(diag_code)})});
    e.gammas.push_back({"whole", whole_group(e.twisted.group)});
    e.abelian = true;
    return e;
  };
  pool.push_back(coordinate_shift(4, 2, 2));
  pool.push_back(coordinate_shift(6, 2, 2));
  pool.push_back(coordinate_shift(3, 3, 3));
  pool.push_back(coordinate_shift(10, 3, 3));

  {
    PoolEntry e;
    e.name = "swap-s3";
    Group base = enumerate_group(perm_carrier(3), {pack_perm({1, 0, 2}), pack_perm({1, 2, 0})});
    int r = base.element_index(pack_perm({1, 2, 0}));
    e.twisted = swap_square(base);
    std::vector<int> diag_gens, rot_gens;
    for (int s : {base.element_index(pack_perm({1, 0, 2})), r}) {
      std::vector<int> idx{s, s};
      diag_gens.push_back(e.twisted.group.element_index(pack_product(base, 2, idx)));
    }
    rot_gens.push_back(e.twisted.group.element_index(embed_code(base, 2, 0, r)));
    rot_gens.push_back(e.twisted.group.element_index(embed_code(base, 2, 1, r)));
    e.gammas.push_back({"diagonal", subgroup_closure(e.twisted.group, diag_gens)});
    e.gammas.push_back({"rotations", subgroup_closure(e.twisted.group, rot_gens)});
    e.gammas.push_back({"whole", whole_group(e.twisted.group)});
    pool.push_back(std::move(e));
  }

  {
    PoolEntry e;
    e.name = "swap-sl2f3";
    Group base = sl2_group(3, 1);
    e.twisted = swap_square(base);
    std::vector<int> bb;
    for (int s : borel_indices(base, 3, 1)) {
      bb.push_back(e.twisted.group.element_index(embed_code(base, 2, 0, s)));
      bb.push_back(e.twisted.group.element_index(embed_code(base, 2, 1, s)));
    }
    std::vector<int> diag;
    for (int s : {base.element_index(pack_matrix(3, {1}, {1}, {0}, {1})),
                  base.element_index(pack_matrix(3, {0}, {1}, {2}, {0}))}) {
      std::vector<int> idx{s, s};
      diag.push_back(e.twisted.group.element_index(pack_product(base, 2, idx)));
    }
    e.gammas.push_back({"borel-pair", subgroup_closure(e.twisted.group, bb)});
    e.gammas.push_back({"diagonal", subgroup_closure(e.twisted.group, diag)});
    pool.push_back(std::move(e));
  }

  {
    PoolEntry e;
    e.name = "frobenius-sl2f9";
    Group g = sl2_group(3, 2);
    std::vector<int> borel = borel_indices(g, 3, 2);
    std::vector<int> unipotent{g.element_index(pack_matrix(3, {1}, {1}, {0}, {1})),
                               g.element_index(pack_matrix(3, {1}, {0, 1}, {0}, {1}))};
    e.twisted = make_twisted(std::move(g), frobenius_twist(3, 2), 2);
    e.gammas.push_back({"borel", subgroup_closure(e.twisted.group, borel)});
    e.gammas.push_back({"unipotent", subgroup_closure(e.twisted.group, unipotent)});
    e.gammas.push_back({"whole", whole_group(e.twisted.group)});
    pool.push_back(std::move(e));
  }

  {
    PoolEntry e;
    e.name = "inner-rotation-s4";
    Group g = enumerate_group(perm_carrier(4),
                              {pack_perm({1, 0, 2, 3}), pack_perm({1, 2, 3, 0})});
    std::vector<int> a4{g.element_index(pack_perm({1, 2, 0, 3})),
                        g.element_index(pack_perm({1, 0, 3, 2}))};
    std::vector<int> v4{g.element_index(pack_perm({1, 0, 3, 2})),
                        g.element_index(pack_perm({2, 3, 0, 1}))};
    e.twisted = make_twisted(std::move(g), perm_conjugation_twist(4, {1, 2, 0, 3}), 3);
    e.gammas.push_back({"even", subgroup_closure(e.twisted.group, a4)});
    e.gammas.push_back({"klein", subgroup_closure(e.twisted.group, v4)});
    e.gammas.push_back({"whole", whole_group(e.twisted.group)});
    pool.push_back(std::move(e));
  }

  {
    PoolEntry e;
    e.name = "plain-d4";
    Group g = enumerate_group(perm_carrier(4),
                              {pack_perm({1, 2, 3, 0}), pack_perm({2, 1, 0, 3})});
    int rot = g.element_index(pack_perm({1, 2, 3, 0}));
    int half = g.element_index(pack_perm({2, 3, 0, 1}));
    e.twisted = make_twisted(std::move(g), [](uint64_t c) { return c; }, 2);
    e.gammas.push_back({"rotations", subgroup_closure(e.twisted.group, {rot})});
    e.gammas.push_back({"center", subgroup_closure(e.twisted.group, {half})});
    e.gammas.push_back({"whole", whole_group(e.twisted.group)});
    pool.push_back(std::move(e));
  }

  {
    PoolEntry e;
    e.name = "swap-q8";
    Group base = enumerate_group(matrix_carrier(3, 1),
                                 {pack_matrix(3, {0}, {2}, {1}, {0}),
                                  pack_matrix(3, {1}, {1}, {1}, {2})});
    e.twisted = swap_square(base);
    std::vector<int> diag;
    for (int s = 1; s < base.size(); s *= 2) {
      std::vector<int> idx{s, s};
      diag.push_back(e.twisted.group.element_index(pack_product(base, 2, idx)));
    }
    e.gammas.push_back({"diagonal", subgroup_closure(e.twisted.group, diag)});
    e.gammas.push_back({"whole", whole_group(e.twisted.group)});
    pool.push_back(std::move(e));
  }

  {
    PoolEntry e;
    e.name = "inner-rotation-s3";
    Group g = enumerate_group(perm_carrier(3), {pack_perm({1, 0, 2}), pack_perm({1, 2, 0})});
    int r = g.element_index(pack_perm({1, 2, 0}));
    e.twisted = make_twisted(std::move(g), perm_conjugation_twist(3, {1, 2, 0}), 3);
    e.gammas.push_back({"rotations", subgroup_closure(e.twisted.group, {r})});
    e.gammas.push_back({"trivial", subgroup_closure(e.twisted.group, {})});
    pool.push_back(std::move(e));
  }

  return pool;
}

}  // namespace

std::vector<TtfInstance> ttf_corpus(uint64_t seed, int count) {
  std::vector<PoolEntry> pool = trace_formula_pool();
  std::vector<std::pair<size_t, size_t>> combos;
  for (size_t i = 0; i < pool.size(); ++i)
    for (size_t j = 0; j < pool[i].gammas.size(); ++j) combos.push_back({i, j});

  Rng rng(seed);
  std::vector<TtfInstance> out;
  for (int k = 0; k < count; ++k) {
    auto [pi, gi] = combos[size_t(k) % combos.size()];
    const PoolEntry& entry = pool[pi];
    TtfInstance inst;
    std::ostringstream name;
    name << entry.name << "/" << entry.gammas[gi].name << "/" << k;
    inst.name = name.str();
    inst.twisted = entry.twisted;
    inst.gamma = entry.gammas[gi].subgroup;
    inst.abelian = entry.abelian;
    int support = int(rng.range(1, 6));
    for (int s = 0; s < support; ++s) {
      int g = int(rng.below(uint64_t(entry.twisted.group.size())));
      inst.f.values[g] = Rat(rng.range(-9, 9), rng.range(1, 5));
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<ComplexWithAction> main_term_corpus() {
  std::vector<ComplexWithAction> out;
  out.push_back(cyclic_union(three_complex(), 2));
  out.push_back(cyclic_union(five_complex(), 2));
  out.push_back(cyclic_union(circle_complex(), 2));
  out.push_back(cyclic_union(direct_sum(three_complex(), circle_complex()), 2));
  out.push_back(cyclic_union(five_complex(), 3));
  out.push_back(cyclic_union(four_complex(), 3));
  out.push_back(block_action(cyclic_union(three_complex(), 2), negated(five_complex())));
  out.push_back(cyclic_union(four_complex(), 2));  // two-torsion at p = 2
  return out;
}

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double as_double(const Rat& q) {
  return numerator(q).convert_to<double>() / denominator(q).convert_to<double>();
}

std::vector<Complex> shared_complex_corpus(uint64_t seed, int count) {
  Rng rng(seed);
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i)
    out.push_back(seeded_complex(rng, int(rng.range(2, 5)), 5, 5));
  return out;
}

Outcome run_dual_routes(uint64_t seed) {
  int agree = 0;
  auto corpus = shared_complex_corpus(seed, 50);
  for (const Complex& c : corpus)
    if (rt_sq_via_cohomology(c) == rt_sq_via_determinant_line(c)) ++agree;
  std::ostringstream d;
  d << agree << "/50 complexes with equal values on both routes";
  return {agree == 50, d.str()};
}

Outcome run_scaling(uint64_t seed) {
  Rng rng(seed + 101);
  int agree = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Complex c = seeded_complex(rng, int(rng.range(2, 5)), 5, 5);
    Rat base = rt_sq_via_cohomology(c);
    Complex scaled = c;
    Rat ratio = 1;
    for (int i = 0; i <= c.top(); ++i) {
      Rat f(rng.range(1, 6), rng.range(1, 6));
      scaled.scale[i] = c.scale[i] * f;
      if (i % 2 == 0)
        ratio *= f;
      else
        ratio /= f;
    }
    if (rt_sq_via_cohomology(scaled) == base * ratio * ratio) ++agree;
  }
  std::ostringstream d;
  d << agree << "/20 rescalings moved the value by the even/odd ratio";
  return {agree == 20, d.str()};
}

Outcome run_torsion_ratio(uint64_t seed) {
  Rng rng(seed + 202);
  int agree = 0;
  for (int trial = 0; trial < 20; ++trial) {
    Complex c = seeded_complex(rng, int(rng.range(2, 5)), 5, 5);
    Rat lhs = rt_sq_via_cohomology(c, MuNorm::integral);
    if (lhs != rt_sq_via_determinant_line(c, MuNorm::integral)) continue;
    auto h = cohomology(c);
    Rat ratio = 1;
    for (int i = 0; i <= c.top(); ++i)
      ratio *= rat_pow(Rat(h[i].torsion_order()), (i % 2 == 0) ? -1 : 1);
    if (lhs == ratio * ratio) ++agree;
  }
  bool pin = rt_sq_via_cohomology(three_complex(), MuNorm::integral) == 9 &&
             rt_sq_via_determinant_line(three_complex(), MuNorm::integral) == 9;
  std::ostringstream d;
  d << agree << "/20 torsion ratios, order-three pin " << (pin ? "3" : "off");
  return {agree == 20 && pin, d.str()};
}

Outcome run_spectral_match(uint64_t seed) {
  auto corpus = shared_complex_corpus(seed, 50);
  double worst = 0;
  for (const Complex& c : corpus)
    worst = std::max(worst, std::fabs(analytic_torsion(c).log_t - log_rt(c)));
  std::ostringstream d;
  d << "max |spectral - lattice| = " << num(worst) << " over 50 complexes";
  return {worst <= 1e-9, d.str()};
}

Outcome run_involutive(uint64_t seed) {
  auto corpus = involutive_corpus(seed + 303);
  double worst = 0;
  for (const ComplexWithAction& ca : corpus)
    worst = std::max(worst,
                     std::fabs(analytic_sigma_torsion(ca).log_t - rt_sigma(ca).log_value));
  double swap_value = std::fabs(rt_sigma(corpus[0]).log_value);
  double neg_three = std::fabs(rt_sigma(corpus[1]).log_value + std::log(3.0));
  std::ostringstream d;
  d << "20 involutions, max gap " << num(worst) << ", swap pin " << num(swap_value)
    << ", order-three pin gap " << num(neg_three);
  return {worst <= 1e-9 && swap_value <= 1e-12 && neg_three <= 1e-12, d.str()};
}

Outcome run_products(uint64_t seed) {
  Rng rng(seed + 404);
  std::vector<ComplexWithAction> factors;
  factors.push_back(cyclic_union(three_complex(), 2));
  factors.push_back(negated(five_complex()));
  factors.push_back(negated(three_complex()));
  factors.push_back(cyclic_union(circle_complex(), 2));
  factors.push_back(cyclic_union(four_complex(), 2));
  factors.push_back(negated(circle_complex()));

  double worst = 0;
  for (int pair = 0; pair < 10; ++pair) {
    const ComplexWithAction& a = factors[size_t(rng.below(factors.size()))];
    const ComplexWithAction& b = factors[size_t(rng.below(factors.size()))];
    ComplexWithAction prod = product_with_action(a, b);
    double lhs = analytic_sigma_torsion(prod).log_t;
    double rhs = analytic_sigma_torsion(a).log_t * as_double(lefschetz_number(b)) +
                 as_double(lefschetz_number(a)) * analytic_sigma_torsion(b).log_t;
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  std::ostringstream d;
  d << "10 pairs, max |product - split| = " << num(worst);
  return {worst <= 1e-9, d.str()};
}

Outcome run_descent(uint64_t) {
  auto corpus = simplicial_corpus();
  int ok = 0;
  int refl_fixed = -1, refl_total = -1, rot_fixed = -1, rot_total = -1;
  for (const SimplicialCase& cs : corpus) {
    SmithCheckResult r = smith_check(cs.sc, cs.vertex_map, cs.prime);
    if (r.sequences_exact && r.inequality_holds) ++ok;
    int fixed = 0, total = 0;
    for (int v : r.h_dims_fixed) fixed += v;
    for (int v : r.h_dims_total) total += v;
    if (cs.name == "reflection-circle") refl_fixed = fixed, refl_total = total;
    if (cs.name == "free-rotation") rot_fixed = fixed, rot_total = total;
  }
  std::ostringstream d;
  d << ok << "/" << corpus.size() << " actions exact, reflection-circle " << refl_fixed
    << "<=" << refl_total << ", free-rotation " << rot_fixed << "<=" << rot_total;
  bool pins = refl_fixed == 2 && refl_total == 2 && rot_fixed == 0 && rot_total == 2;
  return {ok == int(corpus.size()) && pins, d.str()};
}

Outcome run_euler(uint64_t) {
  auto corpus = simplicial_corpus();
  int ok = 0;
  Rat refl = -1, rot = -1;
  for (const SimplicialCase& cs : corpus) {
    Rat lef = lefschetz_number(simplicial_action(cs.sc, cs.vertex_map, cs.prime));
    Int chi = fixed_subcomplex(cs.sc, cs.vertex_map).euler_characteristic();
    if (lef == Rat(chi)) ++ok;
    if (cs.name == "reflection-circle") refl = lef;
    if (cs.name == "free-rotation") rot = lef;
  }
  std::ostringstream d;
  d << ok << "/" << corpus.size() << " fixed-point counts, reflection-circle " << refl
    << ", free-rotation " << rot;
  return {ok == int(corpus.size()) && refl == 2 && rot == 0, d.str()};
}

Outcome run_induced(uint64_t) {
  Group base = sl2_group(3, 1);
  TwistedGroup swapped = swap_square(base);
  std::vector<int> bb;
  for (int s : borel_indices(base, 3, 1)) {
    bb.push_back(swapped.group.element_index(embed_code(base, 2, 0, s)));
    bb.push_back(swapped.group.element_index(embed_code(base, 2, 1, s)));
  }
  Subgroup h = subgroup_closure(swapped.group, bb);

  Group g9 = sl2_group(3, 2);
  std::vector<int> borel = borel_indices(g9, 3, 2);
  TwistedGroup f9 = make_twisted(std::move(g9), frobenius_twist(3, 2), 2);
  Subgroup b9 = subgroup_closure(f9.group, borel);

  for (int delta = 0; delta < swapped.group.size(); ++delta) induced_trace(swapped, h, delta);
  for (int delta = 0; delta < f9.group.size(); ++delta) induced_trace(f9, b9, delta);

  int u_base = base.element_index(pack_matrix(3, {1}, {1}, {0}, {1}));
  int u_pair = swapped.group.element_index(embed_code(base, 2, 0, u_base));
  Int swap_e = induced_trace(swapped, h, swapped.group.id());
  Int swap_u = induced_trace(swapped, h, u_pair);
  Int frob_e = induced_trace(f9, b9, f9.group.id());
  Int frob_u = induced_trace(f9, b9, f9.group.element_index(pack_matrix(3, {1}, {1}, {0}, {1})));

  std::ostringstream d;
  d << "all 576 + 720 elements agree; identity " << swap_e << "/" << frob_e << ", unipotent "
    << swap_u << "/" << frob_u;
  return {swap_e == 4 && frob_e == 4 && swap_u == 1 && frob_u == 1, d.str()};
}

Outcome run_ratios(uint64_t) {
  const std::vector<int> primes{3, 5, 7, 11, 13};
  auto uni = c_ratio_sweep(primes, NormKind::unipotent);
  auto rss = c_ratio_sweep(primes, NormKind::regular_semisimple);
  bool ok = true;
  Rat bound = 0;
  for (size_t i = 0; i < uni.size(); ++i) {
    ok = ok && uni[i].ratio == Rat(1, uni[i].prime + 1);
    if (i > 0) ok = ok && uni[i].ratio < uni[i - 1].ratio;
    Rat scaled = uni[i].ratio * (uni[i].prime + 1);
    if (scaled > bound) bound = scaled;
  }
  for (const RatioRow& row : rss) ok = ok && row.ratio <= Rat(2, row.prime + 1);
  std::ostringstream d;
  d << "unipotent 1/(p+1) decreasing over {3,5,7,11,13}, semisimple within 2/(p+1), bound "
    << bound;
  return {ok && bound == 1, d.str()};
}

Outcome run_cocycles(uint64_t) {
  std::vector<std::pair<std::string, Group>> bases;
  bases.emplace_back("s3", enumerate_group(perm_carrier(3),
                                           {pack_perm({1, 0, 2}), pack_perm({1, 2, 0})}));
  bases.emplace_back("sl2f3", sl2_group(3, 1));
  {
    auto c = abelian_carrier({5});
    bases.emplace_back("z5", enumerate_group(c, abelian_generators(*c)));
  }
  {
    auto c = abelian_carrier({6});
    bases.emplace_back("z6", enumerate_group(c, abelian_generators(*c)));
  }
  bases.emplace_back("q8", enumerate_group(matrix_carrier(3, 1),
                                           {pack_matrix(3, {0}, {2}, {1}, {0}),
                                            pack_matrix(3, {1}, {1}, {1}, {2})}));

  bool ok = true;
  std::ostringstream d;
  for (auto& [name, base] : bases) {
    TwistedGroup t = swap_square(std::move(base));
    int classes = h1(t, whole_group(t.group));
    ok = ok && classes == 1;
    d << name << "=" << classes << " ";
  }
  TwistedGroup f9 = make_twisted(sl2_group(3, 2), frobenius_twist(3, 2), 2);
  int frob = h1(f9, whole_group(f9.group));
  ok = ok && frob == 1;
  d << "frobenius=" << frob;
  return {ok, d.str()};
}

Outcome run_trace_formula(uint64_t seed) {
  auto corpus = ttf_corpus(seed + 505, 100);
  int agree = 0, spectral = 0, abelian = 0;
  for (const TtfInstance& inst : corpus) {
    Rat tr = operator_trace(inst.twisted, inst.gamma, inst.f);
    if (geometric_side(inst.twisted, inst.gamma, inst.f).total == tr) ++agree;
    if (inst.abelian) {
      ++abelian;
      if (spectral_side_abelian(inst.twisted, inst.gamma, inst.f) == tr) ++spectral;
    }
  }
  std::ostringstream d;
  d << agree << "/100 geometric totals equal, " << spectral << "/" << abelian
    << " abelian spectral sides equal";
  return {agree == 100 && spectral == abelian, d.str()};
}

Outcome run_main_terms(uint64_t) {
  auto corpus = main_term_corpus();
  int exact = 0;
  bool ok = true;
  for (const ComplexWithAction& ca : corpus) {
    MainTerms mt = main_term_decomposition(ca);
    if (!mt.exact_regime) continue;
    ++exact;
    ok = ok && mt.identity_exact &&
         std::fabs(mt.sigma_torsion - (mt.torsion_count_term + mt.regulator_term)) <= 1e-9;
  }
  std::ostringstream d;
  d << exact << "/" << corpus.size() << " instances in the exact regime, identities hold";
  return {ok && exact >= 5, d.str()};
}

}  // namespace

bool SuiteReport::all_pass() const {
  for (const CriterionResult& r : results)
    if (!r.pass) return false;
  return true;
}

CriterionResult run_criterion(int id, uint64_t seed) {
  static const char* names[] = {
      "dual lattice routes",        "volume scaling law",
      "integral torsion ratio",     "spectral matches lattice",
      "involutive spectral identity", "product formula",
      "mod-p descent",              "fixed-point euler counts",
      "induced trace, both models", "flag fixed-point ratios",
      "cocycle triviality",         "trace formula corpus",
      "main term decomposition",
  };
  if (id < 1 || id > 13) fail(Err::InputError, "criterion ids run from 1 to 13");

  CriterionResult res;
  res.id = id;
  res.name = names[id - 1];
  auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    switch (id) {
      case 1: o = run_dual_routes(seed); break;
      case 2: o = run_scaling(seed); break;
      case 3: o = run_torsion_ratio(seed); break;
      case 4: o = run_spectral_match(seed); break;
      case 5: o = run_involutive(seed); break;
      case 6: o = run_products(seed); break;
      case 7: o = run_descent(seed); break;
      case 8: o = run_euler(seed); break;
      case 9: o = run_induced(seed); break;
      case 10: o = run_ratios(seed); break;
      case 11: o = run_cocycles(seed); break;
      case 12: o = run_trace_formula(seed); break;
      case 13: o = run_main_terms(seed); break;
    }
  } catch (const Error& e) {
    o.pass = false;
    o.detail = std::string("raised ") + err_name(e.code()) + ": " + e.what();
  }
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.pass = o.pass;
  res.detail = std::move(o.detail);

  double budget = id == 1 ? 10.0 : id == 9 ? 60.0 : id == 12 ? 120.0 : 0.0;
  if (budget > 0 && res.seconds >= budget) {
    res.pass = false;
    res.detail += " [over the " + num(budget) + " s budget]";
  }
  return res;
}

SuiteReport run_suite(const std::string& which, uint64_t seed) {
  std::vector<int> ids;
  if (which == "torsion")
    ids = {1, 2, 3, 4};
  else if (which == "equivariant")
    ids = {5, 6, 7, 8, 13};
  else if (which == "basechange")
    ids = {9, 10, 11};
  else if (which == "ttf")
    ids = {12};
  else if (which == "all")
    ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13};
  else
    fail(Err::InputError, "unknown suite name: " + which);

  SuiteReport report;
  for (int id : ids) report.results.push_back(run_criterion(id, seed));
  return report;
}

}  // namespace tf
