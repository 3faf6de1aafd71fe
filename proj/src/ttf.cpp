#include "torsionforge/ttf.hpp"

#include <algorithm>
#include <numeric>

namespace tf {
namespace {

// labels of the ambient twisted classes and the size of each, in one pass
struct AmbientClasses {
  std::vector<int> label;  // element -> least index of its class
  std::map<int, long> size;
};

AmbientClasses ambient_twisted_classes(const TwistedGroup& t) {
  const Group& g = t.group;
  AmbientClasses out;
  out.label.assign(g.elements.size(), -1);
  for (int seed = 0; seed < g.size(); ++seed) {
    if (out.label[size_t(seed)] >= 0) continue;
    std::vector<int> orbit{seed};
    out.label[size_t(seed)] = seed;
    for (size_t head = 0; head < orbit.size(); ++head) {
      for (int x : g.generators) {
        int w = g.mul(g.mul(x, orbit[head]), g.inv(t.twist(x)));
        if (out.label[size_t(w)] < 0) {
          out.label[size_t(w)] = seed;
          orbit.push_back(w);
        }
      }
    }
    out.size[seed] = long(orbit.size());
  }
  return out;
}

long twisted_fixed_points(const TwistedGroup& t, const Subgroup& h) {
  long n = 0;
  for (int x : h.elements)
    if (t.twist(x) == x) ++n;
  return n;
}

}  // namespace

Rat operator_trace(const TwistedGroup& t, const Subgroup& gamma, const TestFunction& f) {
  require_sigma_stable(t, gamma);
  const Group& g = t.group;
  CosetSpace cs = right_cosets(g, gamma);
  int n = int(cs.reps.size());
  std::vector<int> dense(g.elements.size(), -1);
  for (int i = 0; i < n; ++i) dense[size_t(cs.reps[size_t(i)])] = i;

  // sparse operator matrix, row per source coset
  std::vector<std::map<int, Rat>> rows;
  rows.resize(size_t(n));
  for (int i = 0; i < n; ++i) {
    int moved_base = t.twist_power(cs.reps[size_t(i)], t.prime - 1);
    for (const auto& [gi, val] : f.values) {
      int target = dense[size_t(cs.label[size_t(g.mul(moved_base, gi))])];
      rows[size_t(i)][target] += val;
    }
  }
  Rat from_matrix(0);
  for (int i = 0; i < n; ++i) {
    auto it = rows[size_t(i)].find(i);
    if (it != rows[size_t(i)].end()) from_matrix += it->second;
  }

  // double sum over cosets and the subgroup
  Rat from_double_sum(0);
  for (int rep : cs.reps) {
    int moved = g.inv(t.twist_power(rep, t.prime - 1));
    for (int c : gamma.elements) from_double_sum += f.at(g.mul(g.mul(moved, c), rep));
  }

  if (from_matrix != from_double_sum)
    fail(Err::MismatchBetweenFormulas,
         "operator trace disagrees between its matrix and double-sum forms");
  return from_matrix;
}

GeometricReport geometric_side(const TwistedGroup& t, const Subgroup& gamma,
                               const TestFunction& f) {
  require_sigma_stable(t, gamma);
  const Group& g = t.group;
  TwistedClassReport classes = twisted_classes(t, gamma);
  AmbientClasses ambient = ambient_twisted_classes(t);

  std::map<int, Rat> orbital_of;  // ambient class label -> sum of f over it
  for (const auto& [gi, val] : f.values) orbital_of[ambient.label[size_t(gi)]] += val;

  GeometricReport report;
  report.h1_size = classes.h1_size;
  long gamma_size = long(gamma.elements.size());
  for (const TwistedClass& c : classes.classes) {
    GeometricTerm term;
    term.representative = c.representative;
    term.class_size = c.size;
    term.norm_trivial = c.norm_trivial;
    int amb = ambient.label[size_t(c.representative)];
    long ambient_stab = long(g.size()) / ambient.size.at(amb);
    long gamma_stab = gamma_size / long(c.size);
    term.volume = Rat(ambient_stab, gamma_stab);
    auto it = orbital_of.find(amb);
    term.orbital = it == orbital_of.end() ? Rat(0) : it->second;
    term.contribution = term.volume * term.orbital;
    report.total += term.contribution;
    if (term.norm_trivial) report.h1_term += term.contribution;
    report.terms.push_back(std::move(term));
  }

  // counting form of the norm-trivial block: valid once every ambient
  // cocycle class is the identity class and the gamma stabilizers of the
  // norm-trivial classes share one size
  bool uniform_stab = true;
  long sigma_fixed_gamma = twisted_fixed_points(t, gamma);
  for (const GeometricTerm& term : report.terms) {
    if (!term.norm_trivial) continue;
    if (gamma_size / long(term.class_size) != sigma_fixed_gamma) uniform_stab = false;
  }
  bool ambient_h1_trivial = true;
  for (const auto& [seed, sz] : ambient.size) {
    if (seed == ambient.label[size_t(g.id())]) continue;
    if (norm_element(t, seed) == g.id()) ambient_h1_trivial = false;
  }
  if (uniform_stab && ambient_h1_trivial && report.h1_size > 0) {
    long sigma_fixed_g = twisted_fixed_points(t, whole_group(g));
    int amb_e = ambient.label[size_t(g.id())];
    auto it = orbital_of.find(amb_e);
    Rat orbital_e = it == orbital_of.end() ? Rat(0) : it->second;
    Rat counting =
        Rat(report.h1_size) * Rat(sigma_fixed_g, sigma_fixed_gamma) * orbital_e;
    if (counting != report.h1_term)
      fail(Err::MismatchBetweenFormulas,
           "norm-trivial contributions disagree with their counting form");
    report.closed_form_checked = true;
  }

  Rat check = operator_trace(t, gamma, f);
  if (check != report.total)
    fail(Err::MismatchBetweenFormulas,
         "geometric side does not reproduce the operator trace");
  return report;
}

Rat spectral_side_abelian(const TwistedGroup& t, const Subgroup& gamma, const TestFunction& f) {
  require_sigma_stable(t, gamma);
  const Group& g = t.group;
  const auto* carrier = dynamic_cast<const AbelianCarrier*>(g.carrier.get());
  if (carrier == nullptr)
    fail(Err::GroupNotAbelian, "the spectral side needs an abelian carrier");

  const std::vector<long>& moduli = carrier->moduli();
  size_t r = moduli.size();
  long big = 1;
  for (long m : moduli) big = std::lcm(big, m);

  std::vector<std::vector<long>> coords(g.elements.size());
  for (size_t i = 0; i < g.elements.size(); ++i) coords[i] = carrier->coords(g.elements[i]);

  auto pairing = [&](const std::vector<long>& character, const std::vector<long>& x) {
    long e = 0;
    for (size_t j = 0; j < r; ++j) e = (e + character[j] * x[j] % big * (big / moduli[j])) % big;
    return e;
  };

  // characters live on the same coordinate tuples as the elements
  std::vector<int> stable;
  for (int c = 0; c < g.size(); ++c) {
    const std::vector<long>& ch = coords[size_t(c)];
    bool ok = true;
    for (int s : g.generators) {
      if (pairing(ch, coords[size_t(t.twist(s))]) != pairing(ch, coords[size_t(s)])) {
        ok = false;
        break;
      }
    }
    for (int s : gamma.generators) {
      if (!ok) break;
      if (pairing(ch, coords[size_t(s)]) != 0) ok = false;
    }
    if (ok) stable.push_back(c);
  }

  // summing a character of the stable subgroup: |S| on its common kernel
  Rat total(0);
  for (const auto& [gi, val] : f.values) {
    bool in_kernel = true;
    for (int c : stable) {
      if (pairing(coords[size_t(c)], coords[size_t(gi)]) != 0) {
        in_kernel = false;
        break;
      }
    }
    if (in_kernel) total += val * Rat(long(stable.size()));
  }

  Rat check = operator_trace(t, gamma, f);
  if (check != total)
    fail(Err::MismatchBetweenFormulas,
         "spectral side does not reproduce the operator trace");
  return total;
}

}  // namespace tf
