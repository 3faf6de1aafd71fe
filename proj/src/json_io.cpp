#include "torsionforge/json_io.hpp"

#include <fstream>
#include <memory>
#include <sstream>

namespace tf {

namespace {

[[noreturn]] void bad(const std::string& what, const OrderedJson& j) {
  std::string shown = j.dump();
  if (shown.size() > 120) shown = shown.substr(0, 117) + "...";
  fail(Err::InputError, what + ", got " + shown);
}

const OrderedJson& field(const OrderedJson& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    fail(Err::InputError, std::string("missing required field \"") + name + "\"");
  return j.at(name);
}

int small_int(const OrderedJson& j) {
  Int n = int_from_json(j);
  if (n < -1000000000 || n > 1000000000) bad("expected a small integer", j);
  return n.convert_to<int>();
}

std::vector<int> int_vector(const OrderedJson& j) {
  if (!j.is_array()) bad("expected an array of integers", j);
  std::vector<int> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(small_int(e));
  return out;
}

std::vector<long> long_vector(const OrderedJson& j) {
  if (!j.is_array()) bad("expected an array of integers", j);
  std::vector<long> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(long(small_int(e)));
  return out;
}

}  // namespace

OrderedJson load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Err::InputError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return OrderedJson::parse(buf.str());
  } catch (const std::exception& e) {
    fail(Err::InputError, path + ": " + e.what());
  }
}

Int int_from_json(const OrderedJson& j) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (j.is_number_unsigned()) return Int(j.get<unsigned long long>());
  if (j.is_string()) {
    try {
      return Int(j.get<std::string>());
    } catch (const std::exception&) {
      bad("expected a decimal integer string", j);
    }
  }
  bad("expected an integer", j);
}

OrderedJson int_to_json(const Int& n) {
  static const Int kSafe = Int(1) << 53;
  if (abs_int(n) < kSafe) return OrderedJson(n.convert_to<long long>());
  return OrderedJson(n.str());
}

Rat rat_from_json(const OrderedJson& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      try {
        Int num(s.substr(0, slash)), den(s.substr(slash + 1));
        if (den == 0) bad("zero denominator", j);
        return Rat(num, den);
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
        bad("expected \"p/q\"", j);
      }
    }
  }
  return Rat(int_from_json(j));
}

OrderedJson rat_to_json(const Rat& q) {
  if (denominator(q) == 1) return int_to_json(numerator(q));
  return OrderedJson(numerator(q).str() + "/" + denominator(q).str());
}

IntMat intmat_from_json(const OrderedJson& j) {
  if (!j.is_array()) bad("expected a matrix (array of rows)", j);
  int rows = int(j.size());
  int cols = rows ? int(j.at(0).size()) : 0;
  IntMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j.at(size_t(i));
    if (!row.is_array() || int(row.size()) != cols) bad("ragged matrix row", row);
    for (int k = 0; k < cols; ++k) m.at(i, k) = int_from_json(row.at(size_t(k)));
  }
  return m;
}

OrderedJson intmat_to_json(const IntMat& m) {
  OrderedJson rows = OrderedJson::array();
  for (int i = 0; i < m.rows(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (int k = 0; k < m.cols(); ++k) row.push_back(int_to_json(m.at(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

RatMat ratmat_from_json(const OrderedJson& j) {
  if (!j.is_array()) bad("expected a matrix (array of rows)", j);
  int rows = int(j.size());
  int cols = rows ? int(j.at(0).size()) : 0;
  RatMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const auto& row = j.at(size_t(i));
    if (!row.is_array() || int(row.size()) != cols) bad("ragged matrix row", row);
    for (int k = 0; k < cols; ++k) m.at(i, k) = rat_from_json(row.at(size_t(k)));
  }
  return m;
}

ComplexInput complex_from_json(const OrderedJson& j) {
  if (!j.is_object()) bad("complex file must be a JSON object", j);
  const std::string kind = j.value("kind", std::string("cochain"));
  ComplexInput out;

  if (kind == "simplicial") {
    out.simplicial = true;
    int n = small_int(field(j, "vertices"));
    std::vector<std::vector<int>> facets;
    for (const auto& f : field(j, "facets")) facets.push_back(int_vector(f));
    out.sc = from_facets(n, std::move(facets));
    if (j.contains("local_system")) {
      const auto& lsj = j.at("local_system");
      out.ls.rank = small_int(field(lsj, "rank"));
      if (lsj.contains("transport")) {
        for (const auto& t : lsj.at("transport")) {
          auto edge = int_vector(field(t, "edge"));
          if (edge.size() != 2) bad("edge must list two vertices", field(t, "edge"));
          out.ls.transport[{edge[0], edge[1]}] = intmat_from_json(field(t, "matrix"));
        }
      }
      validate_local_system(out.sc, out.ls);
      out.has_local_system = true;
      out.complex = cochain_complex(out.sc, out.ls);
    } else {
      out.complex = cochain_complex(out.sc);
    }
    return out;
  }

  if (kind != "cochain") fail(Err::InputError, "unknown complex kind \"" + kind + "\"");
  auto ranks = int_vector(field(j, "ranks"));
  std::vector<IntMat> diffs;
  if (j.contains("diff"))
    for (const auto& d : j.at("diff")) diffs.push_back(intmat_from_json(d));
  out.complex = make_complex(std::move(ranks), std::move(diffs));
  if (j.contains("metric")) {
    std::vector<RatMat> ms;
    for (const auto& m : j.at("metric")) ms.push_back(ratmat_from_json(m));
    if (ms.size() != out.complex.ranks.size())
      fail(Err::InputError, "need one metric per degree");
    out.complex.metric = std::move(ms);
  }
  if (j.contains("scale")) {
    std::vector<Rat> sc;
    for (const auto& s : j.at("scale")) sc.push_back(rat_from_json(s));
    if (sc.size() != out.complex.ranks.size())
      fail(Err::InputError, "need one scale per degree");
    out.complex.scale = std::move(sc);
  }
  validate(out.complex);
  return out;
}

ActionInput action_from_json(const OrderedJson& j) {
  if (!j.is_object()) bad("action file must be a JSON object", j);
  ActionInput out;
  out.prime = small_int(field(j, "prime"));
  if (j.contains("vertex_map") == j.contains("matrices"))
    fail(Err::InputError, "action needs exactly one of \"vertex_map\" or \"matrices\"");
  if (j.contains("vertex_map")) {
    out.vertex = true;
    out.vertex_map = int_vector(j.at("vertex_map"));
  } else {
    for (const auto& m : j.at("matrices")) out.matrices.push_back(intmat_from_json(m));
  }
  return out;
}

ComplexWithAction attach_action(const ComplexInput& in, const ActionInput& a) {
  if (a.vertex) {
    if (!in.simplicial)
      fail(Err::InputError, "vertex_map actions need a simplicial complex file");
    if (in.has_local_system)
      fail(Err::InputError, "vertex_map actions do not combine with local systems");
    return simplicial_action(in.sc, a.vertex_map, a.prime);
  }
  return with_action(in.complex, a.matrices, a.prime);
}

namespace {

FqElem fq_from_json(const OrderedJson& j) {
  FqElem e;
  if (j.is_array()) {
    if (j.size() != 2) bad("field entries are ints or [a, b] pairs", j);
    e.a = small_int(j.at(0));
    e.b = small_int(j.at(1));
  } else {
    e.a = small_int(j);
  }
  return e;
}

uint64_t matrix_code(int p, const OrderedJson& j) {
  if (!j.is_array() || j.size() != 2 || !j.at(0).is_array() || j.at(0).size() != 2 ||
      !j.at(1).is_array() || j.at(1).size() != 2)
    bad("matrix elements are 2x2 arrays", j);
  return pack_matrix(p, fq_from_json(j.at(0).at(0)), fq_from_json(j.at(0).at(1)),
                     fq_from_json(j.at(1).at(0)), fq_from_json(j.at(1).at(1)));
}

// Carrier plus the pieces the twist and element parsers need afterwards.
struct RawGroup {
  Group group;
  std::string kind;
  int p = 0;       // matrix kind
  int degree = 1;  // matrix kind
  int points = 0;  // perm kind
  std::shared_ptr<const AbelianCarrier> ab;
  std::function<uint64_t(const OrderedJson&)> encode;
};

RawGroup raw_group_from_json(const OrderedJson& j) {
  RawGroup out;
  out.kind = field(j, "kind").get<std::string>();

  if (out.kind == "matrix") {
    out.p = small_int(field(j, "p"));
    out.degree = j.value("degree", 1);
    auto carrier = matrix_carrier(out.p, out.degree);
    std::vector<uint64_t> gens;
    const auto& g = field(j, "generators");
    if (g.is_string()) {
      const std::string preset = g.get<std::string>();
      if (preset == "sl2")
        gens = sl2_generators(out.p, out.degree);
      else if (preset == "borel")
        gens = borel_generators(out.p, out.degree);
      else
        fail(Err::InputError, "unknown generator preset \"" + preset + "\"");
    } else {
      int p = out.p;
      for (const auto& e : g) gens.push_back(matrix_code(p, e));
    }
    out.group = enumerate_group(carrier, gens);
    int p = out.p;
    out.encode = [p](const OrderedJson& e) { return matrix_code(p, e); };
    return out;
  }

  if (out.kind == "perm") {
    out.points = small_int(field(j, "points"));
    auto carrier = perm_carrier(out.points);
    std::vector<uint64_t> gens;
    int n = out.points;
    for (const auto& e : field(j, "generators")) {
      auto images = int_vector(e);
      if (int(images.size()) != n) bad("permutation must list every image", e);
      gens.push_back(pack_perm(images));
    }
    out.group = enumerate_group(carrier, gens);
    out.encode = [n](const OrderedJson& e) {
      auto images = int_vector(e);
      if (int(images.size()) != n) bad("permutation must list every image", e);
      return pack_perm(images);
    };
    return out;
  }

  if (out.kind == "abelian") {
    auto moduli = long_vector(field(j, "moduli"));
    out.ab = abelian_carrier(moduli);
    out.group = enumerate_group(out.ab, abelian_generators(*out.ab));
    auto ab = out.ab;
    out.encode = [ab](const OrderedJson& e) { return ab->pack(long_vector(e)); };
    return out;
  }

  fail(Err::InputError, "unknown group kind \"" + out.kind + "\"");
}

Subgroup subgroup_from_json(const OrderedJson& j, const Group& g,
                            const std::function<uint64_t(const OrderedJson&)>& encode) {
  if (j.is_string()) {
    const std::string preset = j.get<std::string>();
    if (preset == "whole") return whole_group(g);
    if (preset == "trivial") return subgroup_closure(g, {});
    fail(Err::InputError, "unknown subgroup preset \"" + preset + "\"");
  }
  std::vector<int> gens;
  for (const auto& e : field(j, "generators")) gens.push_back(g.element_index(encode(e)));
  return subgroup_closure(g, gens);
}

}  // namespace

GroupInput group_from_json(const OrderedJson& j) {
  if (!j.is_object()) bad("group file must be a JSON object", j);
  GroupInput out;
  const std::string kind = field(j, "kind").get<std::string>();

  if (kind == "product_shift") {
    // Cyclic coordinate shift on plain copies of a base group; the number of
    // copies doubles as the twist order.
    RawGroup rg = raw_group_from_json(field(j, "base"));
    if (j.contains("twist"))
      fail(Err::InputError, "product_shift groups fix their twist to the coordinate shift");
    int copies = small_int(field(j, "copies"));
    auto base = std::make_shared<Group>(std::move(rg.group));
    Group big = enumerate_group(product_carrier(base, copies),
                                product_generators(*base, copies));
    out.twisted = make_twisted(std::move(big), shift_twist(base->size(), copies), copies);
    auto base_encode = rg.encode;
    out.encode = [base, copies, base_encode](const OrderedJson& e) {
      if (!e.is_array() || int(e.size()) != copies)
        bad("element must list one entry per copy", e);
      std::vector<int> idx;
      for (const auto& part : e) idx.push_back(base->element_index(base_encode(part)));
      return pack_product(*base, copies, idx);
    };
  } else {
    RawGroup rg = raw_group_from_json(j);
    OrderedJson tw = j.value("twist", OrderedJson{{"kind", "identity"}, {"order", 2}});
    const std::string tkind = field(tw, "kind").get<std::string>();
    std::function<uint64_t(uint64_t)> sigma;
    int order = tw.value("order", 2);

    if (tkind == "identity") {
      sigma = [](uint64_t x) { return x; };
    } else if (tkind == "frobenius") {
      if (rg.kind != "matrix" || rg.degree != 2)
        fail(Err::InputError, "frobenius twists need a degree-two matrix group");
      sigma = frobenius_twist(rg.p, rg.degree);
    } else if (tkind == "inversion") {
      if (!rg.ab) fail(Err::InputError, "inversion twists need an abelian group");
      sigma = abelian_inversion_twist(rg.ab);
    } else if (tkind == "matrix") {
      if (!rg.ab) fail(Err::InputError, "matrix twists need an abelian group");
      std::vector<std::vector<long>> rows;
      for (const auto& r : field(tw, "matrix")) rows.push_back(long_vector(r));
      sigma = abelian_matrix_twist(rg.ab, std::move(rows));
      order = small_int(field(tw, "order"));
    } else if (tkind == "conjugation") {
      auto carrier = rg.group.carrier;
      uint64_t c = rg.encode(field(tw, "by"));
      uint64_t ci = carrier->inv(c);
      sigma = [carrier, c, ci](uint64_t x) { return carrier->mul(carrier->mul(c, x), ci); };
      order = small_int(field(tw, "order"));
    } else if (tkind == "perm_conjugation") {
      if (rg.kind != "perm")
        fail(Err::InputError, "perm_conjugation twists need a permutation group");
      sigma = perm_conjugation_twist(rg.points, int_vector(field(tw, "images")));
      order = small_int(field(tw, "order"));
    } else {
      fail(Err::InputError, "unknown twist kind \"" + tkind + "\"");
    }

    out.abelian = bool(rg.ab);
    out.encode = rg.encode;
    out.twisted = make_twisted(std::move(rg.group), sigma, order);
  }

  OrderedJson sub = j.value("subgroup", OrderedJson("whole"));
  out.gamma = subgroup_from_json(sub, out.twisted.group, out.encode);
  require_sigma_stable(out.twisted, out.gamma);
  return out;
}

Subgroup subgroup_override(const GroupInput& g, const OrderedJson& choice) {
  Subgroup s = subgroup_from_json(choice, g.twisted.group, g.encode);
  require_sigma_stable(g.twisted, s);
  return s;
}

TestFunction function_from_json(const OrderedJson& j, const GroupInput& g) {
  if (!j.is_object()) bad("function file must be a JSON object", j);
  TestFunction f;
  for (const auto& entry : field(j, "support")) {
    int idx = g.twisted.group.element_index(g.encode(field(entry, "element")));
    f.values[idx] = rat_from_json(field(entry, "value"));
  }
  return f;
}

uint64_t fnv1a64(const std::string& bytes, uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
  return std::string(buf);
}

}  // namespace tf
