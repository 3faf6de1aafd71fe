#pragma once

#include "torsionforge/basechange.hpp"
#include "torsionforge/complexes.hpp"
#include "torsionforge/equivariant.hpp"
#include "torsionforge/simplicial.hpp"
#include "torsionforge/ttf.hpp"

#include <json.hpp>

#include <functional>
#include <string>

namespace tf {

// Reports keep their field order, so serialized output is reproducible
// byte for byte.
using OrderedJson = nlohmann::ordered_json;

// Reads and parses a file; all failures surface as InputError.
OrderedJson load_json_file(const std::string& path);

// Integers accept JSON numbers or decimal strings; they serialize as numbers
// when they fit in 53 bits and as decimal strings past that.
Int int_from_json(const OrderedJson& j);
OrderedJson int_to_json(const Int& n);

// Rationals additionally accept "p/q" strings and always serialize that way
// when the denominator is not 1.
Rat rat_from_json(const OrderedJson& j);
OrderedJson rat_to_json(const Rat& q);

IntMat intmat_from_json(const OrderedJson& j);
OrderedJson intmat_to_json(const IntMat& m);
RatMat ratmat_from_json(const OrderedJson& j);

// A complex file is either a raw cochain description or a simplicial one;
// the simplicial form keeps its geometry around for the equivariant ops.
struct ComplexInput {
  Complex complex;
  bool simplicial = false;
  SimplicialComplex sc;
  LocalSystem ls;
  bool has_local_system = false;
};
ComplexInput complex_from_json(const OrderedJson& j);

// Prime-order automorphism data: a vertex permutation (simplicial inputs
// only) or one matrix per degree.
struct ActionInput {
  int prime = 2;
  bool vertex = false;
  std::vector<int> vertex_map;
  std::vector<IntMat> matrices;
};
ActionInput action_from_json(const OrderedJson& j);
ComplexWithAction attach_action(const ComplexInput& in, const ActionInput& a);

// A parsed group file: the twisted group, the distinguished subgroup, and an
// element encoder matching the file's element syntax so later files (test
// functions, explicit generators) can name elements the same way.
struct GroupInput {
  TwistedGroup twisted;
  Subgroup gamma;
  bool abelian = false;
  std::function<uint64_t(const OrderedJson&)> encode;
};
GroupInput group_from_json(const OrderedJson& j);

// Replaces the subgroup chosen by the group file: either a preset name
// ("whole", "trivial") or an object with explicit "generators".
Subgroup subgroup_override(const GroupInput& g, const OrderedJson& choice);

TestFunction function_from_json(const OrderedJson& j, const GroupInput& g);

// FNV-1a over the raw bytes, used both for report digests and cache keys.
uint64_t fnv1a64(const std::string& bytes, uint64_t h = 14695981039346656037ull);
std::string hex64(uint64_t v);

}  // namespace tf
