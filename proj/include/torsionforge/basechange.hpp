#pragma once

#include "torsionforge/errors.hpp"
#include "torsionforge/exactla.hpp"
#include "torsionforge/numeric.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace tf {

// Group elements travel as opaque 64-bit codes; the carrier knows how to
// compose, invert, and print them.
class Carrier {
 public:
  virtual ~Carrier() = default;
  virtual uint64_t mul(uint64_t a, uint64_t b) const = 0;
  virtual uint64_t inv(uint64_t a) const = 0;
  virtual uint64_t identity() const = 0;
  virtual std::string show(uint64_t a) const = 0;
};

// Finite direct sum of cyclic groups, coordinates packed in mixed radix.
// Kept public so character enumeration can reach the moduli.
class AbelianCarrier final : public Carrier {
 public:
  explicit AbelianCarrier(std::vector<long> moduli);
  uint64_t mul(uint64_t a, uint64_t b) const override;
  uint64_t inv(uint64_t a) const override;
  uint64_t identity() const override { return 0; }
  std::string show(uint64_t a) const override;

  const std::vector<long>& moduli() const { return moduli_; }
  std::vector<long> coords(uint64_t code) const;
  uint64_t pack(const std::vector<long>& coords) const;

 private:
  std::vector<long> moduli_;
  std::vector<uint64_t> stride_;
};

struct Group {
  std::shared_ptr<const Carrier> carrier;
  std::vector<uint64_t> elements;  // breadth-first order, identity first
  std::unordered_map<uint64_t, int> index;
  std::vector<int> inverse;
  std::vector<int> generators;   // as indices
  std::vector<int> mul_table;    // cached only for small groups

  int size() const { return int(elements.size()); }
  int id() const { return 0; }
  int mul(int a, int b) const;
  int inv(int a) const { return inverse[size_t(a)]; }
  int element_index(uint64_t code) const;  // InputError if absent
};

// Breadth-first closure of the generators; throws EnumerationBoundExceeded
// past a million elements.
Group enumerate_group(std::shared_ptr<const Carrier> carrier,
                      const std::vector<uint64_t>& generator_codes);

// A group together with an automorphism of order dividing a prime, as an
// index-level table.
struct TwistedGroup {
  Group group;
  int prime = 2;
  std::vector<int> sigma;

  int twist(int a) const { return sigma[size_t(a)]; }
  int twist_power(int a, int e) const {
    for (int i = 0; i < e; ++i) a = sigma[size_t(a)];
    return a;
  }
};

TwistedGroup make_twisted(Group g, const std::function<uint64_t(uint64_t)>& sigma_code,
                          int prime);

struct Subgroup {
  std::vector<int> elements;  // ascending parent indices
  std::vector<char> member;
  std::vector<int> generators;

  int size() const { return int(elements.size()); }
};

Subgroup subgroup_closure(const Group& g, const std::vector<int>& generator_indices);
Subgroup whole_group(const Group& g);
void require_sigma_stable(const TwistedGroup& t, const Subgroup& h);

// g . sigma(g) ... sigma^(p-1)(g)
int norm_element(const TwistedGroup& t, int g);

// orbit of g under x . g . sigma(x)^{-1} for x in gamma, ascending
std::vector<int> twisted_orbit(const TwistedGroup& t, const Subgroup& gamma, int g);

// ordinary conjugacy class, ascending
std::vector<int> conjugacy_class(const Group& g, int a);

struct TwistedClass {
  int representative = 0;  // least index in the orbit
  int size = 0;
  int norm_class = 0;  // least index in the ambient conjugacy class of the norm
  bool norm_trivial = false;
};
struct TwistedClassReport {
  std::vector<TwistedClass> classes;
  int h1_size = 0;  // classes whose norm is the identity
};

// Twisted conjugacy classes of gamma; with the whole group this indexes the
// geometric side of the trace formula.
TwistedClassReport twisted_classes(const TwistedGroup& t, const Subgroup& gamma);

int h1(const TwistedGroup& t, const Subgroup& gamma);

struct TwistedCentralizer {
  std::vector<int> elements;
  Int order = 0;
  Int norm_centralizer_order = 0;  // ordinary centralizer of the norm
};
TwistedCentralizer twisted_centralizer(const TwistedGroup& t, int delta);

struct CosetSpace {
  std::vector<int> label;  // element -> least index in its right coset H x
  std::vector<int> reps;   // the distinct least indices, ascending
};
CosetSpace right_cosets(const Group& g, const Subgroup& h);

// Fixed cosets of H x -> H sigma^(p-1)(x) delta, computed both by moving the
// cosets and through the twisted class equation; the two counts must agree.
Int induced_trace(const TwistedGroup& t, const Subgroup& h, int delta);

// Fixed-point ratios on the flag cosets of a two-block special linear family
// with the swap twist, driven by the norm of the chosen twisted element.
struct RatioRow {
  int prime = 0;
  Int fixed_points = 0;
  Rat ratio;  // fixed_points / (prime + 1)
};
enum class NormKind { unipotent, regular_semisimple, trivial };
std::vector<RatioRow> c_ratio_sweep(const std::vector<int>& primes, NormKind kind);

// trace of (a1 (x) a2) composed with the factor swap equals trace(a1 a2);
// both sides are built independently and compared before returning
Int tensor_trace_identity(const IntMat& a1, const IntMat& a2);

// carriers and twists

struct FqElem {
  int a = 0;  // constant coefficient
  int b = 0;  // coefficient of the adjoined root, degree-two fields only
};

// 2x2 matrices over F_{p^deg}, deg <= 2, fixed irreducibles per prime
std::shared_ptr<const Carrier> matrix_carrier(int p, int deg);
uint64_t pack_matrix(int p, FqElem e00, FqElem e01, FqElem e10, FqElem e11);
std::function<uint64_t(uint64_t)> frobenius_twist(int p, int deg);
std::vector<uint64_t> sl2_generators(int p, int deg);
std::vector<uint64_t> borel_generators(int p, int deg);  // upper triangular

std::shared_ptr<const Carrier> perm_carrier(int n);  // n <= 16
uint64_t pack_perm(const std::vector<int>& images);
std::function<uint64_t(uint64_t)> perm_conjugation_twist(int n, const std::vector<int>& images);

std::shared_ptr<const AbelianCarrier> abelian_carrier(std::vector<long> moduli);
std::vector<uint64_t> abelian_generators(const AbelianCarrier& c);
// x -> M x on coordinates; requires the matrix to descend to the moduli
std::function<uint64_t(uint64_t)> abelian_matrix_twist(std::shared_ptr<const AbelianCarrier> c,
                                                       std::vector<std::vector<long>> m);
std::function<uint64_t(uint64_t)> abelian_inversion_twist(std::shared_ptr<const AbelianCarrier> c);

// `copies` plain copies of an enumerated base group; codes are mixed-radix
// tuples of base element indices
std::shared_ptr<const Carrier> product_carrier(std::shared_ptr<const Group> base, int copies);
std::vector<uint64_t> product_generators(const Group& base, int copies);
uint64_t pack_product(const Group& base, int copies, const std::vector<int>& indices);
// (x_1, ..., x_k) -> (x_2, ..., x_k, x_1)
std::function<uint64_t(uint64_t)> shift_twist(long base_size, int copies);

}  // namespace tf
