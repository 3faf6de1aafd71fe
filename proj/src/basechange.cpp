#include "torsionforge/basechange.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>

namespace tf {
namespace {

constexpr int kEnumerationBound = 1'000'000;
constexpr int kMulTableBound = 10'000;

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// Fixed degree-two irreducibles x^2 + c1 x + c0 over F_p.
void irreducible_coeffs(int p, int& c0, int& c1) {
  switch (p) {
    case 2: c0 = 1; c1 = 1; return;
    case 3: c0 = 2; c1 = 2; return;
    case 5: c0 = 2; c1 = 4; return;
    case 7: c0 = 3; c1 = 6; return;
    case 11: c0 = 2; c1 = 7; return;
    case 13: c0 = 2; c1 = 12; return;
    default: fail(Err::InputError, "no quadratic extension table for this prime");
  }
}

// Elements of F_{p^deg} indexed as a + p*b for a + b x.
class FqField {
 public:
  FqField(int p, int deg) : p_(p), deg_(deg) {
    if (!is_prime(p) || p > 13) fail(Err::InputError, "field characteristic must be a prime at most 13");
    if (deg != 1 && deg != 2) fail(Err::InputError, "field degree must be 1 or 2");
    q_ = deg == 1 ? p : p * p;
    if (deg == 2) irreducible_coeffs(p, c0_, c1_);
  }

  int q() const { return q_; }
  int a_of(int e) const { return e % p_; }
  int b_of(int e) const { return e / p_; }
  int make(int a, int b) const { return mod(a) + p_ * mod(b); }

  int add(int x, int y) const { return make(a_of(x) + a_of(y), b_of(x) + b_of(y)); }
  int neg(int x) const { return make(-a_of(x), -b_of(x)); }

  int mul(int x, int y) const {
    int a0 = a_of(x), a1 = b_of(x), b0 = a_of(y), b1 = b_of(y);
    if (deg_ == 1) return make(a0 * b0, 0);
    // x^2 = -c1 x - c0
    return make(a0 * b0 - a1 * b1 * c0_, a0 * b1 + a1 * b0 - a1 * b1 * c1_);
  }

  int inv(int x) const {
    if (x == 0) fail(Err::InputError, "zero has no inverse in the field");
    for (int y = 1; y < q_; ++y)
      if (mul(x, y) == 1) return y;
    fail(Err::AssertionFailed, "field element without inverse");
  }

  int frobenius(int x) const {
    if (deg_ == 1) return x;
    // the conjugate root of x^2 + c1 x + c0 is -c1 - x
    return make(a_of(x) - b_of(x) * c1_, -b_of(x));
  }

  int multiplicative_generator() const {
    for (int g = 1; g < q_; ++g) {
      int e = g, order = 1;
      while (e != 1) {
        e = mul(e, g);
        ++order;
      }
      if (order == q_ - 1) return g;
    }
    fail(Err::AssertionFailed, "no generator of the unit group");
  }

 private:
  int mod(int v) const { return ((v % p_) + p_) % p_; }
  int p_, deg_, q_ = 0, c0_ = 0, c1_ = 0;
};

class MatrixCarrier final : public Carrier {
 public:
  MatrixCarrier(int p, int deg) : f_(p, deg) {}

  uint64_t mul(uint64_t a, uint64_t b) const override {
    std::array<int, 4> x = unpack(a), y = unpack(b), r;
    r[0] = f_.add(f_.mul(x[0], y[0]), f_.mul(x[1], y[2]));
    r[1] = f_.add(f_.mul(x[0], y[1]), f_.mul(x[1], y[3]));
    r[2] = f_.add(f_.mul(x[2], y[0]), f_.mul(x[3], y[2]));
    r[3] = f_.add(f_.mul(x[2], y[1]), f_.mul(x[3], y[3]));
    return pack(r);
  }

  uint64_t inv(uint64_t a) const override {
    std::array<int, 4> x = unpack(a);
    int det = f_.add(f_.mul(x[0], x[3]), f_.neg(f_.mul(x[1], x[2])));
    int d = f_.inv(det);
    return pack({f_.mul(d, x[3]), f_.mul(d, f_.neg(x[1])), f_.mul(d, f_.neg(x[2])),
                 f_.mul(d, x[0])});
  }

  uint64_t identity() const override { return pack({1, 0, 0, 1}); }

  std::string show(uint64_t a) const override {
    std::array<int, 4> x = unpack(a);
    std::ostringstream out;
    out << "[[" << entry(x[0]) << "," << entry(x[1]) << "],[" << entry(x[2]) << ","
        << entry(x[3]) << "]]";
    return out.str();
  }

  const FqField& field() const { return f_; }

  static std::array<int, 4> unpack(uint64_t a) {
    return {int(a & 0xff), int((a >> 8) & 0xff), int((a >> 16) & 0xff), int((a >> 24) & 0xff)};
  }
  static uint64_t pack(const std::array<int, 4>& x) {
    return uint64_t(x[0]) | (uint64_t(x[1]) << 8) | (uint64_t(x[2]) << 16) |
           (uint64_t(x[3]) << 24);
  }

 private:
  std::string entry(int e) const {
    int a = f_.a_of(e), b = f_.b_of(e);
    if (b == 0) return std::to_string(a);
    std::string s = a == 0 ? "" : std::to_string(a) + "+";
    return s + std::to_string(b) + "x";
  }
  FqField f_;
};

class PermCarrier final : public Carrier {
 public:
  explicit PermCarrier(int n) : n_(n) {
    if (n < 1 || n > 16) fail(Err::InputError, "permutation degree must be between 1 and 16");
  }

  uint64_t mul(uint64_t a, uint64_t b) const override {
    // (a b)(i) = a(b(i))
    uint64_t r = 0;
    for (int i = 0; i < n_; ++i) r |= uint64_t(image(a, image(b, i))) << (4 * i);
    return r;
  }

  uint64_t inv(uint64_t a) const override {
    uint64_t r = 0;
    for (int i = 0; i < n_; ++i) r |= uint64_t(i) << (4 * image(a, i));
    return r;
  }

  uint64_t identity() const override {
    uint64_t r = 0;
    for (int i = 0; i < n_; ++i) r |= uint64_t(i) << (4 * i);
    return r;
  }

  std::string show(uint64_t a) const override {
    std::string s = "[";
    for (int i = 0; i < n_; ++i) s += (i ? " " : "") + std::to_string(image(a, i));
    return s + "]";
  }

  int degree() const { return n_; }
  static int image(uint64_t a, int i) { return int((a >> (4 * i)) & 0xf); }

 private:
  int n_;
};

class ProductCarrier final : public Carrier {
 public:
  ProductCarrier(std::shared_ptr<const Group> base, int copies)
      : base_(std::move(base)), copies_(copies) {
    if (copies < 1) fail(Err::InputError, "a product needs at least one copy");
  }

  uint64_t mul(uint64_t a, uint64_t b) const override {
    uint64_t r = 0, s = 1;
    long n = base_->size();
    for (int i = 0; i < copies_; ++i) {
      r += s * uint64_t(base_->mul(int(a % n), int(b % n)));
      a /= n;
      b /= n;
      s *= uint64_t(n);
    }
    return r;
  }

  uint64_t inv(uint64_t a) const override {
    uint64_t r = 0, s = 1;
    long n = base_->size();
    for (int i = 0; i < copies_; ++i) {
      r += s * uint64_t(base_->inv(int(a % n)));
      a /= n;
      s *= uint64_t(n);
    }
    return r;
  }

  uint64_t identity() const override { return 0; }

  std::string show(uint64_t a) const override {
    std::string s = "(";
    long n = base_->size();
    for (int i = 0; i < copies_; ++i) {
      s += (i ? "," : "") + std::to_string(a % n);
      a /= n;
    }
    return s + ")";
  }

 private:
  std::shared_ptr<const Group> base_;
  int copies_;
};

}  // namespace

// AbelianCarrier

AbelianCarrier::AbelianCarrier(std::vector<long> moduli) : moduli_(std::move(moduli)) {
  if (moduli_.empty()) fail(Err::InputError, "an abelian carrier needs at least one modulus");
  uint64_t s = 1;
  for (long m : moduli_) {
    if (m < 1) fail(Err::InputError, "moduli must be positive");
    if (s > (uint64_t(1) << 62) / uint64_t(m))
      fail(Err::EnumerationBoundExceeded, "abelian carrier too large to encode");
    stride_.push_back(s);
    s *= uint64_t(m);
  }
}

uint64_t AbelianCarrier::mul(uint64_t a, uint64_t b) const {
  uint64_t r = 0;
  for (size_t j = 0; j < moduli_.size(); ++j) {
    uint64_t m = uint64_t(moduli_[j]);
    uint64_t d = ((a / stride_[j]) % m + (b / stride_[j]) % m) % m;
    r += stride_[j] * d;
  }
  return r;
}

uint64_t AbelianCarrier::inv(uint64_t a) const {
  uint64_t r = 0;
  for (size_t j = 0; j < moduli_.size(); ++j) {
    uint64_t m = uint64_t(moduli_[j]);
    uint64_t d = (a / stride_[j]) % m;
    r += stride_[j] * ((m - d) % m);
  }
  return r;
}

std::string AbelianCarrier::show(uint64_t a) const {
  std::string s = "(";
  for (size_t j = 0; j < moduli_.size(); ++j) {
    s += (j ? "," : "") + std::to_string((a / stride_[j]) % uint64_t(moduli_[j]));
  }
  return s + ")";
}

std::vector<long> AbelianCarrier::coords(uint64_t code) const {
  std::vector<long> c(moduli_.size());
  for (size_t j = 0; j < moduli_.size(); ++j)
    c[j] = long((code / stride_[j]) % uint64_t(moduli_[j]));
  return c;
}

uint64_t AbelianCarrier::pack(const std::vector<long>& coords) const {
  if (coords.size() != moduli_.size()) fail(Err::InputError, "coordinate count mismatch");
  uint64_t r = 0;
  for (size_t j = 0; j < moduli_.size(); ++j) {
    long m = moduli_[j];
    long d = ((coords[j] % m) + m) % m;
    r += stride_[j] * uint64_t(d);
  }
  return r;
}

// Group

int Group::mul(int a, int b) const {
  if (!mul_table.empty()) return mul_table[size_t(a) * size_t(size()) + size_t(b)];
  auto it = index.find(carrier->mul(elements[size_t(a)], elements[size_t(b)]));
  if (it == index.end()) fail(Err::AssertionFailed, "product escaped the enumerated group");
  return it->second;
}

int Group::element_index(uint64_t code) const {
  auto it = index.find(code);
  if (it == index.end()) fail(Err::InputError, "element not in the enumerated group");
  return it->second;
}

Group enumerate_group(std::shared_ptr<const Carrier> carrier,
                      const std::vector<uint64_t>& generator_codes) {
  Group g;
  g.carrier = std::move(carrier);
  std::vector<uint64_t> gens;
  for (uint64_t c : generator_codes)
    if (std::find(gens.begin(), gens.end(), c) == gens.end()) gens.push_back(c);

  g.elements.push_back(g.carrier->identity());
  g.index.emplace(g.elements[0], 0);
  for (size_t head = 0; head < g.elements.size(); ++head) {
    for (uint64_t s : gens) {
      uint64_t w = g.carrier->mul(g.elements[head], s);
      if (g.index.emplace(w, int(g.elements.size())).second) {
        g.elements.push_back(w);
        if (int(g.elements.size()) > kEnumerationBound)
          fail(Err::EnumerationBoundExceeded, "group enumeration exceeded the element bound");
      }
    }
  }

  g.inverse.resize(g.elements.size());
  for (size_t i = 0; i < g.elements.size(); ++i)
    g.inverse[i] = g.element_index(g.carrier->inv(g.elements[i]));
  for (uint64_t c : gens) g.generators.push_back(g.element_index(c));

  int n = g.size();
  if (n <= kMulTableBound) {
    g.mul_table.resize(size_t(n) * size_t(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        g.mul_table[size_t(a) * size_t(n) + size_t(b)] =
            g.element_index(g.carrier->mul(g.elements[size_t(a)], g.elements[size_t(b)]));
  }
  return g;
}

TwistedGroup make_twisted(Group g, const std::function<uint64_t(uint64_t)>& sigma_code,
                          int prime) {
  if (!is_prime(prime)) fail(Err::InputError, "the twist order must be prime");
  TwistedGroup t;
  t.prime = prime;
  t.sigma.resize(g.elements.size());
  for (size_t i = 0; i < g.elements.size(); ++i) {
    auto it = g.index.find(sigma_code(g.elements[i]));
    if (it == g.index.end()) fail(Err::ActionInvalid, "twist does not preserve the group");
    t.sigma[i] = it->second;
  }
  if (t.sigma[0] != 0) fail(Err::ActionInvalid, "twist moves the identity");
  for (size_t i = 0; i < g.elements.size(); ++i) {
    int x = int(i);
    for (int e = 0; e < prime; ++e) x = t.sigma[size_t(x)];
    if (x != int(i)) fail(Err::ActionInvalid, "twist does not have the stated prime order");
  }
  t.group = std::move(g);
  return t;
}

Subgroup subgroup_closure(const Group& g, const std::vector<int>& generator_indices) {
  Subgroup h;
  h.member.assign(g.elements.size(), 0);
  std::vector<int> order;
  order.push_back(g.id());
  h.member[size_t(g.id())] = 1;
  for (size_t head = 0; head < order.size(); ++head) {
    for (int s : generator_indices) {
      int w = g.mul(order[head], s);
      if (!h.member[size_t(w)]) {
        h.member[size_t(w)] = 1;
        order.push_back(w);
      }
    }
  }
  h.elements = order;
  std::sort(h.elements.begin(), h.elements.end());
  for (int s : generator_indices)
    if (std::find(h.generators.begin(), h.generators.end(), s) == h.generators.end())
      h.generators.push_back(s);
  return h;
}

Subgroup whole_group(const Group& g) {
  Subgroup h;
  h.elements.resize(g.elements.size());
  for (size_t i = 0; i < g.elements.size(); ++i) h.elements[i] = int(i);
  h.member.assign(g.elements.size(), 1);
  h.generators = g.generators;
  return h;
}

void require_sigma_stable(const TwistedGroup& t, const Subgroup& h) {
  for (int s : h.generators)
    if (!h.member[size_t(t.twist(s))])
      fail(Err::SubgroupNotSigmaStable, "subgroup is not stable under the twist");
}

int norm_element(const TwistedGroup& t, int g) {
  int acc = g, s = g;
  for (int e = 1; e < t.prime; ++e) {
    s = t.twist(s);
    acc = t.group.mul(acc, s);
  }
  return acc;
}

std::vector<int> twisted_orbit(const TwistedGroup& t, const Subgroup& gamma, int g) {
  const Group& gr = t.group;
  std::vector<char> seen(gr.elements.size(), 0);
  std::vector<int> orbit;
  orbit.push_back(g);
  seen[size_t(g)] = 1;
  for (size_t head = 0; head < orbit.size(); ++head) {
    for (int x : gamma.generators) {
      int w = gr.mul(gr.mul(x, orbit[head]), gr.inv(t.twist(x)));
      if (!seen[size_t(w)]) {
        seen[size_t(w)] = 1;
        orbit.push_back(w);
      }
    }
  }
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

std::vector<int> conjugacy_class(const Group& g, int a) {
  std::vector<char> seen(g.elements.size(), 0);
  std::vector<int> orbit;
  orbit.push_back(a);
  seen[size_t(a)] = 1;
  for (size_t head = 0; head < orbit.size(); ++head) {
    for (int x : g.generators) {
      int w = g.mul(g.mul(x, orbit[head]), g.inv(x));
      if (!seen[size_t(w)]) {
        seen[size_t(w)] = 1;
        orbit.push_back(w);
      }
    }
  }
  std::sort(orbit.begin(), orbit.end());
  return orbit;
}

TwistedClassReport twisted_classes(const TwistedGroup& t, const Subgroup& gamma) {
  require_sigma_stable(t, gamma);
  TwistedClassReport report;
  std::vector<char> done(t.group.elements.size(), 0);
  long covered = 0;
  for (int seed : gamma.elements) {
    if (done[size_t(seed)]) continue;
    std::vector<int> orbit = twisted_orbit(t, gamma, seed);
    TwistedClass cls;
    cls.representative = orbit.front();
    cls.size = int(orbit.size());
    int n = norm_element(t, seed);
    cls.norm_class = conjugacy_class(t.group, n).front();
    cls.norm_trivial = (n == t.group.id());
    if (cls.norm_trivial) ++report.h1_size;
    report.classes.push_back(cls);
    for (int w : orbit) {
      if (!gamma.member[size_t(w)])
        fail(Err::AssertionFailed, "twisted orbit escaped the subgroup");
      done[size_t(w)] = 1;
    }
    covered += long(orbit.size());
  }
  if (covered != long(gamma.elements.size()))
    fail(Err::AssertionFailed, "twisted classes do not partition the subgroup");
  return report;
}

int h1(const TwistedGroup& t, const Subgroup& gamma) {
  return twisted_classes(t, gamma).h1_size;
}

TwistedCentralizer twisted_centralizer(const TwistedGroup& t, int delta) {
  const Group& g = t.group;
  TwistedCentralizer z;
  for (int x = 0; x < g.size(); ++x)
    if (g.mul(g.mul(x, delta), g.inv(t.twist(x))) == delta) z.elements.push_back(x);
  z.order = Int(z.elements.size());
  int n = norm_element(t, delta);
  long c = 0;
  for (int x = 0; x < g.size(); ++x)
    if (g.mul(g.mul(x, n), g.inv(x)) == n) ++c;
  z.norm_centralizer_order = Int(c);
  return z;
}

CosetSpace right_cosets(const Group& g, const Subgroup& h) {
  CosetSpace cs;
  cs.label.assign(g.elements.size(), -1);
  for (int i = 0; i < g.size(); ++i) {
    if (cs.label[size_t(i)] >= 0) continue;
    cs.reps.push_back(i);
    for (int x : h.elements) cs.label[size_t(g.mul(x, i))] = i;
  }
  return cs;
}

Int induced_trace(const TwistedGroup& t, const Subgroup& h, int delta) {
  require_sigma_stable(t, h);
  const Group& g = t.group;
  CosetSpace cs = right_cosets(g, h);

  long direct = 0;
  for (int rep : cs.reps) {
    int moved = g.mul(t.twist_power(rep, t.prime - 1), delta);
    if (cs.label[size_t(moved)] == rep) ++direct;
  }

  Subgroup all = whole_group(g);
  std::vector<int> cls = twisted_orbit(t, all, delta);
  long stabilizer = long(g.size()) / long(cls.size());
  long met = 0;
  for (int w : cls)
    if (h.member[size_t(w)]) ++met;
  long mass = stabilizer * met;
  if (mass % long(h.elements.size()) != 0)
    fail(Err::MismatchBetweenFormulas,
         "class-equation count of fixed cosets is not an integer");
  long via_classes = mass / long(h.elements.size());

  if (direct != via_classes)
    fail(Err::MismatchBetweenFormulas,
         "fixed-coset count disagrees with the twisted class equation");
  return Int(direct);
}

namespace {

// fixed points of the right translation by w on the cosets of h
long fixed_cosets_under_right_translation(const Group& g, const CosetSpace& cs, int w) {
  long fixed = 0;
  for (int rep : cs.reps)
    if (cs.label[size_t(g.mul(rep, w))] == rep) ++fixed;
  return fixed;
}

}  // namespace

std::vector<RatioRow> c_ratio_sweep(const std::vector<int>& primes, NormKind kind) {
  std::vector<RatioRow> rows;
  for (int q : primes) {
    if (!is_prime(q) || q == 2) fail(Err::InputError, "sweep primes must be odd");
    if (q > 13) fail(Err::EnumerationBoundExceeded, "sweep primes beyond 13 are not supported");

    Group base = enumerate_group(matrix_carrier(q, 1), sl2_generators(q, 1));
    std::vector<int> borel_gens;
    for (uint64_t c : borel_generators(q, 1)) borel_gens.push_back(base.element_index(c));
    Subgroup borel = subgroup_closure(base, borel_gens);
    CosetSpace flags = right_cosets(base, borel);
    if (int(flags.reps.size()) != q + 1)
      fail(Err::AssertionFailed, "flag coset count is not q + 1");

    uint64_t norm_code;
    switch (kind) {
      case NormKind::unipotent:
        norm_code = pack_matrix(q, {1}, {1}, {0}, {1});
        break;
      case NormKind::regular_semisimple:
        if (q == 3) {
          // no split torus element separates its eigenvalues over F_3
          norm_code = pack_matrix(q, {0}, {1}, {q - 1}, {0});
        } else {
          FqField f(q, 1);
          int a = f.multiplicative_generator();
          norm_code = pack_matrix(q, {a}, {0}, {0}, {f.inv(a)});
        }
        break;
      case NormKind::trivial:
        norm_code = pack_matrix(q, {1}, {0}, {0}, {1});
        break;
      default:
        fail(Err::InputError, "unknown norm kind");
    }
    int norm_idx = base.element_index(norm_code);
    long fixed = fixed_cosets_under_right_translation(base, flags, norm_idx);

    if (q <= 5) {
      // replay on the materialized two-block group with the swap twist
      auto base_ptr = std::make_shared<Group>(base);
      Group square = enumerate_group(product_carrier(base_ptr, 2), product_generators(*base_ptr, 2));
      TwistedGroup t = make_twisted(std::move(square), shift_twist(base_ptr->size(), 2), 2);
      std::vector<int> hg;
      for (int s : borel_gens) {
        hg.push_back(t.group.element_index(pack_product(*base_ptr, 2, {s, 0})));
        hg.push_back(t.group.element_index(pack_product(*base_ptr, 2, {0, s})));
      }
      Subgroup h = subgroup_closure(t.group, hg);
      int delta = t.group.element_index(pack_product(*base_ptr, 2, {norm_idx, 0}));
      Int replay = induced_trace(t, h, delta);
      if (replay != Int(fixed))
        fail(Err::MismatchBetweenFormulas,
             "collapsed fixed-coset count disagrees with the two-block computation");
    }

    RatioRow row;
    row.prime = q;
    row.fixed_points = Int(fixed);
    row.ratio = Rat(fixed, q + 1);
    rows.push_back(row);
  }
  return rows;
}

Int tensor_trace_identity(const IntMat& a1, const IntMat& a2) {
  if (a1.rows() != a1.cols() || a2.rows() != a2.cols() || a1.rows() != a2.rows())
    fail(Err::InputError, "tensor trace check needs two square matrices of equal size");
  int n = a1.rows();
  IntMat m(n * n, n * n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          // factor swap first, then a1 (x) a2
          m.at(k * n + l, i * n + j) = a1.at(k, j) * a2.at(l, i);
  Int lhs = 0;
  for (int d = 0; d < n * n; ++d) lhs += m.at(d, d);
  IntMat prod = a1 * a2;
  Int rhs = 0;
  for (int d = 0; d < n; ++d) rhs += prod.at(d, d);
  if (lhs != rhs)
    fail(Err::MismatchBetweenFormulas, "swapped tensor trace disagrees with the product trace");
  return lhs;
}

// factories

std::shared_ptr<const Carrier> matrix_carrier(int p, int deg) {
  return std::make_shared<MatrixCarrier>(p, deg);
}

uint64_t pack_matrix(int p, FqElem e00, FqElem e01, FqElem e10, FqElem e11) {
  auto idx = [p](FqElem e) {
    int a = ((e.a % p) + p) % p, b = ((e.b % p) + p) % p;
    return a + p * b;
  };
  return MatrixCarrier::pack({idx(e00), idx(e01), idx(e10), idx(e11)});
}

std::function<uint64_t(uint64_t)> frobenius_twist(int p, int deg) {
  FqField f(p, deg);
  return [f](uint64_t code) {
    std::array<int, 4> x = MatrixCarrier::unpack(code);
    for (int& e : x) e = f.frobenius(e);
    return MatrixCarrier::pack(x);
  };
}

std::vector<uint64_t> sl2_generators(int p, int deg) {
  std::vector<uint64_t> gens;
  gens.push_back(pack_matrix(p, {1}, {1}, {0}, {1}));
  if (deg == 2) gens.push_back(pack_matrix(p, {1}, {0, 1}, {0}, {1}));
  gens.push_back(pack_matrix(p, {0}, {1}, {p - 1}, {0}));
  return gens;
}

std::vector<uint64_t> borel_generators(int p, int deg) {
  FqField f(p, deg);
  std::vector<uint64_t> gens;
  gens.push_back(pack_matrix(p, {1}, {1}, {0}, {1}));
  if (deg == 2) gens.push_back(pack_matrix(p, {1}, {0, 1}, {0}, {1}));
  int a = f.multiplicative_generator();
  int ai = f.inv(a);
  gens.push_back(pack_matrix(p, {f.a_of(a), f.b_of(a)}, {0}, {0}, {f.a_of(ai), f.b_of(ai)}));
  return gens;
}

std::shared_ptr<const Carrier> perm_carrier(int n) { return std::make_shared<PermCarrier>(n); }

uint64_t pack_perm(const std::vector<int>& images) {
  if (images.size() > 16) fail(Err::InputError, "permutation degree must be at most 16");
  std::vector<char> hit(images.size(), 0);
  uint64_t r = 0;
  for (size_t i = 0; i < images.size(); ++i) {
    int v = images[i];
    if (v < 0 || v >= int(images.size()) || hit[size_t(v)])
      fail(Err::InputError, "images do not form a permutation");
    hit[size_t(v)] = 1;
    r |= uint64_t(v) << (4 * i);
  }
  return r;
}

std::function<uint64_t(uint64_t)> perm_conjugation_twist(int n, const std::vector<int>& images) {
  if (int(images.size()) != n) fail(Err::InputError, "conjugating permutation has the wrong degree");
  PermCarrier c(n);
  uint64_t s = pack_perm(images);
  uint64_t si = c.inv(s);
  return [c, s, si](uint64_t g) { return c.mul(s, c.mul(g, si)); };
}

std::shared_ptr<const AbelianCarrier> abelian_carrier(std::vector<long> moduli) {
  return std::make_shared<AbelianCarrier>(std::move(moduli));
}

std::vector<uint64_t> abelian_generators(const AbelianCarrier& c) {
  std::vector<uint64_t> gens;
  std::vector<long> coords(c.moduli().size(), 0);
  for (size_t j = 0; j < c.moduli().size(); ++j) {
    if (c.moduli()[j] == 1) continue;
    coords[j] = 1;
    gens.push_back(c.pack(coords));
    coords[j] = 0;
  }
  if (gens.empty()) gens.push_back(0);
  return gens;
}

std::function<uint64_t(uint64_t)> abelian_matrix_twist(std::shared_ptr<const AbelianCarrier> c,
                                                       std::vector<std::vector<long>> m) {
  size_t r = c->moduli().size();
  if (m.size() != r) fail(Err::InputError, "twist matrix has the wrong number of rows");
  for (const auto& row : m)
    if (row.size() != r) fail(Err::InputError, "twist matrix has the wrong number of columns");
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < r; ++j)
      if ((m[i][j] * c->moduli()[j]) % c->moduli()[i] != 0)
        fail(Err::InputError, "twist matrix does not descend to the moduli");
  return [c, m, r](uint64_t code) {
    std::vector<long> x = c->coords(code), y(r, 0);
    for (size_t i = 0; i < r; ++i) {
      long mi = c->moduli()[i];
      long acc = 0;
      for (size_t j = 0; j < r; ++j) {
        long coef = ((m[i][j] % mi) + mi) % mi;
        acc = long((acc + __int128(coef) * x[j]) % mi);
      }
      y[i] = acc;
    }
    return c->pack(y);
  };
}

std::function<uint64_t(uint64_t)> abelian_inversion_twist(std::shared_ptr<const AbelianCarrier> c) {
  return [c](uint64_t code) { return c->inv(code); };
}

std::shared_ptr<const Carrier> product_carrier(std::shared_ptr<const Group> base, int copies) {
  return std::make_shared<ProductCarrier>(std::move(base), copies);
}

std::vector<uint64_t> product_generators(const Group& base, int copies) {
  std::vector<uint64_t> gens;
  uint64_t stride = 1;
  for (int i = 0; i < copies; ++i) {
    for (int s : base.generators) gens.push_back(stride * uint64_t(s));
    stride *= uint64_t(base.size());
  }
  return gens;
}

uint64_t pack_product(const Group& base, int copies, const std::vector<int>& indices) {
  if (int(indices.size()) != copies) fail(Err::InputError, "component count mismatch");
  uint64_t r = 0, stride = 1;
  for (int i = 0; i < copies; ++i) {
    if (indices[size_t(i)] < 0 || indices[size_t(i)] >= base.size())
      fail(Err::InputError, "component index out of range");
    r += stride * uint64_t(indices[size_t(i)]);
    stride *= uint64_t(base.size());
  }
  return r;
}

std::function<uint64_t(uint64_t)> shift_twist(long base_size, int copies) {
  return [base_size, copies](uint64_t code) {
    uint64_t n = uint64_t(base_size);
    std::vector<uint64_t> digits(size_t(copies), 0);
    for (int i = 0; i < copies; ++i) {
      digits[size_t(i)] = code % n;
      code /= n;
    }
    uint64_t r = 0, stride = 1;
    for (int i = 0; i < copies; ++i) {
      r += stride * digits[size_t((i + 1) % copies)];
      stride *= n;
    }
    return r;
  };
}

}  // namespace tf
