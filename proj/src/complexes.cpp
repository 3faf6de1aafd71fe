#include "torsionforge/complexes.hpp"

namespace tf {

IntMat Complex::d_out(int i) const {
  if (i < 0 || i > top()) fail(Err::InputError, "degree out of range");
  if (i == top()) return IntMat(0, ranks[i]);
  return diff[i];
}

IntMat Complex::d_in(int i) const {
  if (i < 0 || i > top()) fail(Err::InputError, "degree out of range");
  if (i == 0) return IntMat(ranks[0], 0);
  return diff[i - 1];
}

Complex make_complex(std::vector<int> ranks, std::vector<IntMat> diff) {
  Complex c;
  c.ranks = std::move(ranks);
  c.diff = std::move(diff);
  c.metric.reserve(c.ranks.size());
  for (int r : c.ranks) c.metric.push_back(RatMat::identity(r));
  c.scale.assign(c.ranks.size(), Rat(1));
  validate(c);
  return c;
}

void validate(const Complex& c) {
  const size_t n = c.ranks.size();
  if (n == 0) fail(Err::InputError, "complex must have at least one degree");
  if (c.diff.size() + 1 != n) fail(Err::InputError, "wrong number of differentials");
  if (c.metric.size() != n || c.scale.size() != n)
    fail(Err::InputError, "wrong number of metrics or scales");
  for (size_t i = 0; i < n; ++i)
    if (c.ranks[i] < 0) fail(Err::InputError, "negative rank");
  for (size_t i = 0; i + 1 < n; ++i)
    if (c.diff[i].rows() != c.ranks[i + 1] || c.diff[i].cols() != c.ranks[i])
      fail(Err::InputError, "differential shape mismatch");
  for (size_t i = 0; i + 2 < n; ++i)
    if (!(c.diff[i + 1] * c.diff[i]).is_zero())
      fail(Err::DifferentialSquareNonzero,
           "composite of consecutive differentials is nonzero at degree " + std::to_string(i));
  for (size_t i = 0; i < n; ++i) {
    if (c.metric[i].rows() != c.ranks[i] || c.metric[i].cols() != c.ranks[i])
      fail(Err::InputError, "metric shape mismatch");
    if (!is_positive_definite(c.metric[i]))
      fail(Err::MetricNotPositiveDefinite,
           "metric at degree " + std::to_string(i) + " is not symmetric positive-definite");
    if (c.scale[i] <= 0) fail(Err::InputError, "volume scale must be positive");
  }
}

Int DegreeCohomology::torsion_order() const {
  Int t = 1;
  for (const Int& d : torsion) t *= d;
  return t;
}

RatMat harmonic_representative_cols(const Complex& c, int degree, const RatMat& v) {
  if (v.rows() != c.ranks[degree]) fail(Err::InputError, "vector has wrong dimension");
  RatMat dout = RatMat::from_int(c.d_out(degree));
  RatMat image_check = dout * v;
  for (int i = 0; i < image_check.rows(); ++i)
    for (int j = 0; j < image_check.cols(); ++j)
      if (image_check.at(i, j) != 0)
        fail(Err::NotACocycle, "harmonic projection requested for a non-cocycle");

  RatMat A = RatMat::from_int(c.d_in(degree));
  const RatMat& G = c.metric[degree];
  RatMat AtG = A.transpose() * G;
  auto alpha = solve_many(AtG * A, AtG * v);
  if (!alpha) fail(Err::AssertionFailed, "normal equations inconsistent");
  return v - A * *alpha;
}

std::vector<Rat> harmonic_representative(const Complex& c, int degree,
                                         const std::vector<Rat>& v) {
  RatMat col(int(v.size()), 1);
  for (size_t i = 0; i < v.size(); ++i) col.at(int(i), 0) = v[i];
  RatMat h = harmonic_representative_cols(c, degree, col);
  std::vector<Rat> out(v.size());
  for (size_t i = 0; i < v.size(); ++i) out[i] = h.at(int(i), 0);
  return out;
}

std::vector<DegreeCohomology> cohomology(const Complex& c) {
  validate(c);
  std::vector<DegreeCohomology> out;
  for (int i = 0; i <= c.top(); ++i) {
    DegreeCohomology h;
    h.kernel_basis = kernel_saturated(c.d_out(i));
    const int k = h.kernel_basis.cols();

    // image coordinates inside the saturated kernel are integral
    auto coords = integer_coordinates(h.kernel_basis, c.d_in(i));
    if (!coords) fail(Err::AssertionFailed, "image does not lie in the cocycle lattice");
    SnfResult s = snf(*coords);
    for (const Int& d : s.divisors)
      if (d > 1) h.torsion.push_back(d);
    h.free_rank = k - s.rank();

    auto uinv = integer_coordinates(s.U, IntMat::identity(k));
    if (!uinv) fail(Err::AssertionFailed, "transform not invertible over the integers");
    h.free_basis = h.kernel_basis * uinv->cols_range(s.rank(), k);

    RatMat proj = harmonic_representative_cols(c, i, RatMat::from_int(h.free_basis));
    h.regulator_sq = det(proj.transpose() * c.metric[i] * proj);
    out.push_back(std::move(h));
  }
  return out;
}

Complex direct_sum(const Complex& a, const Complex& b) {
  if (a.ranks.size() != b.ranks.size())
    fail(Err::InputError, "direct sum needs complexes of equal length");
  if (a.scale != b.scale) fail(Err::InputError, "direct sum needs matching scales");
  Complex c;
  const int n = int(a.ranks.size());
  c.ranks.resize(n);
  for (int i = 0; i < n; ++i) c.ranks[i] = a.ranks[i] + b.ranks[i];
  for (int i = 0; i + 1 < n; ++i) {
    IntMat d(c.ranks[i + 1], c.ranks[i]);
    for (int r = 0; r < a.diff[i].rows(); ++r)
      for (int cc = 0; cc < a.diff[i].cols(); ++cc) d.at(r, cc) = a.diff[i].at(r, cc);
    for (int r = 0; r < b.diff[i].rows(); ++r)
      for (int cc = 0; cc < b.diff[i].cols(); ++cc)
        d.at(a.ranks[i + 1] + r, a.ranks[i] + cc) = b.diff[i].at(r, cc);
    c.diff.push_back(std::move(d));
  }
  for (int i = 0; i < n; ++i) {
    RatMat g(c.ranks[i], c.ranks[i]);
    for (int r = 0; r < a.ranks[i]; ++r)
      for (int cc = 0; cc < a.ranks[i]; ++cc) g.at(r, cc) = a.metric[i].at(r, cc);
    for (int r = 0; r < b.ranks[i]; ++r)
      for (int cc = 0; cc < b.ranks[i]; ++cc)
        g.at(a.ranks[i] + r, a.ranks[i] + cc) = b.metric[i].at(r, cc);
    c.metric.push_back(std::move(g));
  }
  c.scale = a.scale;
  validate(c);
  return c;
}

std::vector<TensorBlock> tensor_blocks(const Complex& a, const Complex& b, int k) {
  std::vector<TensorBlock> out;
  int off = 0;
  for (int i = 0; i <= a.top(); ++i) {
    int j = k - i;
    if (j < 0 || j > b.top()) continue;
    TensorBlock bl{i, j, off, a.ranks[i], b.ranks[j]};
    off += bl.ra * bl.rb;
    out.push_back(bl);
  }
  return out;
}

Complex tensor_product(const Complex& a, const Complex& b) {
  Complex c;
  const int n = a.top() + b.top();
  for (int k = 0; k <= n; ++k) {
    int r = 0;
    for (const TensorBlock& bl : tensor_blocks(a, b, k)) r += bl.ra * bl.rb;
    c.ranks.push_back(r);
  }
  for (int k = 0; k < n; ++k) {
    IntMat d(c.ranks[k + 1], c.ranks[k]);
    auto src = tensor_blocks(a, b, k);
    auto dst = tensor_blocks(a, b, k + 1);
    auto find_dst = [&](int i, int j) -> const TensorBlock* {
      for (const TensorBlock& bl : dst)
        if (bl.i == i && bl.j == j) return &bl;
      return nullptr;
    };
    for (const TensorBlock& s : src) {
      if (const TensorBlock* t = find_dst(s.i + 1, s.j)) {
        const IntMat& da = a.diff[s.i];
        for (int a2 = 0; a2 < t->ra; ++a2)
          for (int a1 = 0; a1 < s.ra; ++a1) {
            if (da.at(a2, a1) == 0) continue;
            for (int bb = 0; bb < s.rb; ++bb)
              d.at(t->offset + a2 * t->rb + bb, s.offset + a1 * s.rb + bb) = da.at(a2, a1);
          }
      }
      if (const TensorBlock* t = find_dst(s.i, s.j + 1)) {
        const IntMat& db = b.diff[s.j];
        const int sign = (s.i % 2 == 0) ? 1 : -1;
        for (int b2 = 0; b2 < t->rb; ++b2)
          for (int b1 = 0; b1 < s.rb; ++b1) {
            if (db.at(b2, b1) == 0) continue;
            for (int aa = 0; aa < s.ra; ++aa)
              d.at(t->offset + aa * t->rb + b2, s.offset + aa * s.rb + b1) =
                  Int(sign) * db.at(b2, b1);
          }
      }
    }
    c.diff.push_back(std::move(d));
  }
  for (int k = 0; k <= n; ++k) {
    RatMat g(c.ranks[k], c.ranks[k]);
    for (const TensorBlock& bl : tensor_blocks(a, b, k)) {
      const RatMat& ga = a.metric[bl.i];
      const RatMat& gb = b.metric[bl.j];
      for (int a1 = 0; a1 < bl.ra; ++a1)
        for (int b1 = 0; b1 < bl.rb; ++b1)
          for (int a2 = 0; a2 < bl.ra; ++a2)
            for (int b2 = 0; b2 < bl.rb; ++b2)
              g.at(bl.offset + a1 * bl.rb + b1, bl.offset + a2 * bl.rb + b2) =
                  ga.at(a1, a2) * gb.at(b1, b2);
    }
    c.metric.push_back(std::move(g));
  }
  c.scale.assign(n + 1, Rat(1));
  validate(c);
  return c;
}

}  // namespace tf
