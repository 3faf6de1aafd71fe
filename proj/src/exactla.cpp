#include "torsionforge/exactla.hpp"

#include <algorithm>

namespace tf {

IntMat::IntMat(std::initializer_list<std::initializer_list<long long>> rows) {
  r_ = int(rows.size());
  c_ = r_ ? int(rows.begin()->size()) : 0;
  a_.resize(size_t(r_) * c_);
  int i = 0;
  for (const auto& row : rows) {
    if (int(row.size()) != c_) fail(Err::InputError, "ragged matrix literal");
    int j = 0;
    for (long long v : row) at(i, j++) = v;
    ++i;
  }
}

IntMat IntMat::identity(int n) {
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool IntMat::is_zero() const {
  for (const Int& x : a_)
    if (x != 0) return false;
  return true;
}

IntMat IntMat::transpose() const {
  IntMat t(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
  return t;
}

IntMat IntMat::operator*(const IntMat& o) const {
  if (c_ != o.r_) fail(Err::InputError, "matrix product shape mismatch");
  IntMat p(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const Int& x = at(i, k);
      if (x == 0) continue;
      for (int j = 0; j < o.c_; ++j) p.at(i, j) += x * o.at(k, j);
    }
  return p;
}

IntMat IntMat::operator+(const IntMat& o) const {
  if (r_ != o.r_ || c_ != o.c_) fail(Err::InputError, "matrix sum shape mismatch");
  IntMat s(r_, c_);
  for (size_t k = 0; k < a_.size(); ++k) s.a_[k] = a_[k] + o.a_[k];
  return s;
}

IntMat IntMat::operator-(const IntMat& o) const {
  if (r_ != o.r_ || c_ != o.c_) fail(Err::InputError, "matrix difference shape mismatch");
  IntMat s(r_, c_);
  for (size_t k = 0; k < a_.size(); ++k) s.a_[k] = a_[k] - o.a_[k];
  return s;
}

IntMat IntMat::col(int j) const { return cols_range(j, j + 1); }

IntMat IntMat::cols_range(int j0, int j1) const {
  IntMat m(r_, j1 - j0);
  for (int i = 0; i < r_; ++i)
    for (int j = j0; j < j1; ++j) m.at(i, j - j0) = at(i, j);
  return m;
}

IntMat IntMat::concat_cols(const IntMat& o) const {
  if (r_ != o.r_) fail(Err::InputError, "concat shape mismatch");
  IntMat m(r_, c_ + o.c_);
  for (int i = 0; i < r_; ++i) {
    for (int j = 0; j < c_; ++j) m.at(i, j) = at(i, j);
    for (int j = 0; j < o.c_; ++j) m.at(i, c_ + j) = o.at(i, j);
  }
  return m;
}

Int IntMat::max_abs() const {
  Int m = 0;
  for (const Int& x : a_) m = std::max(m, abs_int(x));
  return m;
}

void IntMat::swap_rows(int i, int j) {
  if (i == j) return;
  for (int k = 0; k < c_; ++k) std::swap(at(i, k), at(j, k));
}

void IntMat::swap_cols(int i, int j) {
  if (i == j) return;
  for (int k = 0; k < r_; ++k) std::swap(at(k, i), at(k, j));
}

RatMat::RatMat(std::initializer_list<std::initializer_list<long long>> rows) {
  r_ = int(rows.size());
  c_ = r_ ? int(rows.begin()->size()) : 0;
  a_.resize(size_t(r_) * c_);
  int i = 0;
  for (const auto& row : rows) {
    if (int(row.size()) != c_) fail(Err::InputError, "ragged matrix literal");
    int j = 0;
    for (long long v : row) at(i, j++) = v;
    ++i;
  }
}

RatMat RatMat::identity(int n) {
  RatMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::from_int(const IntMat& m) {
  RatMat q(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) q.at(i, j) = Rat(m.at(i, j));
  return q;
}

RatMat RatMat::transpose() const {
  RatMat t(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) t.at(j, i) = at(i, j);
  return t;
}

RatMat RatMat::operator*(const RatMat& o) const {
  if (c_ != o.r_) fail(Err::InputError, "matrix product shape mismatch");
  RatMat p(r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      const Rat& x = at(i, k);
      if (x == 0) continue;
      for (int j = 0; j < o.c_; ++j) p.at(i, j) += x * o.at(k, j);
    }
  return p;
}

RatMat RatMat::operator+(const RatMat& o) const {
  if (r_ != o.r_ || c_ != o.c_) fail(Err::InputError, "matrix sum shape mismatch");
  RatMat s(r_, c_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) s.at(i, j) = at(i, j) + o.at(i, j);
  return s;
}

RatMat RatMat::operator-(const RatMat& o) const {
  if (r_ != o.r_ || c_ != o.c_) fail(Err::InputError, "matrix difference shape mismatch");
  RatMat s(r_, c_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) s.at(i, j) = at(i, j) - o.at(i, j);
  return s;
}

Rat RatMat::trace() const {
  Rat t = 0;
  for (int i = 0; i < std::min(r_, c_); ++i) t += at(i, i);
  return t;
}

namespace {

// Pivot choice: smallest nonzero absolute value in the working block,
// ties broken in row-major scan order.
bool find_pivot(const IntMat& d, int t, int& pi, int& pj) {
  bool found = false;
  Int best = 0;
  for (int i = t; i < d.rows(); ++i)
    for (int j = t; j < d.cols(); ++j) {
      const Int& x = d.at(i, j);
      if (x == 0) continue;
      Int ax = abs_int(x);
      if (!found || ax < best) {
        found = true;
        best = ax;
        pi = i;
        pj = j;
      }
    }
  return found;
}

// Quotient rounded to nearest, so the remainder has magnitude <= |b|/2.
// Keeps the working entries and the accumulated transforms small.
Int div_round(const Int& a, const Int& b) {
  Int q = a / b, r = a - q * b;
  if (2 * abs_int(r) > abs_int(b)) q += ((r > 0) == (b > 0)) ? 1 : -1;
  return q;
}

}  // namespace

SnfResult snf(const IntMat& m) {
  SnfResult res;
  res.D = m;
  res.U = IntMat::identity(m.rows());
  res.V = IntMat::identity(m.cols());
  IntMat& D = res.D;
  IntMat& U = res.U;
  IntMat& V = res.V;

  int t = 0;
  const int tmax = std::min(m.rows(), m.cols());
  while (t < tmax) {
    int pi, pj;
    if (!find_pivot(D, t, pi, pj)) break;
    D.swap_rows(t, pi);
    U.swap_rows(t, pi);
    D.swap_cols(t, pj);
    V.swap_cols(t, pj);

    // one reduction sweep; leftovers are at most half the pivot, so
    // re-scanning for a fresh minimal pivot converges quickly
    bool leftover = false;
    for (int i = t + 1; i < D.rows(); ++i) {
      if (D.at(i, t) == 0) continue;
      Int q = div_round(D.at(i, t), D.at(t, t));
      if (q != 0) {
        for (int k = 0; k < D.cols(); ++k) D.at(i, k) -= q * D.at(t, k);
        for (int k = 0; k < U.cols(); ++k) U.at(i, k) -= q * U.at(t, k);
      }
      if (D.at(i, t) != 0) leftover = true;
    }
    for (int j = t + 1; j < D.cols(); ++j) {
      if (D.at(t, j) == 0) continue;
      Int q = div_round(D.at(t, j), D.at(t, t));
      if (q != 0) {
        for (int k = 0; k < D.rows(); ++k) D.at(k, j) -= q * D.at(k, t);
        for (int k = 0; k < V.rows(); ++k) V.at(k, j) -= q * V.at(k, t);
      }
      if (D.at(t, j) != 0) leftover = true;
    }
    if (leftover) continue;

    // force divisibility of the remaining block by the pivot
    bool fixed = false;
    for (int i = t + 1; i < D.rows() && !fixed; ++i)
      for (int j = t + 1; j < D.cols() && !fixed; ++j)
        if (D.at(i, j) % D.at(t, t) != 0) {
          for (int k = 0; k < D.cols(); ++k) D.at(t, k) += D.at(i, k);
          for (int k = 0; k < U.cols(); ++k) U.at(t, k) += U.at(i, k);
          fixed = true;
        }
    if (fixed) continue;  // redo elimination at the same t

    if (D.at(t, t) < 0) {
      for (int k = 0; k < D.cols(); ++k) D.at(t, k) = -D.at(t, k);
      for (int k = 0; k < U.cols(); ++k) U.at(t, k) = -U.at(t, k);
    }
    ++t;
  }

  for (int i = 0; i < t; ++i) res.divisors.push_back(D.at(i, i));
  return res;
}

IntMat kernel_saturated(const IntMat& m) {
  SnfResult s = snf(m);
  return s.V.cols_range(s.rank(), m.cols());
}

namespace {

// Fraction-free style rational elimination; returns rank, optionally
// accumulating the determinant of a square matrix.
int eliminate(RatMat& a, Rat* det_out) {
  int r = 0;
  Rat detv = 1;
  for (int j = 0; j < a.cols() && r < a.rows(); ++j) {
    int piv = -1;
    for (int i = r; i < a.rows(); ++i)
      if (a.at(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) {
      for (int k = 0; k < a.cols(); ++k) std::swap(a.at(piv, k), a.at(r, k));
      detv = -detv;
    }
    detv *= a.at(r, j);
    for (int i = r + 1; i < a.rows(); ++i) {
      if (a.at(i, j) == 0) continue;
      Rat f = a.at(i, j) / a.at(r, j);
      for (int k = j; k < a.cols(); ++k) a.at(i, k) -= f * a.at(r, k);
    }
    ++r;
  }
  if (det_out) *det_out = (r == a.rows() && a.rows() == a.cols()) ? detv : Rat(0);
  return r;
}

}  // namespace

Rat det(const RatMat& m) {
  if (m.rows() != m.cols()) fail(Err::InputError, "determinant of non-square matrix");
  if (m.rows() == 0) return 1;
  RatMat a = m;
  Rat d;
  eliminate(a, &d);
  return d;
}

Int det_int(const IntMat& m) {
  Rat d = det(RatMat::from_int(m));
  return numerator(d) / denominator(d);
}

int rank(const RatMat& m) {
  RatMat a = m;
  return eliminate(a, nullptr);
}

int rank_int(const IntMat& m) { return rank(RatMat::from_int(m)); }

bool is_symmetric(const RatMat& m) {
  if (m.rows() != m.cols()) return false;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j)
      if (m.at(i, j) != m.at(j, i)) return false;
  return true;
}

bool is_positive_definite(const RatMat& m) {
  if (!is_symmetric(m)) return false;
  // leading principal minors, all positive
  for (int n = 1; n <= m.rows(); ++n) {
    RatMat lead(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) lead.at(i, j) = m.at(i, j);
    if (det(lead) <= 0) return false;
  }
  return true;
}

Rat gram_det(const IntMat& basis, const RatMat& metric) {
  if (metric.rows() != basis.rows() || metric.cols() != basis.rows())
    fail(Err::InputError, "gram_det: metric shape does not match ambient dimension");
  if (!is_positive_definite(metric))
    fail(Err::MetricNotPositiveDefinite, "gram_det: metric is not symmetric positive-definite");
  RatMat b = RatMat::from_int(basis);
  Rat g = det(b.transpose() * metric * b);
  if (basis.cols() > 0 && g == 0) fail(Err::DependentColumns, "gram_det: columns are dependent");
  return g;
}

std::optional<RatMat> solve_many(const RatMat& A, const RatMat& B) {
  if (A.rows() != B.rows()) fail(Err::InputError, "solve: shape mismatch");
  const int n = A.rows(), m = A.cols(), k = B.cols();
  RatMat a(n, m + k);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) a.at(i, j) = A.at(i, j);
    for (int j = 0; j < k; ++j) a.at(i, m + j) = B.at(i, j);
  }
  // row reduce the left block only
  std::vector<int> pivot_col;
  int r = 0;
  for (int j = 0; j < m && r < n; ++j) {
    int piv = -1;
    for (int i = r; i < n; ++i)
      if (a.at(i, j) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int c = 0; c < m + k; ++c) std::swap(a.at(piv, c), a.at(r, c));
    Rat p = a.at(r, j);
    for (int c = j; c < m + k; ++c) a.at(r, c) /= p;
    for (int i = 0; i < n; ++i) {
      if (i == r || a.at(i, j) == 0) continue;
      Rat f = a.at(i, j);
      for (int c = j; c < m + k; ++c) a.at(i, c) -= f * a.at(r, c);
    }
    pivot_col.push_back(j);
    ++r;
  }
  // consistency: zero rows on the left must be zero on the right
  for (int i = r; i < n; ++i)
    for (int j = 0; j < k; ++j)
      if (a.at(i, m + j) != 0) return std::nullopt;
  RatMat X(m, k);
  for (int t = 0; t < r; ++t)
    for (int j = 0; j < k; ++j) X.at(pivot_col[t], j) = a.at(t, m + j);
  return X;
}

std::optional<std::vector<Rat>> solve(const RatMat& A, const std::vector<Rat>& b) {
  RatMat B(A.rows(), 1);
  for (int i = 0; i < A.rows(); ++i) B.at(i, 0) = b[i];
  auto X = solve_many(A, B);
  if (!X) return std::nullopt;
  std::vector<Rat> x(A.cols());
  for (int j = 0; j < A.cols(); ++j) x[j] = X->at(j, 0);
  return x;
}

std::optional<IntMat> integer_coordinates(const IntMat& basis, const IntMat& vecs) {
  auto X = solve_many(RatMat::from_int(basis), RatMat::from_int(vecs));
  if (!X) return std::nullopt;
  IntMat out(X->rows(), X->cols());
  for (int i = 0; i < X->rows(); ++i)
    for (int j = 0; j < X->cols(); ++j) {
      const Rat& v = X->at(i, j);
      if (denominator(v) != 1) return std::nullopt;
      out.at(i, j) = numerator(v);
    }
  // verify (guards against non-unique solutions off the column span)
  if (!(basis * out == vecs)) return std::nullopt;
  return out;
}

}  // namespace tf
