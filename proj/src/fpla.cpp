#include "torsionforge/fpla.hpp"

namespace tf::fp {

namespace {

uint32_t inv_mod(uint32_t a, uint32_t p) {
  // p is prime, a != 0
  uint32_t r = 1, b = a, e = p - 2;
  while (e) {
    if (e & 1) r = uint32_t(uint64_t(r) * b % p);
    b = uint32_t(uint64_t(b) * b % p);
    e >>= 1;
  }
  return r;
}

// in-place row echelon; returns pivot columns
std::vector<int> echelon(Mat& m) {
  const uint32_t p = m.p();
  std::vector<int> pivots;
  int r = 0;
  for (int j = 0; j < m.cols() && r < m.rows(); ++j) {
    int piv = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m.at(i, j)) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int k = 0; k < m.cols(); ++k) std::swap(m.at(piv, k), m.at(r, k));
    uint32_t inv = inv_mod(m.at(r, j), p);
    for (int k = j; k < m.cols(); ++k) m.at(r, k) = uint32_t(uint64_t(m.at(r, k)) * inv % p);
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      uint32_t f = m.at(i, j);
      if (!f) continue;
      for (int k = j; k < m.cols(); ++k)
        m.at(i, k) = uint32_t((m.at(i, k) + uint64_t(p - f) * m.at(r, k)) % p);
    }
    pivots.push_back(j);
    ++r;
  }
  return pivots;
}

}  // namespace

Mat Mat::identity(uint32_t p, int n) {
  Mat m(p, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Mat Mat::from_int(const IntMat& m, uint32_t p) {
  Mat f(p, m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      Int v = m.at(i, j) % p;
      if (v < 0) v += p;
      f.at(i, j) = v.convert_to<uint32_t>();
    }
  return f;
}

Mat Mat::operator*(const Mat& o) const {
  if (c_ != o.r_ || p_ != o.p_) fail(Err::InputError, "matrix product shape mismatch");
  Mat m(p_, r_, o.c_);
  for (int i = 0; i < r_; ++i)
    for (int k = 0; k < c_; ++k) {
      uint64_t x = at(i, k);
      if (!x) continue;
      for (int j = 0; j < o.c_; ++j)
        m.at(i, j) = uint32_t((m.at(i, j) + x * o.at(k, j)) % p_);
    }
  return m;
}

Mat Mat::operator+(const Mat& o) const {
  if (r_ != o.r_ || c_ != o.c_ || p_ != o.p_) fail(Err::InputError, "matrix sum shape mismatch");
  Mat m(p_, r_, c_);
  for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = (a_[k] + o.a_[k]) % p_;
  return m;
}

Mat Mat::operator-(const Mat& o) const {
  if (r_ != o.r_ || c_ != o.c_ || p_ != o.p_)
    fail(Err::InputError, "matrix difference shape mismatch");
  Mat m(p_, r_, c_);
  for (size_t k = 0; k < a_.size(); ++k) m.a_[k] = (a_[k] + p_ - o.a_[k]) % p_;
  return m;
}

Mat Mat::pow(int e) const {
  if (r_ != c_) fail(Err::InputError, "power of non-square matrix");
  Mat acc = identity(p_, r_), base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

Mat Mat::concat_cols(const Mat& o) const {
  if (r_ != o.r_ || p_ != o.p_) fail(Err::InputError, "concat shape mismatch");
  Mat m(p_, r_, c_ + o.c_);
  for (int i = 0; i < r_; ++i) {
    for (int j = 0; j < c_; ++j) m.at(i, j) = at(i, j);
    for (int j = 0; j < o.c_; ++j) m.at(i, c_ + j) = o.at(i, j);
  }
  return m;
}

int rank(const Mat& m) {
  Mat a = m;
  return int(echelon(a).size());
}

Mat kernel(const Mat& m) {
  Mat a = m;
  std::vector<int> pivots = echelon(a);
  std::vector<char> is_pivot(m.cols(), 0);
  for (int j : pivots) is_pivot[j] = 1;
  Mat k(m.p(), m.cols(), m.cols() - int(pivots.size()));
  int col = 0;
  for (int j = 0; j < m.cols(); ++j) {
    if (is_pivot[j]) continue;
    k.at(j, col) = 1;
    for (size_t t = 0; t < pivots.size(); ++t) {
      uint32_t v = a.at(int(t), j);
      if (v) k.at(pivots[t], col) = m.p() - v;
    }
    ++col;
  }
  return k;
}

int span_intersection_dim(const Mat& a, const Mat& b) {
  return rank(a) + rank(b) - rank(a.concat_cols(b));
}

}  // namespace tf::fp
