#pragma once

#include "torsionforge/exactla.hpp"

#include <cstdint>
#include <vector>

namespace tf::fp {

// Dense matrix over the prime field F_p, p small.
class Mat {
public:
  Mat() : p_(2), r_(0), c_(0) {}
  Mat(uint32_t p, int rows, int cols) : p_(p), r_(rows), c_(cols), a_(size_t(rows) * cols) {}

  static Mat identity(uint32_t p, int n);
  static Mat from_int(const IntMat& m, uint32_t p);

  uint32_t p() const { return p_; }
  int rows() const { return r_; }
  int cols() const { return c_; }
  uint32_t& at(int i, int j) { return a_[size_t(i) * c_ + j]; }
  uint32_t at(int i, int j) const { return a_[size_t(i) * c_ + j]; }

  bool operator==(const Mat& o) const = default;
  Mat operator*(const Mat& o) const;
  Mat operator+(const Mat& o) const;
  Mat operator-(const Mat& o) const;
  Mat pow(int e) const;

  // columns of `o` appended on the right
  Mat concat_cols(const Mat& o) const;

private:
  uint32_t p_;
  int r_, c_;
  std::vector<uint32_t> a_;
};

int rank(const Mat& m);

// column basis of the null space
Mat kernel(const Mat& m);

// dimension of the intersection of the two column spans
int span_intersection_dim(const Mat& a, const Mat& b);

}  // namespace tf::fp
