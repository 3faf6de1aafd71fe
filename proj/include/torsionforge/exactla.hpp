#pragma once

#include <initializer_list>
#include <optional>
#include <vector>

#include "torsionforge/errors.hpp"
#include "torsionforge/numeric.hpp"

namespace tf {

// Dense row-major matrix over arbitrary-precision integers.
class IntMat {
public:
  IntMat() : r_(0), c_(0) {}
  IntMat(int rows, int cols) : r_(rows), c_(cols), a_(size_t(rows) * cols) {}
  IntMat(std::initializer_list<std::initializer_list<long long>> rows);

  static IntMat identity(int n);
  static IntMat zero(int rows, int cols) { return IntMat(rows, cols); }

  int rows() const { return r_; }
  int cols() const { return c_; }
  Int& at(int i, int j) { return a_[size_t(i) * c_ + j]; }
  const Int& at(int i, int j) const { return a_[size_t(i) * c_ + j]; }

  bool is_zero() const;
  bool operator==(const IntMat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

  IntMat transpose() const;
  IntMat operator*(const IntMat& o) const;
  IntMat operator+(const IntMat& o) const;
  IntMat operator-(const IntMat& o) const;
  IntMat col(int j) const;
  IntMat cols_range(int j0, int j1) const;
  IntMat concat_cols(const IntMat& o) const;  // columns [j0, j1)
  Int max_abs() const;

  void swap_rows(int i, int j);
  void swap_cols(int i, int j);

private:
  int r_, c_;
  std::vector<Int> a_;
};

// Dense row-major matrix over exact rationals.
class RatMat {
public:
  RatMat() : r_(0), c_(0) {}
  RatMat(int rows, int cols) : r_(rows), c_(cols), a_(size_t(rows) * cols) {}
  RatMat(std::initializer_list<std::initializer_list<long long>> rows);
  static RatMat identity(int n);
  static RatMat from_int(const IntMat& m);

  int rows() const { return r_; }
  int cols() const { return c_; }
  Rat& at(int i, int j) { return a_[size_t(i) * c_ + j]; }
  const Rat& at(int i, int j) const { return a_[size_t(i) * c_ + j]; }

  bool operator==(const RatMat& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }
  RatMat transpose() const;
  RatMat operator*(const RatMat& o) const;
  RatMat operator+(const RatMat& o) const;
  RatMat operator-(const RatMat& o) const;
  Rat trace() const;

private:
  int r_, c_;
  std::vector<Rat> a_;
};

// U * M * V = D with U, V unimodular and D diagonal; the positive diagonal
// entries form a divisibility chain d1 | d2 | ... | dr.
struct SnfResult {
  IntMat U, D, V;
  std::vector<Int> divisors;
  int rank() const { return int(divisors.size()); }
};

SnfResult snf(const IntMat& m);

// Basis (as columns) of the saturation of ker(m) in the ambient lattice; the
// span is a direct summand, so integer vectors in the rational kernel have
// integer coordinates in this basis.
IntMat kernel_saturated(const IntMat& m);

// det(B^T G B) for exact rational symmetric positive-definite G.
Rat gram_det(const IntMat& basis, const RatMat& metric);

Rat det(const RatMat& m);
Int det_int(const IntMat& m);
int rank(const RatMat& m);
int rank_int(const IntMat& m);
bool is_symmetric(const RatMat& m);
bool is_positive_definite(const RatMat& m);

// Solve A x = b over the rationals; nullopt when inconsistent. Singular and
// rectangular systems are fine; any one solution is returned.
std::optional<std::vector<Rat>> solve(const RatMat& A, const std::vector<Rat>& b);
std::optional<RatMat> solve_many(const RatMat& A, const RatMat& B);

// Solve basis * X = vecs with X integral; nullopt when no integral solution.
std::optional<IntMat> integer_coordinates(const IntMat& basis, const IntMat& vecs);

}  // namespace tf
