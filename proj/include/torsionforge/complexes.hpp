#pragma once

#include "torsionforge/exactla.hpp"

namespace tf {

// Bounded cochain complex of finitely generated free Z-modules with a chosen
// basis in each degree, an SPD rational inner product, and a positive volume
// normalization per degree.
struct Complex {
  std::vector<int> ranks;      // ranks[0] .. ranks[n]
  std::vector<IntMat> diff;    // diff[i]: ranks[i+1] x ranks[i]
  std::vector<RatMat> metric;  // one SPD matrix per degree
  std::vector<Rat> scale;      // one positive normalization per degree

  int top() const { return int(ranks.size()) - 1; }

  // differential leaving degree i (zero map past the top)
  IntMat d_out(int i) const;
  // differential arriving at degree i (zero map below zero)
  IntMat d_in(int i) const;
};

// Builds a complex with identity metrics and unit scales; validates shapes
// and d(d(x)) = 0.
Complex make_complex(std::vector<int> ranks, std::vector<IntMat> diff);

// Shape, d*d = 0, SPD metric, and positive scale checks; throws on failure.
void validate(const Complex& c);

struct DegreeCohomology {
  IntMat kernel_basis;       // saturated basis of the cocycles
  IntMat free_basis;         // cocycles projecting to a basis of the free quotient
  std::vector<Int> torsion;  // cyclic orders > 1, each dividing the next
  int free_rank = 0;
  Rat regulator_sq;  // Gram determinant of the harmonic projections of free_basis

  Int torsion_order() const;
};

std::vector<DegreeCohomology> cohomology(const Complex& c);

// Orthogonal projection onto the complement of the image of the incoming
// differential; input must be a cocycle.
RatMat harmonic_representative_cols(const Complex& c, int degree, const RatMat& v);
std::vector<Rat> harmonic_representative(const Complex& c, int degree,
                                         const std::vector<Rat>& v);

// Degreewise direct sum; the two complexes must agree in length and scales.
Complex direct_sum(const Complex& a, const Complex& b);

// Tensor product with the usual sign rule d(x (x) y) = dx (x) y + (-1)^i x (x) dy.
// Degree-k basis is grouped by blocks (i, k-i) with i ascending; within a block
// the pair (a, b) sits at index a * rank_b + b.  Metrics are the Kronecker
// products of the factors; scales are reset to 1.
Complex tensor_product(const Complex& a, const Complex& b);

// Basis layout of one degree of a tensor product.
struct TensorBlock {
  int i, j;    // factor degrees, i + j = degree
  int offset;  // start index within the degree
  int ra, rb;  // factor ranks
};
std::vector<TensorBlock> tensor_blocks(const Complex& a, const Complex& b, int degree);

}  // namespace tf
