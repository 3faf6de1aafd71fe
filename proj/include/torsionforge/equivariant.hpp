#pragma once

#include "torsionforge/complexes.hpp"
#include "torsionforge/rtorsion.hpp"
#include "torsionforge/simplicial.hpp"

namespace tf {

// A complex together with a degreewise automorphism of prime order that
// commutes with the differential and preserves the metrics.
struct ComplexWithAction {
  Complex complex;
  std::vector<IntMat> action;
  int prime = 2;
};

void validate_action(const ComplexWithAction& ca);
ComplexWithAction with_action(Complex c, std::vector<IntMat> action, int prime);

// Pullback action of a vertex permutation on the simplicial cochain complex.
ComplexWithAction simplicial_action(const SimplicialComplex& sc,
                                    const std::vector<int>& vertex_map, int prime);

// p disjoint copies of a complex permuted cyclically.
ComplexWithAction cyclic_union(const Complex& x, int prime);

// Tensor product with the factorwise action; both factors must use the same
// prime.
ComplexWithAction product_with_action(const ComplexWithAction& a,
                                      const ComplexWithAction& b);

// Subcomplex cut out by a polynomial in the action, as a complex in its own
// right.  The embedding columns are a saturated basis per degree, the metric
// is restricted, and the volume scales are inherited.
struct InducedComplex {
  Complex complex;
  std::vector<IntMat> embedding;
};

InducedComplex fixed_part(const ComplexWithAction& ca);   // kernel of (sigma - 1)
InducedComplex moving_part(const ComplexWithAction& ca);  // kernel of 1 + sigma + ... + sigma^(p-1)

// Torsion of the fixed part against the moving part, weighted 1/(p-1).
struct SigmaTorsion {
  Rat rt_sq_fixed;
  Rat rt_sq_moving;
  double log_value = 0;
};
SigmaTorsion rt_sigma(const ComplexWithAction& ca);

// Spectral analogue: eigenvalue sums weighted by the action's diagonal matrix
// elements in an orthonormal eigenbasis of each Laplacian.
struct SigmaSpectral {
  double log_t = 0;
  std::vector<double> kernel_traces;  // trace of the action on each harmonic space
};
SigmaSpectral analytic_sigma_torsion(const ComplexWithAction& ca);

// Exact traces of the action on rational cohomology, degree by degree.
std::vector<Rat> cohomology_action_traces(const ComplexWithAction& ca);
Rat lefschetz_number(const ComplexWithAction& ca);

// Sizes of the fixed subgroup and of the norm kernel inside the prime-to-p
// torsion of the cohomology, degree by degree.
struct TorsionFixedCounts {
  std::vector<Int> fixed_count;
  std::vector<Int> norm_kernel_count;
};
TorsionFixedCounts torsion_fixed_counts(const ComplexWithAction& ca);

// Order of an endomorphism kernel on a finite direct sum of cyclic groups.
Int kernel_size_mod(const IntMat& m, const std::vector<Int>& moduli);

// Decomposition of the sigma-torsion into a torsion-count term and a
// regulator term, with the obstruction data controlling when it is exact.
struct MainTerms {
  double sigma_torsion = 0;
  double torsion_count_term = 0;
  double regulator_term = 0;
  std::vector<Int> fixed_counts, norm_kernel_counts;
  Int p_power_order = 1;  // order of the p-primary cohomology of the total complex
  std::vector<int> fp_dims_total, fp_dims_fixed_part;
  bool exact_regime = false;
  bool identity_exact = false;
};
MainTerms main_term_decomposition(const ComplexWithAction& ca);

// Chainwise exactness data for the mod-p comparison of a regular simplicial
// action with its fixed subcomplex.
struct SmithDegreeCheck {
  int degree = 0;
  int power = 0;           // exponent i of (1 - sigma)^i, 1 <= i <= p-1
  int fixed_dim = 0;       // cochains supported on pointwise-fixed simplices
  int twisted_rank = 0;    // rank of (1 - sigma)^i
  int complement_kernel = 0;  // dim ker (1 - sigma)^(p-i)
  int overlap = 0;         // fixed-support intersected with the twisted image
  bool exact = false;
};
struct SmithCheckResult {
  std::vector<SmithDegreeCheck> per_degree;
  std::vector<int> h_dims_total;  // mod-p cohomology dimensions, full complex
  std::vector<int> h_dims_fixed;  // same for the fixed subcomplex
  bool sequences_exact = false;
  bool inequality_holds = false;  // total fixed dimension bounded by the total
};
SmithCheckResult smith_check(const SimplicialComplex& sc, const std::vector<int>& vertex_map,
                             int prime);

}  // namespace tf
