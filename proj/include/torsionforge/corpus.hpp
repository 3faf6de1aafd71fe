#pragma once

#include "torsionforge/equivariant.hpp"
#include "torsionforge/ttf.hpp"

#include <string>

namespace tf {

inline constexpr uint64_t kDefaultCorpusSeed = 46174;

// Seeded random cochain complex with unit scales, identity metrics, and
// differential entries bounded by max_entry in absolute value.
Complex seeded_complex(Rng& rng, int degrees, int max_rank, int max_entry);

// Twenty isometric involutions on unit-scale complexes.  The first is the
// coordinate swap on a doubled complex, the second negates a complex whose
// only cohomology is a group of order three; the rest mix swaps, sign flips,
// simplicial symmetries, and block sums of those.
std::vector<ComplexWithAction> involutive_corpus(uint64_t seed);

struct SimplicialCase {
  std::string name;
  SimplicialComplex sc;
  std::vector<int> vertex_map;
  int prime = 2;
};

// Named regular simplicial actions, at least twenty, covering reflections,
// free rotations, antipodal maps, swaps of disjoint pieces, and subdivided
// repairs of non-regular symmetries.
std::vector<SimplicialCase> simplicial_corpus();

struct TtfInstance {
  std::string name;
  TwistedGroup twisted;
  Subgroup gamma;
  TestFunction f;
  bool abelian = false;
};

// Seeded trace-formula instances over a fixed pool of twisted groups with
// at most two thousand elements each.
std::vector<TtfInstance> ttf_corpus(uint64_t seed, int count);

// Actions constructed so that the cohomology carries no torsion at the
// acting prime; on these the decomposition of the sigma torsion into a
// counting term and a regulator term closes exactly.  The last entry breaks
// the hypothesis on purpose.
std::vector<ComplexWithAction> main_term_corpus();

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct SuiteReport {
  std::vector<CriterionResult> results;
  bool all_pass() const;
};

// Runs one numbered check of the acceptance suite; ids run from 1 to 13.
CriterionResult run_criterion(int id, uint64_t seed);

// which: torsion | equivariant | basechange | ttf | all
SuiteReport run_suite(const std::string& which, uint64_t seed);

}  // namespace tf
