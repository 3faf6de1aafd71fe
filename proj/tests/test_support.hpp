#pragma once

#include "torsionforge/complexes.hpp"

namespace tf::testing {

// Random complex with d(d(x)) = 0 by construction: each new differential is a
// random combination of a basis of the left kernel of the previous one.
inline Complex random_complex(Rng& rng, int degrees, int max_rank) {
  std::vector<int> ranks;
  for (int i = 0; i < degrees; ++i) ranks.push_back(int(rng.range(0, max_rank)));
  std::vector<IntMat> diff;
  for (int i = 0; i + 1 < degrees; ++i) {
    IntMat constraint = i == 0 ? IntMat::identity(ranks[0]).transpose()
                               : kernel_saturated(diff[i - 1].transpose()).transpose();
    IntMat r(ranks[i + 1], constraint.rows());
    for (int a = 0; a < r.rows(); ++a)
      for (int b = 0; b < r.cols(); ++b) r.at(a, b) = rng.range(-2, 2);
    diff.push_back(r * constraint);
  }
  return make_complex(std::move(ranks), std::move(diff));
}

inline RatMat random_spd_metric(Rng& rng, int n) {
  IntMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a.at(i, j) = rng.range(-2, 2);
  return RatMat::from_int(a.transpose() * a) + RatMat::identity(n);
}

}  // namespace tf::testing
