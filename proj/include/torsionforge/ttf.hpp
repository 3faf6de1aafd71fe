#pragma once

#include "torsionforge/basechange.hpp"

#include <map>

namespace tf {

// Rational test function on the twisted coset, keyed by element index;
// missing entries are zero.
struct TestFunction {
  std::map<int, Rat> values;

  Rat at(int g) const {
    auto it = values.find(g);
    return it == values.end() ? Rat(0) : it->second;
  }
};

// Trace of the twisted convolution operator on functions over gamma\G.
// The operator sends the coset of x to the coset of sigma^(p-1)(x) g; the
// trace is assembled once from the sparse operator matrix and once as a
// double sum over cosets and gamma, and the two must agree.
Rat operator_trace(const TwistedGroup& t, const Subgroup& gamma, const TestFunction& f);

struct GeometricTerm {
  int representative = 0;  // least index of the gamma-twisted class
  int class_size = 0;
  Rat volume;   // |stabilizer in G| / |stabilizer in gamma|
  Rat orbital;  // sum of f over the ambient twisted class
  Rat contribution;
  bool norm_trivial = false;
};

struct GeometricReport {
  std::vector<GeometricTerm> terms;
  Rat total;
  Rat h1_term;  // contributions of the norm-trivial classes
  int h1_size = 0;
  // true when the norm-trivial block was independently recomputed as
  // (number of classes) * volume * orbital of the identity class; that
  // counting form needs a single ambient class of cocycles and stabilizers
  // in gamma of a common size
  bool closed_form_checked = false;
};

// Sums the class contributions volume * orbital over the gamma-twisted
// classes; the total must reproduce operator_trace.
GeometricReport geometric_side(const TwistedGroup& t, const Subgroup& gamma,
                               const TestFunction& f);

// Sum of f against the twist-stable characters trivial on gamma; only
// abelian carriers support this and the value must reproduce operator_trace.
Rat spectral_side_abelian(const TwistedGroup& t, const Subgroup& gamma, const TestFunction& f);

}  // namespace tf
