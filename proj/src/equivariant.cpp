#include "torsionforge/equivariant.hpp"

#include "torsionforge/fpla.hpp"

#include <cmath>

namespace tf {

namespace {

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

IntMat norm_polynomial(const IntMat& a, int p) {
  IntMat acc = IntMat::identity(a.rows());
  IntMat power = IntMat::identity(a.rows());
  for (int e = 1; e < p; ++e) {
    power = power * a;
    acc = acc + power;
  }
  return acc;
}

}  // namespace

void validate_action(const ComplexWithAction& ca) {
  validate(ca.complex);
  if (!is_prime(ca.prime)) fail(Err::InputError, "order of the action must be prime");
  const Complex& c = ca.complex;
  if (ca.action.size() != c.ranks.size())
    fail(Err::ActionInvalid, "one action matrix per degree required");
  for (int i = 0; i <= c.top(); ++i) {
    const IntMat& a = ca.action[i];
    if (a.rows() != c.ranks[i] || a.cols() != c.ranks[i])
      fail(Err::ActionInvalid, "action matrix shape mismatch");
    IntMat power = a;
    for (int e = 1; e < ca.prime; ++e) power = power * a;
    if (!(power == IntMat::identity(c.ranks[i])))
      fail(Err::ActionInvalid, "action does not have the stated order");
    RatMat ar = RatMat::from_int(a);
    if (!(ar.transpose() * c.metric[i] * ar == c.metric[i]))
      fail(Err::ActionInvalid, "action does not preserve the metric");
  }
  for (int i = 0; i < c.top(); ++i)
    if (!(ca.action[i + 1] * c.diff[i] == c.diff[i] * ca.action[i]))
      fail(Err::ActionInvalid, "action does not commute with the differential");
}

ComplexWithAction with_action(Complex c, std::vector<IntMat> action, int prime) {
  ComplexWithAction ca{std::move(c), std::move(action), prime};
  validate_action(ca);
  return ca;
}

ComplexWithAction simplicial_action(const SimplicialComplex& sc,
                                    const std::vector<int>& vertex_map, int prime) {
  return with_action(cochain_complex(sc), action_matrices(sc, vertex_map), prime);
}

ComplexWithAction cyclic_union(const Complex& x, int prime) {
  Complex total = x;
  for (int copy = 1; copy < prime; ++copy) total = direct_sum(total, x);
  std::vector<IntMat> action;
  for (int i = 0; i <= x.top(); ++i) {
    const int r = x.ranks[i];
    IntMat a(r * prime, r * prime);
    for (int copy = 0; copy < prime; ++copy)
      for (int k = 0; k < r; ++k) a.at(((copy + 1) % prime) * r + k, copy * r + k) = 1;
    action.push_back(std::move(a));
  }
  return with_action(std::move(total), std::move(action), prime);
}

ComplexWithAction product_with_action(const ComplexWithAction& a,
                                      const ComplexWithAction& b) {
  if (a.prime != b.prime) fail(Err::InputError, "factors must share the prime");
  Complex t = tensor_product(a.complex, b.complex);
  std::vector<IntMat> action;
  for (int k = 0; k <= t.top(); ++k) {
    IntMat m(t.ranks[k], t.ranks[k]);
    for (const TensorBlock& bl : tensor_blocks(a.complex, b.complex, k)) {
      const IntMat& aa = a.action[bl.i];
      const IntMat& ab = b.action[bl.j];
      for (int a2 = 0; a2 < bl.ra; ++a2)
        for (int a1 = 0; a1 < bl.ra; ++a1) {
          if (aa.at(a2, a1) == 0) continue;
          for (int b2 = 0; b2 < bl.rb; ++b2)
            for (int b1 = 0; b1 < bl.rb; ++b1)
              m.at(bl.offset + a2 * bl.rb + b2, bl.offset + a1 * bl.rb + b1) =
                  aa.at(a2, a1) * ab.at(b2, b1);
        }
    }
    action.push_back(std::move(m));
  }
  return with_action(std::move(t), std::move(action), a.prime);
}

namespace {

InducedComplex isotypic_part(const ComplexWithAction& ca, bool fixed) {
  validate_action(ca);
  const Complex& c = ca.complex;
  InducedComplex out;
  for (int i = 0; i <= c.top(); ++i) {
    IntMat op = fixed ? ca.action[i] - IntMat::identity(c.ranks[i])
                      : norm_polynomial(ca.action[i], ca.prime);
    out.embedding.push_back(kernel_saturated(op));
  }
  Complex& sub = out.complex;
  for (int i = 0; i <= c.top(); ++i) sub.ranks.push_back(out.embedding[i].cols());
  for (int i = 0; i < c.top(); ++i) {
    auto coords = integer_coordinates(out.embedding[i + 1], c.diff[i] * out.embedding[i]);
    if (!coords) fail(Err::AssertionFailed, "differential does not restrict to the part");
    sub.diff.push_back(std::move(*coords));
  }
  for (int i = 0; i <= c.top(); ++i) {
    RatMat e = RatMat::from_int(out.embedding[i]);
    sub.metric.push_back(e.transpose() * c.metric[i] * e);
  }
  sub.scale = c.scale;
  validate(sub);
  return out;
}

}  // namespace

InducedComplex fixed_part(const ComplexWithAction& ca) { return isotypic_part(ca, true); }
InducedComplex moving_part(const ComplexWithAction& ca) { return isotypic_part(ca, false); }

SigmaTorsion rt_sigma(const ComplexWithAction& ca) {
  SigmaTorsion out;
  out.rt_sq_fixed = rt_sq_via_cohomology(fixed_part(ca).complex);
  out.rt_sq_moving = rt_sq_via_cohomology(moving_part(ca).complex);
  out.log_value =
      0.5 * log_rat(out.rt_sq_fixed) - 0.5 / (ca.prime - 1) * log_rat(out.rt_sq_moving);
  return out;
}

SigmaSpectral analytic_sigma_torsion(const ComplexWithAction& ca) {
  validate_action(ca);
  const Complex& c = ca.complex;
  SigmaSpectral out;
  for (int i = 0; i <= c.top(); ++i) {
    DegreeSpectrum sp = degree_spectrum(c, i);
    const int r = c.ranks[i];
    if (r == 0) {
      out.kernel_traces.push_back(0);
      continue;
    }
    Eigen::MatrixXd s(r, r);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) s(a, b) = ca.action[i].at(a, b).convert_to<double>();
    Eigen::MatrixXd s_u =
        sp.lt * s *
        sp.lt.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(r, r));
    double weighted = 0, kernel_trace = 0;
    for (int k = 0; k < r; ++k) {
      Eigen::VectorXd v = sp.vectors_u.col(k);
      double w = v.dot(s_u * v);
      if (sp.values(k) <= sp.cutoff)
        kernel_trace += w;
      else
        weighted += w * std::log(sp.values(k));
    }
    int sign = (i % 2 == 0) ? -1 : 1;  // (-1)^(i+1)
    out.log_t += 0.5 * sign * i * weighted;
    out.kernel_traces.push_back(kernel_trace);
  }
  return out;
}

std::vector<Rat> cohomology_action_traces(const ComplexWithAction& ca) {
  validate_action(ca);
  const Complex& c = ca.complex;
  std::vector<Rat> out;
  for (int i = 0; i <= c.top(); ++i) {
    IntMat kernel = kernel_saturated(c.d_out(i));
    auto sigma_k = integer_coordinates(kernel, ca.action[i] * kernel);
    if (!sigma_k) fail(Err::AssertionFailed, "action does not preserve the cocycles");
    Rat trace = RatMat::from_int(*sigma_k).trace();
    if (i > 0) {
      // subtract the trace on the image of the incoming differential
      SnfResult s = snf(c.d_in(i));
      IntMat image_basis = c.d_in(i) * s.V.cols_range(0, s.rank());
      auto j = integer_coordinates(kernel, image_basis);
      if (!j) fail(Err::AssertionFailed, "image does not lie in the cocycles");
      auto x = solve_many(RatMat::from_int(*j), RatMat::from_int(*sigma_k * *j));
      if (!x) fail(Err::AssertionFailed, "action does not preserve the image");
      trace -= x->trace();
    }
    out.push_back(trace);
  }
  return out;
}

Rat lefschetz_number(const ComplexWithAction& ca) {
  Rat l = 0;
  std::vector<Rat> tr = cohomology_action_traces(ca);
  for (size_t i = 0; i < tr.size(); ++i) l += (i % 2 == 0 ? tr[i] : -tr[i]);
  return l;
}

Int kernel_size_mod(const IntMat& m, const std::vector<Int>& moduli) {
  const int r = m.rows();
  if (m.cols() != r || int(moduli.size()) != r) fail(Err::InputError, "shape mismatch");
  IntMat stacked(r, 2 * r);
  for (int i = 0; i < r; ++i) {
    if (moduli[i] <= 0) fail(Err::InputError, "moduli must be positive");
    for (int j = 0; j < r; ++j) {
      if (m.at(i, j) * moduli[j] % moduli[i] != 0)
        fail(Err::InputError, "matrix does not descend to the cyclic sum");
      stacked.at(i, j) = m.at(i, j);
    }
    stacked.at(i, r + i) = moduli[i];
  }
  Int size = 1;
  for (const Int& d : snf(stacked).divisors) size *= d;
  return size;
}

namespace {

struct TorsionAction {
  std::vector<Int> moduli;  // orders of the cyclic summands, p-part removed
  IntMat matrix;            // induced endomorphism in those coordinates
};

// Induced action on the prime-to-p torsion of one cohomology group.
TorsionAction torsion_action(const ComplexWithAction& ca, int degree) {
  const Complex& c = ca.complex;
  IntMat kernel = kernel_saturated(c.d_out(degree));
  const int k = kernel.cols();
  auto sigma_k = integer_coordinates(kernel, ca.action[degree] * kernel);
  if (!sigma_k) fail(Err::AssertionFailed, "action does not preserve the cocycles");
  auto coords = integer_coordinates(kernel, c.d_in(degree));
  if (!coords) fail(Err::AssertionFailed, "image does not lie in the cocycle lattice");
  SnfResult s = snf(*coords);

  auto uinv = integer_coordinates(s.U, IntMat::identity(k));
  if (!uinv) fail(Err::AssertionFailed, "transform not invertible");
  IntMat a_y = s.U * *sigma_k * *uinv;

  TorsionAction out;
  const int r = s.rank();
  for (int i = r; i < k; ++i)
    for (int j = 0; j < r; ++j)
      if (a_y.at(i, j) != 0)
        fail(Err::AssertionFailed, "induced map leaks torsion into the free quotient");
  out.matrix = IntMat(r, r);
  for (int i = 0; i < r; ++i) {
    Int d = s.divisors[i];
    while (d % ca.prime == 0) d /= ca.prime;
    out.moduli.push_back(d);
    for (int j = 0; j < r; ++j) out.matrix.at(i, j) = a_y.at(i, j);
  }
  return out;
}

bool has_p_torsion(const std::vector<DegreeCohomology>& h, int p) {
  for (const auto& d : h)
    for (const Int& t : d.torsion)
      if (t % p == 0) return true;
  return false;
}

std::vector<int> fp_dims(const Complex& c, uint32_t p) {
  std::vector<int> out;
  for (int i = 0; i <= c.top(); ++i)
    out.push_back(c.ranks[i] - fp::rank(fp::Mat::from_int(c.d_out(i), p)) -
                  fp::rank(fp::Mat::from_int(c.d_in(i), p)));
  return out;
}

}  // namespace

TorsionFixedCounts torsion_fixed_counts(const ComplexWithAction& ca) {
  validate_action(ca);
  TorsionFixedCounts out;
  for (int i = 0; i <= ca.complex.top(); ++i) {
    TorsionAction t = torsion_action(ca, i);
    const int r = t.matrix.rows();
    out.fixed_count.push_back(
        kernel_size_mod(t.matrix - IntMat::identity(r), t.moduli));
    out.norm_kernel_count.push_back(
        kernel_size_mod(norm_polynomial(t.matrix, ca.prime), t.moduli));
  }
  return out;
}

MainTerms main_term_decomposition(const ComplexWithAction& ca) {
  MainTerms out;
  const int p = ca.prime;

  InducedComplex fixed = fixed_part(ca);
  InducedComplex moving = moving_part(ca);
  auto h_fixed = cohomology(fixed.complex);
  auto h_moving = cohomology(moving.complex);
  auto h_total = cohomology(ca.complex);

  Rat sq_f = rt_sq_via_cohomology(fixed.complex);
  Rat sq_m = rt_sq_via_cohomology(moving.complex);
  out.sigma_torsion = 0.5 * log_rat(sq_f) - 0.5 / (p - 1) * log_rat(sq_m);

  TorsionFixedCounts counts = torsion_fixed_counts(ca);
  out.fixed_counts = counts.fixed_count;
  out.norm_kernel_counts = counts.norm_kernel_count;
  for (int i = 0; i <= ca.complex.top(); ++i) {
    int sign = (i % 2 == 0) ? -1 : 1;  // (-1)^(i+1)
    out.torsion_count_term +=
        sign * (log_int(counts.fixed_count[i]) -
                1.0 / (p - 1) * log_int(counts.norm_kernel_count[i]));
    out.regulator_term += -sign * (0.5 * log_rat(h_fixed[i].regulator_sq) -
                                   0.5 / (p - 1) * log_rat(h_moving[i].regulator_sq));
  }

  for (const auto& d : h_total)
    for (const Int& t : d.torsion) {
      Int q = t;
      while (q % p == 0) {
        out.p_power_order *= p;
        q /= p;
      }
    }
  out.fp_dims_total = fp_dims(ca.complex, uint32_t(p));
  out.fp_dims_fixed_part = fp_dims(fixed.complex, uint32_t(p));
  out.exact_regime =
      out.p_power_order == 1 && !has_p_torsion(h_fixed, p) && !has_p_torsion(h_moving, p);

  // sq_f^(p-1) / sq_m  ==  prod_i [ k_i^{-2(p-1)} m_i^2 rsq_f_i^{p-1} / rsq_m_i ]^{(-1)^i}
  Rat lhs = rat_pow(sq_f, p - 1) / sq_m;
  Rat rhs = 1;
  for (int i = 0; i <= ca.complex.top(); ++i) {
    Rat k(counts.fixed_count[i]);
    Rat m(counts.norm_kernel_count[i]);
    Rat factor = rat_pow(k, -2 * (p - 1)) * m * m * rat_pow(h_fixed[i].regulator_sq, p - 1) /
                 h_moving[i].regulator_sq;
    rhs *= rat_pow(factor, (i % 2 == 0) ? 1 : -1);
  }
  out.identity_exact = lhs == rhs;
  return out;
}

SmithCheckResult smith_check(const SimplicialComplex& sc, const std::vector<int>& vertex_map,
                             int prime) {
  if (!is_prime(prime)) fail(Err::InputError, "order of the action must be prime");
  if (!is_automorphism(sc, vertex_map))
    fail(Err::ActionInvalid, "vertex map does not preserve the complex");
  std::vector<int> power = vertex_map;
  for (int e = 1; e < prime; ++e)
    for (size_t v = 0; v < power.size(); ++v) power[v] = vertex_map[power[v]];
  for (size_t v = 0; v < power.size(); ++v)
    if (power[v] != int(v)) fail(Err::ActionInvalid, "vertex map order does not divide the prime");
  if (!is_regular_action(sc, vertex_map, prime))
    fail(Err::ActionNotRegular, "a simplex is preserved without being fixed pointwise");

  const uint32_t p = uint32_t(prime);
  std::vector<IntMat> act = action_matrices(sc, vertex_map);
  SimplicialComplex fixed_sc = fixed_subcomplex(sc, vertex_map);

  SmithCheckResult out;
  out.sequences_exact = true;
  for (int d = 0; d <= sc.dim(); ++d) {
    const int n = sc.count(d);
    fp::Mat s = fp::Mat::from_int(act[d], p);
    fp::Mat one_minus = fp::Mat::identity(p, n) - s;

    // inclusion of the cochains supported on pointwise-fixed simplices
    std::vector<int> fixed_cols;
    for (int t = 0; t < n; ++t) {
      bool fix = true;
      for (int v : sc.simplices[d][t])
        if (vertex_map[v] != v) {
          fix = false;
          break;
        }
      if (fix) fixed_cols.push_back(t);
    }
    fp::Mat incl(p, n, int(fixed_cols.size()));
    for (size_t j = 0; j < fixed_cols.size(); ++j) incl.at(fixed_cols[j], int(j)) = 1;

    for (int i = 1; i < prime; ++i) {
      SmithDegreeCheck chk;
      chk.degree = d;
      chk.power = i;
      chk.fixed_dim = int(fixed_cols.size());
      fp::Mat ni = one_minus.pow(i);
      fp::Mat nrest = one_minus.pow(prime - i);
      chk.twisted_rank = fp::rank(ni);
      chk.complement_kernel = n - fp::rank(nrest);
      chk.overlap = fp::span_intersection_dim(incl, ni);
      chk.exact = chk.overlap == 0 &&
                  chk.fixed_dim + chk.twisted_rank == chk.complement_kernel;
      out.sequences_exact = out.sequences_exact && chk.exact;
      out.per_degree.push_back(chk);
    }
  }

  Complex total = cochain_complex(sc);
  Complex fixed_cx = cochain_complex(fixed_sc);
  out.h_dims_total = fp_dims(total, p);
  out.h_dims_fixed = fp_dims(fixed_cx, p);
  int sum_total = 0, sum_fixed = 0;
  for (int v : out.h_dims_total) sum_total += v;
  for (int v : out.h_dims_fixed) sum_fixed += v;
  out.inequality_holds = sum_fixed <= sum_total;
  return out;
}

}  // namespace tf
