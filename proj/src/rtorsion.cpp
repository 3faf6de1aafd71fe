#include "torsionforge/rtorsion.hpp"

#include <cmath>

namespace tf {

Rat rt_sq_via_cohomology(const Complex& c, MuNorm mu) {
  auto h = cohomology(c);
  Rat rt_sq = 1;
  for (int i = 0; i <= c.top(); ++i) {
    Rat tors = Rat(h[i].torsion_order());
    Rat mu_sq = c.scale[i] * c.scale[i];
    if (mu == MuNorm::harmonic) mu_sq *= h[i].regulator_sq;
    int sign = (i % 2 == 0) ? 1 : -1;
    rt_sq *= rat_pow(tors * tors, -sign);  // lattice factor, exponent (-1)^(i+1)
    rt_sq *= rat_pow(mu_sq, sign);
  }
  return rt_sq;
}

Rat rt_sq_via_determinant_line(const Complex& c, MuNorm mu) {
  auto h = cohomology(c);
  const int n = c.top();

  // complements mapping isomorphically onto the outgoing image lattices
  std::vector<IntMat> coexact;
  for (int i = 0; i <= n; ++i) {
    SnfResult s = snf(c.d_out(i));
    coexact.push_back(s.V.cols_range(0, s.rank()));
  }

  Rat rt_sq = 1;
  for (int i = 0; i <= n; ++i) {
    IntMat image_part =
        i == 0 ? IntMat(c.ranks[0], 0) : c.d_in(i) * coexact[i - 1];
    IntMat m = image_part.concat_cols(h[i].free_basis).concat_cols(coexact[i]);
    if (m.rows() != m.cols()) fail(Err::AssertionFailed, "splitting is not a full flag");
    Int det_m = abs_int(det_int(m));
    if (det_m == 0) fail(Err::AssertionFailed, "splitting determinant vanished");
    Rat mu_sq = c.scale[i] * c.scale[i];
    if (mu == MuNorm::harmonic) mu_sq *= h[i].regulator_sq;
    int sign = (i % 2 == 0) ? 1 : -1;
    rt_sq *= rat_pow(Rat(det_m * det_m), -sign);
    rt_sq *= rat_pow(mu_sq, sign);
  }
  return rt_sq;
}

double log_rt(const Complex& c, MuNorm mu) { return 0.5 * log_rat(rt_sq_via_cohomology(c, mu)); }

RatMat laplacian(const Complex& c, int degree) {
  validate(c);
  RatMat dout = RatMat::from_int(c.d_out(degree));
  RatMat din = RatMat::from_int(c.d_in(degree));
  const RatMat& g = c.metric[degree];
  auto ginv = solve_many(g, RatMat::identity(c.ranks[degree]));
  if (!ginv) fail(Err::AssertionFailed, "metric not invertible");

  RatMat up(c.ranks[degree], c.ranks[degree]);
  if (degree < c.top())
    up = *ginv * dout.transpose() * c.metric[degree + 1] * dout;
  RatMat down(c.ranks[degree], c.ranks[degree]);
  if (degree > 0) {
    auto ginv_prev = solve_many(c.metric[degree - 1], RatMat::identity(c.ranks[degree - 1]));
    if (!ginv_prev) fail(Err::AssertionFailed, "metric not invertible");
    down = din * *ginv_prev * din.transpose() * g;
  }
  return up + down;
}

namespace {

Eigen::MatrixXd to_double(const RatMat& m) {
  Eigen::MatrixXd d(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) d(i, j) = m.at(i, j).convert_to<double>();
  return d;
}

}  // namespace

DegreeSpectrum degree_spectrum(const Complex& c, int degree) {
  DegreeSpectrum out;
  const int r = c.ranks[degree];
  if (r == 0) {
    out.values = Eigen::VectorXd(0);
    out.vectors_u = Eigen::MatrixXd(0, 0);
    out.lt = Eigen::MatrixXd(0, 0);
    out.cutoff = 1e-10;
    return out;
  }
  RatMat lap = laplacian(c, degree);

  Eigen::MatrixXd g = to_double(c.metric[degree]);
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    fail(Err::MetricNotPositiveDefinite, "metric factorization failed");
  Eigen::MatrixXd lt = llt.matrixU();
  // conjugate into the orthonormal frame: L^T A L^{-T} is symmetric there
  Eigen::MatrixXd a = lt * to_double(lap) *
                      lt.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(r, r));
  a = 0.5 * (a + a.transpose());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (r > 0 && es.info() != Eigen::Success)
    fail(Err::AssertionFailed, "eigenvalue iteration failed");
  out.values = es.eigenvalues();
  out.vectors_u = es.eigenvectors();
  out.lt = lt;
  double lmax = r > 0 ? std::max(out.values.maxCoeff(), 0.0) : 0.0;
  out.cutoff = 1e-10 * std::max(lmax, 1.0);
  for (int i = 0; i < r; ++i)
    if (out.values(i) <= out.cutoff) ++out.kernel_dim;
  return out;
}

SpectralTorsion analytic_torsion(const Complex& c) {
  SpectralTorsion out;
  for (int i = 0; i <= c.top(); ++i) {
    DegreeSpectrum sp = degree_spectrum(c, i);
    std::vector<double> pos;
    double sum_log = 0;
    for (int k = sp.kernel_dim; k < sp.values.size(); ++k) {
      pos.push_back(sp.values(k));
      sum_log += std::log(sp.values(k));
    }
    int sign = (i % 2 == 0) ? -1 : 1;  // (-1)^(i+1)
    out.log_t += 0.5 * sign * i * sum_log;
    out.positive_eigenvalues.push_back(std::move(pos));
    out.kernel_dims.push_back(sp.kernel_dim);
  }
  return out;
}

}  // namespace tf
