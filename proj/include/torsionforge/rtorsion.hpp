#pragma once

#include "torsionforge/complexes.hpp"

#include <Eigen/Dense>

namespace tf {

// How the volume of each cohomology group is normalized.  With `harmonic`
// the free part is measured through the degree metric, so regulators enter;
// with `integral` it is measured against a lattice basis of the free part
// and the regulators drop out of both computation routes.
enum class MuNorm { harmonic, integral };

// Squared Reidemeister torsion of the complex, computed from the torsion
// orders, the regulators, and the volume scales.  Exact.
Rat rt_sq_via_cohomology(const Complex& c, MuNorm mu = MuNorm::harmonic);

// The same quantity evaluated directly: each degree is split into the image
// of the incoming differential, lifted cohomology classes, and a complement
// mapping isomorphically onto the outgoing image, and the change-of-basis
// determinant against the lattice basis is taken on the nose.  Exact, and
// independent of the closed form above on the lattice side.
Rat rt_sq_via_determinant_line(const Complex& c, MuNorm mu = MuNorm::harmonic);

// log RT, for reporting
double log_rt(const Complex& c, MuNorm mu = MuNorm::harmonic);

// Spectrum of one Hodge Laplacian in coordinates that are orthonormal for
// the degree metric.
struct DegreeSpectrum {
  Eigen::VectorXd values;     // ascending
  Eigen::MatrixXd vectors_u;  // orthonormal eigenvector columns
  Eigen::MatrixXd lt;         // upper factor of G = L L^T, maps x to u = L^T x
  int kernel_dim = 0;         // eigenvalues at or below the cutoff
  double cutoff = 0;
};

RatMat laplacian(const Complex& c, int degree);
DegreeSpectrum degree_spectrum(const Complex& c, int degree);

struct SpectralTorsion {
  double log_t = 0;
  std::vector<std::vector<double>> positive_eigenvalues;  // per degree
  std::vector<int> kernel_dims;
};

// Degree-weighted half sum of log-eigenvalues over the positive spectra.
SpectralTorsion analytic_torsion(const Complex& c);

}  // namespace tf
