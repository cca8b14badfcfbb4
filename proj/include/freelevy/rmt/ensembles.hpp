#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freelevy/rmt/eigen.hpp"
#include "freelevy/transforms.hpp"

namespace freelevy::rmt {

struct EigenSample {
  std::vector<double> eigenvalues;  // ascending
  std::uint64_t seed = 0;
  std::string kind;
};

enum class EnsembleKind { kGue, kWishart, kFid };

struct Ensemble {
  EnsembleKind kind = EnsembleKind::kGue;
  std::size_t n = 2;
  double variance = 1.0;  // gue
  double lambda = 1.0;    // wishart aspect ratio
  FreeTriplet triplet;    // fid
  double eps = 1e-3;      // fid truncation
  std::uint64_t seed = 0;
};

// sigma (X + X^H) / sqrt(2n), X with iid standard complex Gaussian entries:
// spectrum tends to the semicircle of radius 2 sqrt(variance).
CMatrix gue_matrix(std::size_t n, double variance, std::uint64_t seed);
EigenSample sample_gue(std::size_t n, double variance, std::uint64_t seed);

// (1/n) X X^H with X of size n x round(lambda n): spectrum tends to the free
// Poisson law of rate lambda (atom 1 - lambda at 0 when lambda < 1).
EigenSample sample_wishart(std::size_t n, double lambda, std::uint64_t seed);

// (a - int_{|t|>eps} sigma dr) I + sqrt(b) GUE + sum_i t_i v_i v_i^H with
// Poisson(n r(|t|>eps)) jumps t_i ~ r restricted and normalized, v_i uniform
// on the complex unit sphere.
CMatrix fid_matrix(const FreeTriplet& u, std::size_t n, double eps, std::uint64_t seed);
EigenSample sample_fid_matrix(const FreeTriplet& u, std::size_t n, double eps, std::uint64_t seed);

// Haar unitary from the QR factorisation of a complex Gaussian matrix with
// positive diagonal in R. Returned column-major: column k is data[k*n ...].
CMatrix haar_unitary(std::size_t n, std::uint64_t seed);

// Eigenvalues of diag(A) + U diag(B) U^H with U Haar.
EigenSample free_convolve_oracle(const EigenSample& a, const EigenSample& b, std::uint64_t seed);

EigenSample simulate(const Ensemble& e);

// Draw from a Levy measure with finite total mass, normalized.
double sample_levy_jump(const LevyMeasure& r, double total_mass, double u1, double u2);

struct KsReport {
  double statistic = 1.0;
  std::size_t clamped = 0;  // sample points outside the model grid
  bool empty_overlap = false;
  std::string warning;
};

// sup |F_n - F| over the sample points, both one-sided limits, where F is
// the model CDF: linear interpolation of the continuous part plus atoms as
// jumps. Sample points within 1e-8 of an atom count as on it.
KsReport ks_report(const EigenSample& sample, const SpectralDensity& model);
double ks_distance(const EigenSample& sample, const SpectralDensity& model);

}  // namespace freelevy::rmt
