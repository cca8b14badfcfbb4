#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace freelevy::rmt {

using cplx = std::complex<double>;

// Dense square complex matrix, row-major.
struct CMatrix {
  std::size_t n = 0;
  std::vector<cplx> data;

  CMatrix() = default;
  explicit CMatrix(std::size_t size) : n(size), data(size * size) {}

  cplx& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data[i * n + j]; }
  cplx* row(std::size_t i) { return data.data() + i * n; }
  const cplx* row(std::size_t i) const { return data.data() + i * n; }
};

// Ascending eigenvalues of a Hermitian matrix: Householder reduction to real
// tridiagonal form, then implicit-shift QL. NotHermitian when
// |A_ij - conj(A_ji)| exceeds tol * max(1, max |A_ij|).
std::vector<double> hermitian_eigenvalues(const CMatrix& a, double tol = 1e-12);

// Ascending eigenvalues of the symmetric tridiagonal matrix with diagonal d
// and off-diagonal e (e.size() == d.size() - 1).
std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e);

}  // namespace freelevy::rmt
