#pragma once

#include <complex>
#include <cstddef>

namespace freelevy::rmt {

using cplx = std::complex<double>;

// Dense complex kernels behind the eigensolver and the ensembles. Matrices
// are row-major with leading dimension lda.
struct KernelTable {
  const char* name;
  // A -= v w^H + w v^H on the n x n block.
  void (*her2)(std::size_t n, cplx* a, std::size_t lda, const cplx* v, const cplx* w);
  // y = A x on the n x n block.
  void (*hemv)(std::size_t n, const cplx* a, std::size_t lda, const cplx* x, cplx* y);
  // A += alpha v v^H on the n x n block.
  void (*her)(std::size_t n, double alpha, cplx* a, std::size_t lda, const cplx* v);
  // sum conj(x_i) y_i
  cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);
  // y += alpha x
  void (*axpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
};

const KernelTable& scalar_kernels();
// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_kernels();

// The table used by the library: AVX2 when available, unless the
// FREELEVY_SIMD environment variable says "scalar". Chosen once per process.
const KernelTable& active_kernels();

}  // namespace freelevy::rmt
