#include "freelevy/rmt/kernels.hpp"

namespace freelevy::rmt {
namespace {

void her2(std::size_t n, cplx* a, std::size_t lda, const cplx* v, const cplx* w) {
  for (std::size_t i = 0; i < n; ++i) {
    cplx* row = a + i * lda;
    const cplx vi = v[i], wi = w[i];
    for (std::size_t j = 0; j < n; ++j) row[j] -= vi * std::conj(w[j]) + wi * std::conj(v[j]);
  }
}

void hemv(std::size_t n, const cplx* a, std::size_t lda, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx* row = a + i * lda;
    cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void her(std::size_t n, double alpha, cplx* a, std::size_t lda, const cplx* v) {
  for (std::size_t i = 0; i < n; ++i) {
    cplx* row = a + i * lda;
    const cplx vi = alpha * v[i];
    for (std::size_t j = 0; j < n; ++j) row[j] += vi * std::conj(v[j]);
  }
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

const KernelTable kTable{"scalar", her2, hemv, her, dotc, axpy};

}  // namespace

const KernelTable& scalar_kernels() { return kTable; }

}  // namespace freelevy::rmt
