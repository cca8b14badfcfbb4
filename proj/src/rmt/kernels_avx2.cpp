#include "freelevy/rmt/kernels.hpp"

#if defined(FREELEVY_HAVE_AVX2_TU)
#include <immintrin.h>

namespace freelevy::rmt {
namespace {

// Two complex numbers per register, interleaved (re, im, re, im).
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_sw = _mm256_permute_pd(a, 0x5);
  return _mm256_fmaddsub_pd(a, b_re, _mm256_mul_pd(a_sw, b_im));
}

// conj(a) * b
inline __m256d cmulc(__m256d a, __m256d b) {
  const __m256d a_re = _mm256_movedup_pd(a);
  const __m256d a_im = _mm256_permute_pd(a, 0xF);
  const __m256d b_sw = _mm256_permute_pd(b, 0x5);
  // (ar br + ai bi, ar bi - ai br)
  return _mm256_fmsubadd_pd(a_re, b, _mm256_mul_pd(a_im, b_sw));
}

inline __m256d load(const cplx* p) { return _mm256_loadu_pd(reinterpret_cast<const double*>(p)); }
inline void store(cplx* p, __m256d v) { _mm256_storeu_pd(reinterpret_cast<double*>(p), v); }
inline __m256d splat(cplx c) { return _mm256_setr_pd(c.real(), c.imag(), c.real(), c.imag()); }

inline cplx hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v), hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return {_mm_cvtsd_f64(s), _mm_cvtsd_f64(_mm_unpackhi_pd(s, s))};
}

void her2(std::size_t n, cplx* a, std::size_t lda, const cplx* v, const cplx* w) {
  for (std::size_t i = 0; i < n; ++i) {
    cplx* row = a + i * lda;
    const __m256d vi = splat(v[i]), wi = splat(w[i]);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) {
      // vi conj(w_j) + wi conj(v_j) = conj(w_j) vi + conj(v_j) wi
      const __m256d t = _mm256_add_pd(cmulc(load(w + j), vi), cmulc(load(v + j), wi));
      store(row + j, _mm256_sub_pd(load(row + j), t));
    }
    for (; j < n; ++j) row[j] -= v[i] * std::conj(w[j]) + w[i] * std::conj(v[j]);
  }
}

void hemv(std::size_t n, const cplx* a, std::size_t lda, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) {
    const cplx* row = a + i * lda;
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) acc = _mm256_add_pd(acc, cmul(load(row + j), load(x + j)));
    cplx s = hsum(acc);
    for (; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

void her(std::size_t n, double alpha, cplx* a, std::size_t lda, const cplx* v) {
  for (std::size_t i = 0; i < n; ++i) {
    cplx* row = a + i * lda;
    const cplx s = alpha * v[i];
    const __m256d vi = splat(s);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) store(row + j, _mm256_add_pd(load(row + j), cmulc(load(v + j), vi)));
    for (; j < n; ++j) row[j] += s * std::conj(v[j]);
  }
}

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = _mm256_add_pd(acc, cmulc(load(x + i), load(y + i)));
  cplx s = hsum(acc);
  for (; i < n; ++i) s += std::conj(x[i]) * y[i];
  return s;
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const __m256d al = splat(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) store(y + i, _mm256_add_pd(load(y + i), cmul(load(x + i), al)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

const KernelTable kTable{"avx2", her2, hemv, her, dotc, axpy};

}  // namespace

const KernelTable* avx2_kernels_compiled() { return &kTable; }

}  // namespace freelevy::rmt

#else

namespace freelevy::rmt {
const KernelTable* avx2_kernels_compiled() { return nullptr; }
}  // namespace freelevy::rmt

#endif
