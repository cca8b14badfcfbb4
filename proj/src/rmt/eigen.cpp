#include "freelevy/rmt/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freelevy/error.hpp"
#include "freelevy/rmt/kernels.hpp"

namespace freelevy::rmt {

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
  const std::size_t n = d.size();
  if (n == 0) return {};
  if (e.size() + 1 != n) fail(ErrorCode::kSizeMismatch, "off-diagonal length must be n - 1");
  e.push_back(0.0);
  // Off-diagonals below eps * ||T|| are also treated as zero; otherwise
  // clusters of tiny eigenvalues (rank-deficient Wishart) never deflate.
  double anorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) anorm = std::max(anorm, std::abs(d[i]) + std::abs(e[i]));
  const double eps = std::numeric_limits<double>::epsilon();
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd || std::abs(e[m]) <= eps * anorm) break;
      }
      if (m != l) {
        if (++iter > 60) fail(ErrorCode::kNoConvergence, "QL iteration did not converge", std::abs(e[l]));
        // Wilkinson-type shift from the leading 2x2 block.
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::size_t i = m;
        bool deflated = false;
        while (i-- > l) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            deflated = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (deflated) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& input, double tol) {
  const std::size_t n = input.n;
  if (input.data.size() != n * n) fail(ErrorCode::kSizeMismatch, "matrix storage is not n x n");
  if (n == 0) return {};
  double scale = 1.0;
  for (const auto& x : input.data) scale = std::max(scale, std::abs(x));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(input(i, j) - std::conj(input(j, i))) > tol * scale)
        fail(ErrorCode::kNotHermitian, "matrix is not Hermitian");

  const KernelTable& k = active_kernels();
  CMatrix a = input;
  std::vector<double> d(n), e(n > 1 ? n - 1 : 0);
  std::vector<cplx> v(n), w(n);
  for (std::size_t col = 0; col + 1 < n; ++col) {
    const std::size_t m = n - col - 1;
    // x = A[col+1:, col] = conj(A[col, col+1:]).
    const cplx* src = a.row(col) + col + 1;
    for (std::size_t j = 0; j < m; ++j) v[j] = std::conj(src[j]);
    const cplx alpha = v[0];
    double xnorm = 0.0;
    for (std::size_t j = 1; j < m; ++j) xnorm = std::hypot(xnorm, std::abs(v[j]));
    cplx tau = 0.0;
    double beta = alpha.real();
    if (xnorm != 0.0 || alpha.imag() != 0.0) {
      beta = -std::copysign(std::hypot(std::hypot(alpha.real(), alpha.imag()), xnorm), alpha.real());
      tau = cplx((beta - alpha.real()) / beta, -alpha.imag() / beta);
      const cplx scal = 1.0 / (alpha - beta);
      for (std::size_t j = 1; j < m; ++j) v[j] *= scal;
      v[0] = 1.0;
      cplx* block = a.row(col + 1) + col + 1;
      // w = tau A v;  w -= (tau/2)(w^H v) v;  A -= v w^H + w v^H
      k.hemv(m, block, n, v.data(), w.data());
      for (std::size_t j = 0; j < m; ++j) w[j] *= tau;
      const cplx corr = -0.5 * tau * k.dotc(m, w.data(), v.data());
      k.axpy(m, corr, v.data(), w.data());
      k.her2(m, block, n, v.data(), w.data());
    }
    d[col] = a(col, col).real();
    e[col] = beta;
  }
  d[n - 1] = a(n - 1, n - 1).real();
  return tridiagonal_eigenvalues(std::move(d), std::move(e));
}

}  // namespace freelevy::rmt
