#include "freelevy/rmt/ensembles.hpp"

#include <algorithm>
#include <cmath>

#include "freelevy/error.hpp"
#include "freelevy/rmt/kernels.hpp"
#include "freelevy/rmt/rng.hpp"

namespace freelevy::rmt {
namespace {

cplx complex_normal(Philox4x32& g) {
  constexpr double kHalf = 0.70710678118654752440;
  const double re = g.normal();
  const double im = g.normal();
  return {kHalf * re, kHalf * im};
}

void require_size(std::size_t n) {
  if (n < 2) fail(ErrorCode::kInvalidArgument, "matrix size must be >= 2");
}

EigenSample make_sample(std::vector<double> ev, std::uint64_t seed, std::string kind) {
  return EigenSample{std::move(ev), seed, std::move(kind)};
}

double poly_antiderivative(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * t + c[k] / static_cast<double>(k + 1);
  return acc * t;
}

}  // namespace

CMatrix gue_matrix(std::size_t n, double variance, std::uint64_t seed) {
  require_size(n);
  if (!(variance >= 0.0)) fail(ErrorCode::kInvalidArgument, "GUE variance must be >= 0");
  auto g = make_rng(seed, "gue");
  CMatrix x(n);
  for (auto& v : x.data) v = complex_normal(g);
  CMatrix h(n);
  const double s = std::sqrt(variance) / std::sqrt(2.0 * static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const cplx v = s * (x(i, j) + std::conj(x(j, i)));
      h(i, j) = i == j ? cplx(v.real(), 0.0) : v;
      h(j, i) = std::conj(h(i, j));
    }
  return h;
}

EigenSample sample_gue(std::size_t n, double variance, std::uint64_t seed) {
  return make_sample(hermitian_eigenvalues(gue_matrix(n, variance, seed)), seed, "gue");
}

EigenSample sample_wishart(std::size_t n, double lambda, std::uint64_t seed) {
  require_size(n);
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    fail(ErrorCode::kInvalidArgument, "Wishart aspect ratio must be > 0");
  const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(lambda * n)));
  auto g = make_rng(seed, "wishart");
  std::vector<cplx> x(n * m);
  for (auto& v : x) v = complex_normal(g);
  const KernelTable& k = active_kernels();
  CMatrix w(n);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const cplx v = inv * k.dotc(m, x.data() + j * m, x.data() + i * m);
      w(i, j) = i == j ? cplx(v.real(), 0.0) : v;
      w(j, i) = std::conj(w(i, j));
    }
  return make_sample(hermitian_eigenvalues(w), seed, "wishart");
}

double sample_levy_jump(const LevyMeasure& r, double total_mass, double u1, double u2) {
  double target = u1 * total_mass;
  for (const auto& a : r.atoms()) {
    if (target < a.mass) return a.location;
    target -= a.mass;
  }
  for (const auto& p : r.power_pieces()) {
    const double lo = p.inner, hi = p.outer;
    const double mass = p.alpha == 0.0
                            ? p.coef * std::log(hi / lo)
                            : p.coef * (std::pow(lo, -p.alpha) - std::pow(hi, -p.alpha)) / p.alpha;
    if (target < mass) {
      double s;
      if (p.alpha == 0.0) {
        s = lo * std::pow(hi / lo, u2);
      } else {
        const double a = std::pow(lo, -p.alpha), b = std::pow(hi, -p.alpha);
        s = std::pow(a - u2 * (a - b), -1.0 / p.alpha);
      }
      return p.side * std::clamp(s, lo, hi);
    }
    target -= mass;
  }
  const auto& polys = r.poly_pieces();
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const auto& p = polys[i];
    const double base = poly_antiderivative(p.coeffs, p.lo);
    const double mass = poly_antiderivative(p.coeffs, p.hi) - base;
    if (target < mass || i + 1 == polys.size()) {
      const double want = u2 * mass;
      double lo = p.lo, hi = p.hi;
      for (int it = 0; it < 200 && lo < hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (poly_antiderivative(p.coeffs, mid) - base < want)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    }
    target -= mass;
  }
  // Rounding left target just above the summed masses: take the last piece.
  if (!r.atoms().empty() && r.power_pieces().empty()) return r.atoms().back().location;
  const auto& p = r.power_pieces().back();
  return p.side * p.outer;
}

CMatrix fid_matrix(const FreeTriplet& u, std::size_t n, double eps, std::uint64_t seed) {
  require_size(n);
  if (u.flavor != Flavor::kFree) fail(ErrorCode::kFlavorMismatch, "fid matrix needs a free triplet");
  if (!(eps > 0.0)) fail(ErrorCode::kInvalidArgument, "truncation eps must be > 0");
  const LevyMeasure r = u.r.restricted_outside(eps);
  const double mass = r.empty() ? 0.0 : r.total_mass();
  const double comp = r.empty() ? 0.0 : levy_quadrature(r, integrands::sigma());
  CMatrix a = u.b > 0.0 ? gue_matrix(n, u.b, derive_stream(seed, "fid/gue")) : CMatrix(n);
  for (std::size_t i = 0; i < n; ++i) a(i, i) += u.a - comp;
  if (mass > 0.0) {
    auto g = make_rng(seed, "fid/jumps");
    const std::uint64_t count = g.poisson(static_cast<double>(n) * mass);
    const KernelTable& k = active_kernels();
    std::vector<cplx> v(n);
    for (std::uint64_t j = 0; j < count; ++j) {
      const double u1 = g.uniform(), u2 = g.uniform();
      const double t = sample_levy_jump(r, mass, u1, u2);
      double norm2 = 0.0;
      for (auto& x : v) {
        x = complex_normal(g);
        norm2 += std::norm(x);
      }
      k.her(n, t / norm2, a.data.data(), n, v.data());
    }
  }
  return a;
}

EigenSample sample_fid_matrix(const FreeTriplet& u, std::size_t n, double eps, std::uint64_t seed) {
  return make_sample(hermitian_eigenvalues(fid_matrix(u, n, eps, seed)), seed, "fid");
}

CMatrix haar_unitary(std::size_t n, std::uint64_t seed) {
  require_size(n);
  auto g = make_rng(seed, "haar");
  CMatrix q(n);  // column-major
  for (auto& v : q.data) v = complex_normal(g);
  const KernelTable& k = active_kernels();
  for (std::size_t c = 0; c < n; ++c) {
    cplx* col = q.data.data() + c * n;
    // Two passes of modified Gram-Schmidt keep the columns orthonormal to
    // working precision.
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t p = 0; p < c; ++p) {
        const cplx* prev = q.data.data() + p * n;
        k.axpy(n, -k.dotc(n, prev, col), prev, col);
      }
    const double norm = std::sqrt(k.dotc(n, col, col).real());
    for (std::size_t i = 0; i < n; ++i) col[i] /= norm;
  }
  return q;
}

EigenSample free_convolve_oracle(const EigenSample& a, const EigenSample& b, std::uint64_t seed) {
  const std::size_t n = a.eigenvalues.size();
  if (b.eigenvalues.size() != n) fail(ErrorCode::kSizeMismatch, "samples must have equal size");
  const CMatrix u = haar_unitary(n, seed);
  CMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = a.eigenvalues[i];
  const KernelTable& k = active_kernels();
  for (std::size_t c = 0; c < n; ++c)
    if (b.eigenvalues[c] != 0.0) k.her(n, b.eigenvalues[c], m.data.data(), n, u.data.data() + c * n);
  return make_sample(hermitian_eigenvalues(m), seed, "free_convolution");
}

EigenSample simulate(const Ensemble& e) {
  switch (e.kind) {
    case EnsembleKind::kGue:
      return sample_gue(e.n, e.variance, e.seed);
    case EnsembleKind::kWishart:
      return sample_wishart(e.n, e.lambda, e.seed);
    case EnsembleKind::kFid:
      return sample_fid_matrix(e.triplet, e.n, e.eps, e.seed);
  }
  fail(ErrorCode::kInvalidArgument, "unknown ensemble kind");
}

}  // namespace freelevy::rmt
