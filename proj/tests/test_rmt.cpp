#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "freelevy/error.hpp"
#include "freelevy/rmt/ensembles.hpp"
#include "freelevy/rmt/kernels.hpp"
#include "freelevy/rmt/rng.hpp"
#include "oracles.hpp"

using namespace freelevy;
using namespace freelevy::rmt;

namespace {

CMatrix random_hermitian(std::size_t n, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  CMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      a(i, j) = i == j ? cplx(nd(g), 0.0) : cplx(nd(g), nd(g));
      a(j, i) = std::conj(a(i, j));
    }
  return a;
}

std::vector<double> eigen_oracle(const CMatrix& a) {
  Eigen::MatrixXcd m(a.n, a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < a.n; ++j) m(i, j) = a(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + a.n);
  return v;
}

std::vector<cplx> random_vec(std::size_t n, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(nd(g), nd(g));
  return v;
}

double max_gap(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SpectralDensity semicircle_model(double variance = 1.0) {
  return density_from_triplet(make_triplet(0, variance), linear_grid(-4, 4, 1601));
}

}  // namespace

TEST_CASE("rmt: Philox4x32-10 known answers") {
  using B = Philox4x32::Block;
  CHECK(Philox4x32::generate(B{0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate(B{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate(B{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("rmt: random streams") {
  auto a = make_rng(7, "gue"), b = make_rng(7, "gue"), c = make_rng(7, "haar"), d = make_rng(8, "gue");
  std::vector<std::uint64_t> va, vb, vc, vd;
  for (int i = 0; i < 16; ++i) {
    va.push_back(a.next_u64());
    vb.push_back(b.next_u64());
    vc.push_back(c.next_u64());
    vd.push_back(d.next_u64());
  }
  CHECK(va == vb);
  CHECK(va != vc);
  CHECK(va != vd);
  auto g = make_rng(1, "moments");
  double s = 0, s2 = 0;
  const int N = 200000;
  for (int i = 0; i < N; ++i) {
    double x = g.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / N) < 0.01);
  CHECK(std::abs(s2 / N - 1.0) < 0.02);
  for (double mean : {0.5, 30.0, 1000.0}) {
    CAPTURE(mean);
    double m = 0, v = 0;
    const int K = 40000;
    for (int i = 0; i < K; ++i) {
      double x = static_cast<double>(g.poisson(mean));
      m += x;
      v += x * x;
    }
    m /= K;
    v = v / K - m * m;
    CHECK(std::abs(m - mean) < 5 * std::sqrt(mean / K));
    CHECK(std::abs(v / mean - 1.0) < 0.05);
  }
}

TEST_CASE("rmt: scalar and AVX2 kernel equivalence") {
  const KernelTable* simd = avx2_kernels();
  if (simd == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine; equivalence not exercised");
    return;
  }
  const KernelTable& ref = scalar_kernels();
  std::mt19937_64 g(3);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 17u, 64u, 101u}) {
    CAPTURE(n);
    const std::size_t lda = n + 3;
    auto base = random_vec(lda * n, g);
    auto v = random_vec(n, g), w = random_vec(n, g);
    const double tol = 1e-13 * static_cast<double>(n + 1);

    auto a1 = base, a2 = base;
    ref.her2(n, a1.data(), lda, v.data(), w.data());
    simd->her2(n, a2.data(), lda, v.data(), w.data());
    CHECK(max_gap(a1, a2) <= tol);

    a1 = base;
    a2 = base;
    ref.her(n, -0.7, a1.data(), lda, v.data());
    simd->her(n, -0.7, a2.data(), lda, v.data());
    CHECK(max_gap(a1, a2) <= tol);

    std::vector<cplx> y1(n), y2(n);
    ref.hemv(n, base.data(), lda, v.data(), y1.data());
    simd->hemv(n, base.data(), lda, v.data(), y2.data());
    CHECK(max_gap(y1, y2) <= tol * 10);

    CHECK(std::abs(ref.dotc(n, v.data(), w.data()) - simd->dotc(n, v.data(), w.data())) <= tol * 10);
    y1 = w;
    y2 = w;
    ref.axpy(n, cplx(0.3, -1.1), v.data(), y1.data());
    simd->axpy(n, cplx(0.3, -1.1), v.data(), y2.data());
    CHECK(max_gap(y1, y2) <= tol);
  }
}

TEST_CASE("rmt: eigenvalues against Eigen and small examples") {
  CMatrix id(3);
  for (int i = 0; i < 3; ++i) id(i, i) = 1.0;
  CHECK(hermitian_eigenvalues(id) == std::vector<double>{1, 1, 1});
  CMatrix d(3);
  for (int i = 0; i < 3; ++i) d(i, i) = i + 1.0;
  CHECK(hermitian_eigenvalues(d) == std::vector<double>{1, 2, 3});
  CMatrix sw(2);
  sw(0, 1) = sw(1, 0) = 1.0;
  auto e = hermitian_eigenvalues(sw);
  CHECK(e[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(e[1] == doctest::Approx(1.0).epsilon(1e-15));
  CMatrix bad(2);
  bad(0, 1) = cplx(1.0, 0.5);
  bad(1, 0) = cplx(1.0, 0.5);
  CHECK_THROWS_AS(hermitian_eigenvalues(bad), Error);

  std::mt19937_64 g(4);
  for (std::size_t n : {1u, 2u, 7u, 40u, 150u}) {
    auto a = random_hermitian(n, g);
    auto got = hermitian_eigenvalues(a);
    auto want = eigen_oracle(a);
    double scale = std::max(std::abs(want.front()), std::abs(want.back()));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-12 * scale * n);
  }
  // rank-deficient input
  CMatrix low(6);
  auto v = random_vec(6, g);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j) low(i, j) = v[i] * std::conj(v[j]);
  auto lw = hermitian_eigenvalues(low);
  double nv = 0;
  for (auto x : v) nv += std::norm(x);
  CHECK(lw.back() == doctest::Approx(nv).epsilon(1e-12));
  for (int i = 0; i < 5; ++i) CHECK(std::abs(lw[i]) < 1e-12 * nv);
}

TEST_CASE("rmt: tridiagonal eigenvalues") {
  // second-difference matrix: 2 - 2 cos(k pi / (n + 1))
  const int n = 50;
  auto got = tridiagonal_eigenvalues(std::vector<double>(n, 2.0), std::vector<double>(n - 1, -1.0));
  for (int k = 1; k <= n; ++k)
    CHECK(got[k - 1] == doctest::Approx(2.0 - 2.0 * std::cos(k * std::numbers::pi / (n + 1))).epsilon(1e-12));
}

TEST_CASE("rmt: GUE ensemble") {
  auto h = gue_matrix(64, 1.0, 9);
  double tr = 0.0;
  for (std::size_t i = 0; i < 64; ++i) tr += h(i, i).real();
  auto s = sample_gue(64, 1.0, 9);
  double sum = 0.0;
  for (double x : s.eigenvalues) sum += x;
  CHECK(std::abs(sum - tr) < 1e-8);
  auto z = sample_gue(16, 0.0, 9);
  for (double x : z.eigenvalues) CHECK(x == 0.0);
  CHECK(sample_gue(64, 1.0, 9).eigenvalues == s.eigenvalues);
  auto big = sample_gue(512, 1.0, 2024);
  CHECK(ks_distance(big, semicircle_model()) < 0.08);
}

TEST_CASE("rmt: Wishart ensemble") {
  auto w = sample_wishart(512, 1.0, 77);
  for (double x : w.eigenvalues) CHECK(x >= -1e-10);
  auto mp = density_from_triplet(make_triplet(1, 0, LevyMeasure::dirac(1.0)), linear_grid(0, 4.5, 1801));
  CHECK(ks_distance(w, mp) < 0.08);
  auto half = sample_wishart(400, 0.5, 78);
  auto zeros = std::count_if(half.eigenvalues.begin(), half.eigenvalues.end(),
                             [](double x) { return x <= 1e-8; });
  CHECK(std::abs(static_cast<double>(zeros) / 400.0 - 0.5) <= 0.05);
}

TEST_CASE("rmt: compound model") {
  auto g = sample_fid_matrix(make_triplet(0, 1), 128, 1e-3, 5);
  CHECK(g.eigenvalues == sample_gue(128, 1.0, derive_stream(5, "fid/gue")).eigenvalues);
  auto c = sample_fid_matrix(make_triplet(-0.75, 0), 32, 1e-3, 5);
  for (double x : c.eigenvalues) CHECK(x == doctest::Approx(-0.75).epsilon(1e-14));
  auto p = sample_fid_matrix(make_triplet(1, 0, LevyMeasure::dirac(1.0)), 512, 1e-3, 6);
  auto mp = density_from_triplet(make_triplet(1, 0, LevyMeasure::dirac(1.0)), linear_grid(0, 4.5, 1801));
  CHECK(ks_distance(p, mp) < 0.09);
}

TEST_CASE("rmt: free convolution oracle") {
  auto a = sample_gue(64, 1.0, 1);
  EigenSample zero{std::vector<double>(64, 0.0), 0, "zero"};
  auto r = free_convolve_oracle(a, zero, 3);
  for (std::size_t i = 0; i < 64; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(a.eigenvalues[i]).epsilon(1e-10).scale(1.0));
  EigenSample shift{std::vector<double>(64, 0.5), 0, "const"};
  auto sh = free_convolve_oracle(shift, a, 3);
  for (std::size_t i = 0; i < 64; ++i)
    CHECK(sh.eigenvalues[i] == doctest::Approx(a.eigenvalues[i] + 0.5).epsilon(1e-10).scale(1.0));
  CHECK_THROWS_AS(free_convolve_oracle(a, sample_gue(32, 1.0, 1), 3), Error);
  auto s = free_convolve_oracle(sample_gue(512, 1.0, 10), sample_gue(512, 1.0, 11), 12);
  CHECK(ks_distance(s, semicircle_model(2.0)) < 0.08);
}

TEST_CASE("rmt: Kolmogorov-Smirnov distance") {
  auto model = semicircle_model();
  const std::size_t n = 500;
  EigenSample exact;
  for (std::size_t i = 0; i < n; ++i) {
    double q = (i + 0.5) / n;
    auto it = std::lower_bound(model.cdf.begin(), model.cdf.end(), q);
    std::size_t k = static_cast<std::size_t>(it - model.cdf.begin());
    double t = (q - model.cdf[k - 1]) / (model.cdf[k] - model.cdf[k - 1]);
    exact.eigenvalues.push_back(model.grid[k - 1] + t * (model.grid[k] - model.grid[k - 1]));
  }
  CHECK(ks_distance(exact, model) <= 1.0 / n);
  EigenSample far{{10.0, 10.5, 11.0}, 0, "far"};
  auto rep = ks_report(far, model);
  CHECK(rep.statistic == 1.0);
  CHECK(rep.empty_overlap);
  CHECK_FALSE(rep.warning.empty());
}
