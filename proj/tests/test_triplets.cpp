#include <cmath>
#include <random>

#include "doctest.h"
#include "freelevy/error.hpp"
#include "freelevy/transforms.hpp"
#include "oracles.hpp"
#include "random_models.hpp"

using namespace freelevy;

namespace {
const LevyMeasure kDelta1 = LevyMeasure::dirac(1.0);
}

TEST_CASE("sigma centering is the continuous truncation") {
  CHECK(sigma_centering(0.5) == 0.5);
  CHECK(sigma_centering(0.0) == 0.0);
  CHECK(sigma_centering(-3.0) == -1.0);
  CHECK(sigma_centering(3.0) == 1.0);
  CHECK(sigma_centering(1.0) == 1.0);
  CHECK(sigma_centering(-1.0) == -1.0);
}

TEST_CASE("Levy measure integrals on atoms and polynomial bodies") {
  CHECK(levy_quadrature(kDelta1, integrands::min1_sq()) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(levy_quadrature(kDelta1, integrands::t_minus_sigma())) < 1e-15);
  auto body = LevyMeasure::polynomial(1.0, 2.0, {1.0});
  CHECK(levy_quadrature(body, integrands::power(2)) == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("near-origin power pieces integrate against closed forms") {
  for (double alpha : {0.1, 0.5, 1.0, 1.5, 1.9}) {
    CAPTURE(alpha);
    const double c = 0.7, eps0 = 0.4;
    auto r = LevyMeasure::near_zero(alpha, c, 0.3, eps0);
    // int_0^eps0 t^2 c t^{-1-alpha} dt = c eps0^{2-alpha} / (2-alpha)
    double sq = (c + 0.3) * std::pow(eps0, 2 - alpha) / (2 - alpha);
    CHECK(levy_quadrature(r, integrands::min1_sq()) == doctest::Approx(sq).epsilon(1e-9));
    double odd = (c - 0.3) * std::pow(eps0, 3 - alpha) / (3 - alpha);
    CHECK(levy_quadrature(r, integrands::power(3)) == doctest::Approx(odd).epsilon(1e-9));
    CHECK(std::isinf(r.total_mass()));
    auto tail = r.restricted_outside(0.1);
    double mass = (c + 0.3) * (std::pow(0.1, -alpha) - std::pow(eps0, -alpha)) / alpha;
    CHECK(tail.total_mass() == doctest::Approx(mass).epsilon(1e-12));
  }
}

TEST_CASE("Levy measure normal form") {
  auto a = LevyMeasure::dirac(1.0, 0.5) + LevyMeasure::dirac(1.0, 0.5);
  CHECK(a == kDelta1);
  auto split = LevyMeasure::polynomial(0.5, 1.0, {2.0}) + LevyMeasure::polynomial(1.0, 2.0, {2.0});
  CHECK(split == LevyMeasure::polynomial(0.5, 2.0, {2.0}));
  CHECK_THROWS_AS(LevyMeasure::dirac(0.0), Error);
  CHECK_THROWS_AS(LevyMeasure::dirac(1.0, -1.0), Error);
  CHECK_THROWS_AS(LevyMeasure::near_zero(2.0, 1.0, 0.0, 0.5), Error);
  CHECK(LevyMeasure::polynomial(-1.0, 1.0, {1.0}).poly_pieces().size() == 2);
  CHECK(levy_close(LevyMeasure::dirac(1.0), LevyMeasure::dirac(1.0 + 1e-14)));
  CHECK_FALSE(levy_close(LevyMeasure::dirac(1.0), LevyMeasure::dirac(1.1)));
  CHECK_FALSE(levy_close(LevyMeasure::dirac(1.0), LevyMeasure::dirac(1.0, 1.01)));
}

TEST_CASE("triplet addition") {
  auto s = triplet_add(make_triplet(0, 1), make_triplet(0, 1));
  CHECK(s == make_triplet(0, 2));
  CHECK(triplet_add(make_triplet(0, 1), make_triplet(1, 0, kDelta1)) == make_triplet(1, 1, kDelta1));
  CHECK(triplet_add(make_triplet(0.25, 0), make_triplet(1.5, 0)) == make_triplet(1.75, 0));
  CHECK_THROWS_AS(triplet_add(make_triplet(0, 1), make_triplet(0, 1, {}, Flavor::kClassical)), Error);
  try {
    triplet_add(make_triplet(0, 1), make_triplet(0, 1, {}, Flavor::kClassical));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kFlavorMismatch);
  }
}

TEST_CASE("triplet scaling") {
  std::mt19937_64 g(7);
  auto u = testgen::random_triplet(g);
  CHECK(triplet_scale(1.0, u) == u);
  CHECK(triplet_scale(0.0, u) == make_triplet(0, 0));
  CHECK(triplets_close(triplet_scale(2.0, make_triplet(1, 0, kDelta1)),
                       make_triplet(1, 0, LevyMeasure::dirac(2.0))));
  // C_{D_c mu}(z) = C_mu(c z)
  for (int trial = 0; trial < 10; ++trial) {
    auto v = testgen::random_triplet(g);
    for (double c : {-1.7, -0.4, 0.3, 2.5}) {
      auto w = triplet_scale(c, v);
      for (Complex z : {Complex(0.3, -0.5), Complex(-0.2, -0.1), Complex(0.0, -1.0)}) {
        Complex lhs = eval_free_ct(w, z);
        Complex rhs = eval_free_ct_unchecked(v, c * z);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
      }
    }
  }
}

TEST_CASE("Bercovici-Pata map keeps the components") {
  auto g = bp_lambda(make_triplet(0, 1, {}, Flavor::kClassical));
  CHECK(g == make_triplet(0, 1));
  auto p = bp_lambda(make_triplet(1, 0, kDelta1, Flavor::kClassical));
  CHECK(p == make_triplet(1, 0, kDelta1));
  auto d = bp_lambda(make_triplet(2.5, 0, {}, Flavor::kClassical));
  CHECK(d == make_triplet(2.5, 0));
  CHECK(bp_lambda_inv(p) == make_triplet(1, 0, kDelta1, Flavor::kClassical));
  CHECK_THROWS_AS(bp_lambda(p), Error);
}

TEST_CASE("cumulants from triplets") {
  CHECK(free_cumulants_from_triplet(make_triplet(0, 1), 4).values == std::vector<double>{0, 1, 0, 0});
  auto k = free_cumulants_from_triplet(make_triplet(1, 0, kDelta1), 5).values;
  for (double v : k) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(free_cumulants_from_triplet(make_triplet(0.75, 0), 3).values == std::vector<double>{0.75, 0, 0});
  // atom beyond the truncation: kappa_1 = a + (t - 1)
  auto far = free_cumulants_from_triplet(make_triplet(0.5, 0, LevyMeasure::dirac(3.0, 2.0)), 2).values;
  CHECK(far[0] == doctest::Approx(0.5 + 2.0 * 2.0));
  CHECK(far[1] == doctest::Approx(18.0));
  CHECK_THROWS_AS(classical_cumulants_from_triplet(make_triplet(0, 1), 2), Error);
}

TEST_CASE("triplet mass") {
  CHECK(triplet_mass(make_triplet(-0.5, 2, kDelta1)) == doctest::Approx(3.5));
  CHECK(triplet_mass(make_triplet(0, 0, LevyMeasure::dirac(0.5, 2.0))) == doctest::Approx(0.5));
}
