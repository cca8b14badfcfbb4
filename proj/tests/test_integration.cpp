#include <cmath>
#include <random>

#include "doctest.h"
#include "freelevy/error.hpp"
#include "freelevy/integration.hpp"
#include "freelevy/transforms.hpp"
#include "random_models.hpp"

using namespace freelevy;

namespace {
SetExpr iv(double lo, double hi) { return SetExpr::interval(lo, hi); }
SeedField semicircular(double L = 4.0) { return make_factorizable(make_triplet(0, 1), {{0, L, 1.0}}); }
SeedField free_poisson_field(double L = 4.0) {
  return make_factorizable(make_triplet(1, 0, LevyMeasure::dirac(1.0)), {{0, L, 1.0}});
}

// Random step function on [0, L) with a few values, some negative.
Integrand random_step(std::mt19937_64& g, double L, std::vector<std::pair<SetExpr, double>>* terms) {
  int n = 1 + static_cast<int>(testgen::uni(g, 0, 3.999));
  std::vector<double> cuts{0.0};
  for (int i = 0; i < n; ++i) cuts.push_back(testgen::uni(g, 0, L));
  cuts.push_back(L);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i] < cuts[i + 1])) continue;
    double v = testgen::uni(g, -2.0, 2.0);
    if (testgen::uni(g, 0, 1) < 0.2) v = 0.0;
    terms->push_back({iv(cuts[i], cuts[i + 1]), v});
  }
  return Integrand::step(*terms);
}
}  // namespace

TEST_CASE("integrand construction") {
  Integrand f({{0, 1, {1.0, 2.0}}, {2, 3, {0.5}}});
  CHECK(f(0.5) == 2.0);
  CHECK(f(1.5) == 0.0);
  CHECK(f(2.0) == 0.5);
  CHECK_FALSE(f.is_step());
  CHECK(Integrand::indicator(iv(0, 1), 3.0).is_step());
  CHECK_THROWS_AS(Integrand({{0, 2, {1.0}}, {1, 3, {1.0}}}), Error);
  auto s = step_approximation(Integrand({{0, 1, {0.0, 1.0}}}), 4);
  CHECK(s.is_step());
  CHECK(s(0.1) == 0.125);
  CHECK(s(0.9) == 0.875);
  CHECK(f.restricted(iv(0, 0.5))(0.75) == 0.0);
  CHECK(f.scaled(2.0)(2.5) == 1.0);
}

TEST_CASE("integrability") {
  std::mt19937_64 g(41);
  for (int trial = 0; trial < 5; ++trial) {
    auto field = testgen::random_field(g);
    std::vector<std::pair<SetExpr, double>> terms;
    auto f = random_step(g, testgen::field_end(field), &terms);
    CHECK(integrability_check(field, f).integrable);
  }
  auto drift = make_field({}, {{0, 2, 0.5, 0, {}, 1.5}});
  Integrand f({{0, 1, {1.0}}, {1, 2, {-3.0}}});
  auto rep = integrability_check(drift, f);
  CHECK(rep.drift == doctest::Approx(0.5 * 1.5 + 3 * 0.5 * 1.5));
  CHECK(rep.gaussian == 0.0);
  CHECK(rep.jumps == 0.0);
  auto G = semicircular();
  auto ind = integrability_check(G, Integrand::indicator(iv(0, 2)));
  CHECK(ind.gaussian == doctest::Approx(2.0));
}

TEST_CASE("integral of indicators and steps") {
  auto G = semicircular();
  CHECK(integral_triplet(G, Integrand::indicator(iv(0, 1), 2.0)) == make_triplet(0, 4));
  std::mt19937_64 g(42);
  for (int trial = 0; trial < 10; ++trial) {
    auto field = testgen::random_field(g);
    auto E = testgen::random_set(g, testgen::field_end(field));
    CHECK(triplets_close(integral_triplet(field, Integrand::indicator(E)), triplet_of_set(field, E),
                         1e-12, 1e-9));
    std::vector<std::pair<SetExpr, double>> terms;
    auto f = random_step(g, testgen::field_end(field), &terms);
    auto res = integral_triplet_detailed(field, f);
    CHECK(res.exact);
    FreeTriplet oracle = make_triplet(0, 0);
    for (const auto& [A, a] : terms) oracle = triplet_add(oracle, triplet_scale(a, triplet_of_set(field, A)));
    CHECK(triplets_close(res.triplet, oracle, 1e-10, 1e-7));
  }
}

TEST_CASE("cumulant-transform identity for integrals") {
  std::vector<Complex> zs;
  for (int k = 0; k < 12; ++k) zs.push_back(Complex(0.0, -0.1 * std::pow(100.0, k / 11.0)));
  auto G = semicircular();
  CHECK(integral_ct_check(G, Integrand(), zs) == 0.0);
  CHECK(integral_ct_check(G, Integrand::indicator(iv(1, 2)), zs) < 1e-10);
  Integrand poly({{0, 2, {0.5, -1.0, 0.75}}, {2, 4, {1.0, 0.0, 0.0, -0.1}}});
  auto res = integral_triplet_detailed(G, poly);
  CHECK_FALSE(res.exact);
  CHECK(integral_ct_check(G, poly, zs) <= 1e-6);
  auto P = free_poisson_field();
  CHECK(integral_ct_check(P, poly, zs) <= 1e-6);
}

TEST_CASE("Gaussian part of a polynomial integral is exact") {
  auto G = semicircular(1.0);
  Integrand f({{0, 1, {1.0, 2.0}}});
  // int_0^1 (1 + 2x)^2 dx = 13/3
  CHECK(integral_triplet(G, f).b == doctest::Approx(13.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("density fields") {
  std::mt19937_64 g(43);
  auto field = testgen::random_field(g);
  double L = testgen::field_end(field);
  CHECK(density_field(field, Integrand::indicator(iv(0, L))) == field);
  auto A = iv(0.25 * L, 0.6 * L);
  auto dA = density_field(field, Integrand::indicator(A));
  auto cA = concentrate_field(field, A);
  for (int trial = 0; trial < 5; ++trial) {
    auto E = testgen::random_set(g, L);
    CHECK(triplets_close(triplet_of_set(dA, E), triplet_of_set(cA, E), 1e-12, 1e-9));
  }
  auto P = free_poisson_field();
  auto scaled = density_field(P, Integrand::indicator(iv(0, 4), 3.0));
  CHECK(scaled.cells[0].rho == LevyMeasure::dirac(3.0, 0.5));
  for (auto E : {iv(0, 1), iv(1.5, 3.5)})
    CHECK(triplets_close(triplet_of_set(scaled, E),
                         integral_triplet(P, Integrand::indicator(E, 3.0))));
  CHECK_THROWS_AS(density_field(P, Integrand({{0, 1, {0.0, 1.0}}})), Error);
  auto refined = density_field_refined(P, Integrand({{0, 1, {0.0, 1.0}}}), 64);
  CHECK(refined.approximation_error < 1e-3);
}
