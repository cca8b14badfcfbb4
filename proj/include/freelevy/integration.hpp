#pragma once

#include <vector>

#include "freelevy/levy_basis.hpp"

namespace freelevy {

struct IntegrandPiece {
  double lo;
  double hi;
  std::vector<double> coeffs;  // f(x) = sum_k coeffs[k] x^k on [lo, hi)
  bool operator==(const IntegrandPiece&) const = default;
};

// Piecewise-polynomial deterministic function, zero outside its pieces.
class Integrand {
 public:
  Integrand() = default;
  explicit Integrand(std::vector<IntegrandPiece> pieces);

  static Integrand step(const std::vector<std::pair<SetExpr, double>>& terms);
  static Integrand indicator(const SetExpr& E, double value = 1.0);

  const std::vector<IntegrandPiece>& pieces() const { return pieces_; }
  double operator()(double x) const;
  bool is_step() const;  // every piece has degree 0
  Integrand scaled(double c) const;
  Integrand restricted(const SetExpr& E) const;  // f * 1_E

  bool operator==(const Integrand&) const = default;

 private:
  std::vector<IntegrandPiece> pieces_;
};

// Step function taking the midpoint value of f on `per_piece` equal
// subintervals of every piece.
Integrand step_approximation(const Integrand& f, int per_piece);

struct IntegrabilityReport {
  double drift = 0.0;     // int |f theta + int (sigma(ft) - f sigma(t)) rho| dkappa
  double gaussian = 0.0;  // int f^2 sigma2 dkappa
  double jumps = 0.0;     // int int min(1, f^2 t^2) rho dkappa
  bool integrable = false;
};

IntegrabilityReport integrability_check(const SeedField& field, const Integrand& f);

struct IntegralOptions {
  // Gauss-Legendre nodes per panel for non-constant f; the Levy part is then a
  // finite mixture of scaled seeds and the drift term uses the same nodes.
  // Panels are bisected until x -> C_seed(f(x) z) is resolved for |z| <= 10.
  int nodes = 16;
};

struct IntegralResult {
  FreeTriplet triplet;
  bool exact = true;                // f constant on every piece it meets
  double approximation_error = 0.0; // gap to the 2x-node rule when inexact
};

IntegralResult integral_triplet_detailed(const SeedField& field, const Integrand& f,
                                         const IntegralOptions& opts = {});

// Triplet of int f dM. NotIntegrable if the integrability check fails.
FreeTriplet integral_triplet(const SeedField& field, const Integrand& f,
                             const IntegralOptions& opts = {});

// Max over z of |C_{int f dM}(z) - int R(x, f(x) z) kappa(dx)| / max(|.|),
// the right side by direct adaptive quadrature over kappa.
double integral_ct_check(const SeedField& field, const Integrand& f,
                         const std::vector<Complex>& z_grid, const IntegralOptions& opts = {});

// f . M as a new field: seeds of f(x) M(dx), f piecewise constant.
// NotRepresentable for non-step f.
SeedField density_field(const SeedField& field, const Integrand& f);

struct DensityFieldResult {
  SeedField field;
  double approximation_error = 0.0;
};

// Non-step f through step_approximation(f, refinement); the error is the
// cumulant-transform gap between refinement and 2 * refinement.
DensityFieldResult density_field_refined(const SeedField& field, const Integrand& f,
                                         int refinement);

}  // namespace freelevy
