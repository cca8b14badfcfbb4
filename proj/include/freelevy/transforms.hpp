#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "freelevy/triplet.hpp"

namespace freelevy {

// C(z) = a z + b z^2 + int (1/(1-tz) - 1 - z sigma(t)) r(dt), Im z < 0.
Complex eval_free_ct(const FreeTriplet& u, Complex z);

// R(w) = a + b w + int (t^2 w/(1-tw) + (t - sigma(t))) r(dt), Im w < 0.
Complex eval_r_transform(const FreeTriplet& u, Complex w);

// Same formulas without the half-plane check. Valid wherever 1 - t w stays
// away from 0 on the support of r; used for small |w| and real-axis work.
Complex eval_free_ct_unchecked(const FreeTriplet& u, Complex z);
Complex eval_r_transform_unchecked(const FreeTriplet& u, Complex w);
Complex eval_r_derivative(const FreeTriplet& u, Complex w);

// Classical characteristic function exp(iay - b y^2/2 + int (e^{ity}-1-iy sigma) dr).
Complex eval_classical_cf(const FreeTriplet& u, double y);

struct CauchyOptions {
  double damping = 0.5;
  int max_iterations = 10000;
  int newton_after = 200;
  // Stop when |G - 1/(z - R(G))| <= tolerance * max(1, |G|).
  double tolerance = 1e-12;
};

// G(z) for Im z > 0 from the fixed point G = 1/(z - R(G)), Im G < 0.
Complex cauchy_from_triplet(const FreeTriplet& u, Complex z, const CauchyOptions& opts = {});
Complex cauchy_from_triplet(const FreeTriplet& u, Complex z, Complex warm_start,
                            const CauchyOptions& opts);

struct AtomEstimate {
  double location;
  double mass;
};

struct SpectralDensity {
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<double> cdf;
  std::vector<AtomEstimate> atoms;
  bool has_support = false;
  double support_lo = 0.0;
  double support_hi = 0.0;
  std::vector<std::size_t> failed_points;  // NoConvergence at these indices

  // Trapezoid mass of the density plus atom masses.
  double total_mass() const;
};

struct DensityOptions {
  std::vector<double> eps_ladder{1e-3, 1e-4, 1e-5};
  double atom_threshold = 1e-3;
  double support_threshold = 1e-6;
  CauchyOptions cauchy;
};

SpectralDensity density_from_triplet(const FreeTriplet& u, const std::vector<double>& grid,
                                     const DensityOptions& opts = {});

// Throws InvalidArgument if total_mass() is outside [1 - tol, 1 + tol].
void check_mass(const SpectralDensity& d, double tol);

// Evenly spaced grid of n >= 2 points on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, int n);

struct ConvergenceOptions {
  std::vector<double> eps_grid{1e-3, 1e-2, 1e-1};
  std::vector<double> y_grid;  // empty: 40 points log-spaced in [-5, -0.05]
  double drift_tol = 1e-3;
  double bump_tol = 1e-3;
  double bracket_tol = 1e-3;
  double ct_tol = 1e-3;
};

struct ConvergenceReport {
  std::vector<double> drift_gap;          // |a_n - a|
  std::vector<double> bump_gap;           // max over bumps |int f dr_n - int f dr|
  std::vector<std::vector<double>> bracket;  // [n][eps]: |b_n - b + int_{[-e,e]} t^2 dr_n|
  std::vector<double> ct_gap;             // max_y |C_n(iy) - C(iy)|
  std::vector<double> eps_grid;
  bool drift_pass = false;
  bool bump_pass = false;
  bool bracket_pass = false;
  bool ct_pass = false;
  std::string note;

  bool pass() const { return drift_pass && bump_pass && bracket_pass && ct_pass; }
};

// Finite-sequence diagnostic for weak convergence of free ID laws. Pass flags
// look at the last element only.
ConvergenceReport convergence_diagnostic(const std::vector<FreeTriplet>& seq,
                                         const FreeTriplet& target,
                                         const ConvergenceOptions& opts = {});

}  // namespace freelevy
