#pragma once

#include <vector>

#include "freelevy/levy_measure.hpp"

namespace freelevy {

// Which Levy-Khintchine formula interprets a triplet.
enum class Flavor { kFree, kClassical };

const char* to_string(Flavor f);

// (a, b, r): drift, second-order part b >= 0, Levy measure r.
struct FreeTriplet {
  double a = 0.0;
  double b = 0.0;
  LevyMeasure r;
  Flavor flavor = Flavor::kFree;

  bool operator==(const FreeTriplet&) const = default;
};

// Validating constructor (finite a, finite b >= 0).
FreeTriplet make_triplet(double a, double b, LevyMeasure r = {},
                         Flavor flavor = Flavor::kFree);

struct CumulantVector {
  std::vector<double> values;  // kappa_1 .. kappa_p
  int order() const { return static_cast<int>(values.size()); }
  bool operator==(const CumulantVector&) const = default;
};

struct MomentVector {
  std::vector<double> values;  // m_1 .. m_p
  int order() const { return static_cast<int>(values.size()); }
  bool operator==(const MomentVector&) const = default;
};

// -1 below -1, t on [-1, 1], +1 above 1.
double sigma_centering(double t);

FreeTriplet triplet_add(const FreeTriplet& u, const FreeTriplet& v);
FreeTriplet triplet_scale(double c, const FreeTriplet& u);

// Bercovici-Pata map: same components, flavor classical -> free (and back).
FreeTriplet bp_lambda(const FreeTriplet& u);
FreeTriplet bp_lambda_inv(const FreeTriplet& u);

// kappa_1 = a + int (t - sigma) dr, kappa_2 = b + int t^2 dr,
// kappa_n = int t^n dr. The same formulas give classical cumulants from a
// classical triplet; the flavor is checked.
CumulantVector free_cumulants_from_triplet(const FreeTriplet& u, int p);
CumulantVector classical_cumulants_from_triplet(const FreeTriplet& u, int p);

// c_nu = |a| + b + int min(1, t^2) dr.
double triplet_mass(const FreeTriplet& u);

// a and b agree to `scalar_tol` relative, r via levy_close(levy_tol).
bool triplets_close(const FreeTriplet& u, const FreeTriplet& v, double scalar_tol = 1e-10,
                    double levy_tol = 1e-7);

}  // namespace freelevy
