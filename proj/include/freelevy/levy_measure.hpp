#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "freelevy/quadrature.hpp"

namespace freelevy {

struct LevyAtom {
  double location;  // nonzero
  double mass;      // > 0
  bool operator==(const LevyAtom&) const = default;
};

// Density coef * |t|^(-1-alpha) on inner < |t| < outer, on the half-line
// selected by `side` (+1 or -1). inner == 0 gives an infinite-activity piece
// at the origin, which requires alpha in [0, 2).
struct PowerPiece {
  double alpha;
  double coef;
  double inner;
  double outer;
  int side;
  bool operator==(const PowerPiece&) const = default;
};

// Polynomial density sum_k coeffs[k] * t^k on [lo, hi). Never straddles 0.
struct PolyPiece {
  double lo;
  double hi;
  std::vector<double> coeffs;
  bool operator==(const PolyPiece&) const = default;
};

// An integrand from the fixed menu used by every Levy-measure integral.
// `reduced(t)` must equal value(t) / t^order_at_zero and stay accurate as
// t -> 0; it is what the near-origin quadrature evaluates.
struct LevyIntegrand {
  std::function<Complex(double)> value;
  std::function<Complex(double)> reduced;
  int order_at_zero = 0;
  std::vector<double> breakpoints;
  std::string name;
};

namespace integrands {
LevyIntegrand min1_sq();                       // min(1, t^2)
LevyIntegrand min1_scaled_sq(double c);        // min(1, c^2 t^2)
LevyIntegrand t_minus_sigma();                 // t - sigma(t)
LevyIntegrand sigma();                         // sigma(t)
LevyIntegrand abs_sigma();                     // |sigma(t)|
LevyIntegrand power(int n);                    // t^n, n >= 1
LevyIntegrand sq_window(double eps);           // t^2 1{|t| <= eps}
LevyIntegrand free_ct_kernel(Complex z);       // 1/(1-tz) - 1 - z sigma(t)
LevyIntegrand r_kernel(Complex w);             // t/(1-tw) - sigma(t)
LevyIntegrand r_kernel_derivative(Complex w);  // t^2/(1-tw)^2
LevyIntegrand classical_cf_kernel(double y);   // e^{ity} - 1 - iy sigma(t)
LevyIntegrand scale_compensator(double c);     // sigma(ct) - c sigma(t)
LevyIntegrand bump(double center, double half_width);
LevyIntegrand ramp(double delta);              // clamp(|t|/delta - 1, 0, 1)
}  // namespace integrands

// Finitely parametrised Levy measure: atoms + power-law pieces + polynomial
// pieces. Always held in normal form (atoms sorted and merged, power pieces
// with identical geometry merged, polynomial pieces split on common
// breakpoints, summed, and adjacent equal pieces merged), so structural
// equality is meaningful.
class LevyMeasure {
 public:
  LevyMeasure() = default;
  LevyMeasure(std::vector<LevyAtom> atoms, std::vector<PowerPiece> power,
              std::vector<PolyPiece> poly);

  static LevyMeasure dirac(double location, double mass = 1.0);
  static LevyMeasure near_zero(double alpha, double c_plus, double c_minus,
                               double eps0);
  static LevyMeasure polynomial(double lo, double hi, std::vector<double> coeffs);

  const std::vector<LevyAtom>& atoms() const { return atoms_; }
  const std::vector<PowerPiece>& power_pieces() const { return power_; }
  const std::vector<PolyPiece>& poly_pieces() const { return poly_; }
  bool empty() const { return atoms_.empty() && power_.empty() && poly_.empty(); }

  LevyMeasure operator+(const LevyMeasure& other) const;
  LevyMeasure& operator+=(const LevyMeasure& other);
  LevyMeasure weighted(double w) const;              // w * r, w >= 0
  LevyMeasure image(double c) const;                 // law of c*t, c != 0
  LevyMeasure restricted_outside(double eps) const;  // r on {|t| > eps}

  double total_mass() const;      // +inf when a power piece reaches 0
  double support_radius() const;  // sup |t| over the support

  bool operator==(const LevyMeasure&) const = default;

 private:
  void normalize();

  std::vector<LevyAtom> atoms_;
  std::vector<PowerPiece> power_;
  std::vector<PolyPiece> poly_;
};

// Sum of many measures, normalized once.
LevyMeasure levy_sum(const std::vector<LevyMeasure>& parts);

// Quadrature contract for every integral against a Levy measure: atoms summed
// exactly, polynomial pieces by adaptive Gauss-Kronrod, power pieces through
// a singularity-removing substitution. Target accuracy 1e-10 + 1e-8|result|.
Complex levy_integrate(const LevyMeasure& r, const LevyIntegrand& g,
                       const QuadratureOptions& opts = {});
double levy_quadrature(const LevyMeasure& r, const LevyIntegrand& g,
                       const QuadratureOptions& opts = {});

// Window-ladder discrepancy: max relative gap over a fixed family of
// integrands (t^2 windows, bumps, ramps, low moments).
double levy_distance(const LevyMeasure& a, const LevyMeasure& b);

// Atoms compared to 1e-12 (relative), the rest through levy_distance.
bool levy_close(const LevyMeasure& a, const LevyMeasure& b, double tol = 1e-7);

}  // namespace freelevy
