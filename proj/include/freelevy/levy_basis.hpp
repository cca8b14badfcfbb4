#pragma once

#include <vector>

#include "freelevy/set_expr.hpp"
#include "freelevy/triplet.hpp"

namespace freelevy {

// Seeds (theta, sigma2, rho) constant on [lo, hi); kappa has Lebesgue
// density kappa_density > 0 there.
struct SeedCell {
  double lo;
  double hi;
  double theta = 0.0;
  double sigma2 = 0.0;
  LevyMeasure rho;
  double kappa_density = 1.0;
  bool operator==(const SeedCell&) const = default;
};

// Point mass of kappa at x with its own seed.
struct KappaAtom {
  double x;
  double mass;
  double theta = 0.0;
  double sigma2 = 0.0;
  LevyMeasure rho;
  bool operator==(const KappaAtom&) const = default;
};

// A free Levy basis given by its characteristic quadruplet
// (theta, sigma2, rho, kappa) over a carrier set. Outside the cells and atoms
// kappa vanishes.
struct SeedField {
  SetExpr carrier;
  std::vector<SeedCell> cells;   // disjoint, sorted, inside the carrier
  std::vector<KappaAtom> atoms;  // distinct, sorted, inside the carrier
  bool operator==(const SeedField&) const = default;
};

// Validates and sorts. An empty carrier defaults to the union of the cells
// (atoms then need to lie inside some cell interval).
SeedField make_field(SetExpr carrier, std::vector<SeedCell> cells,
                     std::vector<KappaAtom> atoms = {});

// Seed triplet of a cell or atom (free flavor).
FreeTriplet seed_triplet(const SeedCell& c);
FreeTriplet seed_triplet(const KappaAtom& a);

// Theta(E), Sigma(E), F_E as a free triplet. OutOfCarrier unless E is inside.
FreeTriplet triplet_of_set(const SeedField& field, const SetExpr& E);

// |Theta|(E) + Sigma(E) + int min(1, t^2) F_E(dt), from the seeds.
double control_measure(const SeedField& field, const SetExpr& E);

// The stored kappa(E).
double stored_kappa(const SeedField& field, const SetExpr& E);

// Rescales every seed to |theta| + sigma2 + int min(1,t^2) rho = 1 and moves
// the factor into kappa. Zero-seed cells and atoms are removed.
SeedField canonicalize_field(const SeedField& field);

// Piece of a Lebesgue density eta on [lo, hi).
struct EtaPiece {
  double lo;
  double hi;
  double density;
};

// Constant seed nu / c_nu with kappa = c_nu * eta. ZeroLaw for nu = delta_0.
SeedField make_factorizable(const FreeTriplet& nu, const std::vector<EtaPiece>& eta);

// Continuous, strictly monotone, piecewise-linear map through the knots
// (x[i], y[i]), x increasing.
struct PiecewiseLinearMap {
  std::vector<double> x;
  std::vector<double> y;

  double operator()(double t) const;
  double inverse(double s) const;
  bool increasing() const { return y.back() > y.front(); }
};

PiecewiseLinearMap make_map(std::vector<double> x, std::vector<double> y);

// phi^{-1}(H) as a set expression. For decreasing maps, endpoints are
// matched up to null sets.
SetExpr set_preimage(const PiecewiseLinearMap& phi, const SetExpr& H);

// M o phi^{-1}: cells mapped through phi, kappa density divided by |phi'|.
// NotInvertible unless phi is defined on the whole carrier.
SeedField pushforward_field(const SeedField& field, const PiecewiseLinearMap& phi);

// M^A(E) = M(A n E). The carrier is kept.
SeedField concentrate_field(const SeedField& field, const SetExpr& A);

// Real measure with per-interval Lebesgue density plus signed point masses.
struct SignedSetMeasure {
  struct Piece {
    double lo;
    double hi;
    double density;
    bool operator==(const Piece&) const = default;
  };
  struct Atom {
    double x;
    double mass;
    bool operator==(const Atom&) const = default;
  };
  std::vector<Piece> pieces;
  std::vector<Atom> atoms;

  double operator()(const SetExpr& E) const;
  SignedSetMeasure positive_part() const;
  SignedSetMeasure negative_part() const;
  double total_variation(const SetExpr& E) const;
  bool operator==(const SignedSetMeasure&) const = default;
};

// Theta as a signed measure: theta * kappa.
SignedSetMeasure drift_measure(const SeedField& field);

}  // namespace freelevy
