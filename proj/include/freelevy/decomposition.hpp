#pragma once

#include <optional>
#include <string>
#include <vector>

#include "freelevy/levy_basis.hpp"

namespace freelevy {

// Law of an atomic component T_n: a free triplet, or just its moments.
struct AtomLaw {
  std::optional<FreeTriplet> triplet;
  std::optional<MomentVector> moments;
  bool positive = false;  // caller asserts support in [0, inf)
};

struct FcrmAtom {
  double x;
  AtomLaw law;
};

// Free completely random measure: a diffuse free Levy basis plus fixed atoms.
struct FCRMModel {
  SeedField diffuse;  // must not carry kappa atoms
  std::vector<FcrmAtom> atoms;
};

// Validates distinct atom locations and a diffuse part without kappa atoms.
FCRMModel make_model(SeedField diffuse, std::vector<FcrmAtom> atoms);

// kappa_1(M(E)) and kappa_2(M(E)), summed over atoms in E and the diffuse part.
double first_cumulant_measure(const FCRMModel& model, const SetExpr& E);
double second_cumulant_measure(const FCRMModel& model, const SetExpr& E);

enum class KingmanMode { kPositive, kSigned };

struct AtomicTerm {
  double x;
  AtomLaw law;
  double mu_mass;  // mu({x}) > 0; the coefficient of T_n in M(E) is 1{x in E}
};

struct NullArrayLevel {
  int n;
  double bound;       // max_j tail bound over the n equal-mu pieces
  double triplet_gap; // additivity gap of the pieces (convergence diagnostic)
};

struct NullArrayReport {
  double eps = 1.0;
  double mu_total = 0.0;
  std::vector<NullArrayLevel> levels;
  bool decays = false;  // successive bound ratios within factor 1.5 of 2
};

struct KingmanResult {
  std::vector<AtomicTerm> atomic;
  std::vector<double> dropped;  // atoms of mu-mass 0; their law must be delta_0
  SeedField diffuse;
  NullArrayReport null_array;

  // Coefficient of the n-th atomic term on E.
  double coefficient(std::size_t n, const SetExpr& E) const;
};

struct KingmanOptions {
  double eps = 1.0;
  std::vector<int> splits{2, 4, 8};
};

KingmanResult kingman_decompose(const FCRMModel& model, KingmanMode mode,
                                const KingmanOptions& opts = {});

// Sufficient check that a free triplet has support in [0, inf): b = 0,
// r on (0, inf), int min(1, t) dr < inf, a >= int sigma dr.
bool positive_by_triplet(const FreeTriplet& u);

struct LevyItoParts {
  SignedSetMeasure drift;
  SeedField gaussian;  // seeds (0, sigma2, 0)
  SeedField jumps;     // seeds (0, 0, rho)
  // Theta(E) - int sigma dF_E, when every seed has int |sigma| drho < inf.
  std::optional<SignedSetMeasure> compensated_drift;
};

LevyItoParts levy_ito_split(const SeedField& field);

// (drift(E), Sigma(E), F_E) reassembled from the parts.
FreeTriplet levy_ito_triplet(const LevyItoParts& parts, const SetExpr& E);

// Jump field with rho restricted to |t| > eps in every seed.
SeedField truncate_small_jumps(const SeedField& field, double eps);

}  // namespace freelevy
