#include "freelevy/decomposition.hpp"

#include <algorithm>
#include <cmath>

#include "freelevy/error.hpp"
#include "freelevy/transforms.hpp"

namespace freelevy {
namespace {

struct FirstTwo {
  double k1;
  double k2;
};

FirstTwo law_cumulants(const AtomLaw& law, int needed) {
  if (law.triplet) {
    const auto k = free_cumulants_from_triplet(*law.triplet, 2);
    return {k.values[0], k.values[1]};
  }
  if (!law.moments || law.moments->order() < needed)
    fail(ErrorCode::kMissingMoments, "atom law lacks the required moments");
  const auto& m = law.moments->values;
  const double k1 = m[0];
  if (needed < 2) return {k1, 0.0};
  double k2 = m[1] - m[0] * m[0];
  if (k2 < -1e-12 * std::max(1.0, std::abs(m[1])))
    fail(ErrorCode::kInvalidArgument, "atom moments give a negative variance");
  return {k1, std::max(0.0, k2)};
}

FirstTwo diffuse_cumulants(const SeedField& diffuse, const SetExpr& E) {
  const SetExpr inside = set_intersect(E, diffuse.carrier);
  if (inside.empty()) return {0.0, 0.0};
  const auto k = free_cumulants_from_triplet(triplet_of_set(diffuse, inside), 2);
  return {k.values[0], k.values[1]};
}

bool law_is_positive(const FreeTriplet& u) {
  if (positive_by_triplet(u)) return true;
  // Fall back to the recovered density: no mass below the origin.
  const auto k = free_cumulants_from_triplet(u, 2);
  const double reach = std::abs(k.values[0]) + 10.0 * std::sqrt(std::max(0.0, k.values[1])) +
                       2.0 * u.r.support_radius() + 1.0;
  const auto d = density_from_triplet(u, linear_grid(-reach, -1e-6, 401));
  return d.cdf.back() <= 1e-4;
}

// Mu density per unit length on a cell.
double mu_density(const SeedCell& c, KingmanMode mode) {
  const auto k = free_cumulants_from_triplet(seed_triplet(c), 2);
  const double d = mode == KingmanMode::kPositive ? k.values[0]
                                                  : std::abs(k.values[0]) + k.values[1];
  return d * c.kappa_density;
}

}  // namespace

FCRMModel make_model(SeedField diffuse, std::vector<FcrmAtom> atoms) {
  if (!diffuse.atoms.empty())
    fail(ErrorCode::kInvalidArgument, "diffuse part must not carry kappa atoms");
  std::sort(atoms.begin(), atoms.end(),
            [](const FcrmAtom& a, const FcrmAtom& b) { return a.x < b.x; });
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!std::isfinite(atoms[i].x)) fail(ErrorCode::kInvalidArgument, "atom location not finite");
    if (!atoms[i].law.triplet && !atoms[i].law.moments)
      fail(ErrorCode::kMissingMoments, "atom law has neither triplet nor moments");
    if (atoms[i].law.triplet && atoms[i].law.triplet->flavor != Flavor::kFree)
      fail(ErrorCode::kFlavorMismatch, "atom laws must be free triplets");
    if (i > 0 && atoms[i].x == atoms[i - 1].x)
      fail(ErrorCode::kInvalidArgument, "atom locations must be distinct");
  }
  return FCRMModel{std::move(diffuse), std::move(atoms)};
}

double first_cumulant_measure(const FCRMModel& model, const SetExpr& E) {
  double m = 0.0;
  for (const auto& a : model.atoms)
    if (E.contains(a.x)) m += law_cumulants(a.law, 1).k1;
  return m + diffuse_cumulants(model.diffuse, E).k1;
}

double second_cumulant_measure(const FCRMModel& model, const SetExpr& E) {
  double m = 0.0;
  for (const auto& a : model.atoms)
    if (E.contains(a.x)) m += law_cumulants(a.law, 2).k2;
  return m + diffuse_cumulants(model.diffuse, E).k2;
}

bool positive_by_triplet(const FreeTriplet& u) {
  if (u.b != 0.0) return false;
  for (const auto& a : u.r.atoms())
    if (a.location < 0.0) return false;
  for (const auto& p : u.r.power_pieces())
    if (p.side < 0 || (p.inner == 0.0 && p.alpha >= 1.0)) return false;
  for (const auto& p : u.r.poly_pieces())
    if (p.lo < 0.0) return false;
  const double comp = u.r.empty() ? 0.0 : levy_quadrature(u.r, integrands::sigma());
  return u.a - comp >= -1e-12 * std::max(1.0, std::abs(u.a));
}

double KingmanResult::coefficient(std::size_t n, const SetExpr& E) const {
  return E.contains(atomic.at(n).x) ? 1.0 : 0.0;
}

KingmanResult kingman_decompose(const FCRMModel& model, KingmanMode mode,
                                const KingmanOptions& opts) {
  if (!(opts.eps > 0.0)) fail(ErrorCode::kInvalidArgument, "null-array eps must be > 0");
  KingmanResult out;
  out.diffuse = model.diffuse;
  const bool positive = mode == KingmanMode::kPositive;

  if (positive) {
    for (const auto& c : model.diffuse.cells)
      if (!law_is_positive(seed_triplet(c)))
        fail(ErrorCode::kNegativeLawInPositiveMode, "diffuse seed is not supported on [0, inf)");
  }
  for (const auto& a : model.atoms) {
    const FirstTwo k = law_cumulants(a.law, positive ? 1 : 2);
    double mu = 0.0;
    if (positive) {
      if (!a.law.positive || (a.law.triplet && !law_is_positive(*a.law.triplet)) || k.k1 < 0.0)
        fail(ErrorCode::kNegativeLawInPositiveMode,
             "atom law at " + std::to_string(a.x) + " is not supported on [0, inf)");
      mu = k.k1;
    } else {
      mu = std::abs(k.k1) + k.k2;
    }
    if (mu == 0.0)
      out.dropped.push_back(a.x);
    else
      out.atomic.push_back({a.x, a.law, mu});
  }

  // Null-array check: split the diffuse carrier into n pieces of equal
  // mu-mass and bound the tail of each piece.
  auto& rep = out.null_array;
  rep.eps = opts.eps;
  std::vector<double> dens;
  for (const auto& c : model.diffuse.cells) dens.push_back(mu_density(c, mode));
  for (std::size_t i = 0; i < dens.size(); ++i) {
    if (dens[i] < 0.0) dens[i] = 0.0;
    rep.mu_total += dens[i] * (model.diffuse.cells[i].hi - model.diffuse.cells[i].lo);
  }
  const auto& carrier = model.diffuse.carrier;
  const double left = carrier.empty() ? 0.0 : carrier.intervals().front().lo;
  const double right = carrier.empty() ? 0.0 : carrier.intervals().back().hi;
  const FreeTriplet whole =
      carrier.empty() ? FreeTriplet{} : triplet_of_set(model.diffuse, carrier);
  for (int n : opts.splits) {
    if (n < 1) fail(ErrorCode::kInvalidArgument, "split count must be >= 1");
    NullArrayLevel lvl{n, 0.0, 0.0};
    if (rep.mu_total > 0.0) {
      std::vector<double> cuts{left};
      double cum = 0.0;
      std::size_t ci = 0;
      for (int j = 1; j < n; ++j) {
        const double target = rep.mu_total * j / n;
        while (ci < dens.size()) {
          const auto& c = model.diffuse.cells[ci];
          const double mass = dens[ci] * (c.hi - c.lo);
          if (cum + mass >= target && dens[ci] > 0.0) {
            cuts.push_back(std::min(c.hi, c.lo + (target - cum) / dens[ci]));
            break;
          }
          cum += mass;
          ++ci;
        }
      }
      cuts.push_back(right);
      FreeTriplet sum;
      for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        const SetExpr piece = set_intersect(carrier, SetExpr::interval(cuts[j], cuts[j + 1]));
        double mu = 0.0;
        for (std::size_t i = 0; i < dens.size(); ++i) {
          const auto& c = model.diffuse.cells[i];
          mu += dens[i] * piece.overlap(c.lo, c.hi);
        }
        const double bound = positive ? mu / opts.eps : mu / (opts.eps * opts.eps);
        lvl.bound = std::max(lvl.bound, bound);
        sum = triplet_add(sum, triplet_of_set(model.diffuse, piece));
      }
      const auto diag = convergence_diagnostic({sum}, whole);
      lvl.triplet_gap = std::max({diag.drift_gap[0], diag.bump_gap[0], diag.ct_gap[0],
                                  std::abs(sum.b - whole.b)});
    }
    rep.levels.push_back(lvl);
  }
  rep.decays = true;
  for (std::size_t k = 1; k < rep.levels.size(); ++k) {
    const auto& a = rep.levels[k - 1];
    const auto& b = rep.levels[k];
    if (a.bound == 0.0 && b.bound == 0.0) continue;
    if (b.bound == 0.0) {
      rep.decays = false;
      continue;
    }
    const double ratio = (a.bound / b.bound) / (static_cast<double>(b.n) / a.n);
    if (ratio < 1.0 / 1.5 || ratio > 1.5) rep.decays = false;
  }
  return out;
}

LevyItoParts levy_ito_split(const SeedField& field) {
  LevyItoParts parts;
  parts.drift = drift_measure(field);
  std::vector<SeedCell> gc, jc;
  std::vector<KappaAtom> ga, ja;
  for (const auto& c : field.cells) {
    if (c.sigma2 > 0.0) gc.push_back({c.lo, c.hi, 0.0, c.sigma2, {}, c.kappa_density});
    if (!c.rho.empty()) jc.push_back({c.lo, c.hi, 0.0, 0.0, c.rho, c.kappa_density});
  }
  for (const auto& a : field.atoms) {
    if (a.sigma2 > 0.0) ga.push_back({a.x, a.mass, 0.0, a.sigma2, {}});
    if (!a.rho.empty()) ja.push_back({a.x, a.mass, 0.0, 0.0, a.rho});
  }
  parts.gaussian = make_field(field.carrier, std::move(gc), std::move(ga));
  parts.jumps = make_field(field.carrier, std::move(jc), std::move(ja));

  try {
    SignedSetMeasure comp;
    auto centred = [](double theta, const LevyMeasure& rho) {
      if (rho.empty()) return theta;
      levy_quadrature(rho, integrands::abs_sigma());  // DivergentIntegral if not compensable
      return theta - levy_quadrature(rho, integrands::sigma());
    };
    for (const auto& c : field.cells) {
      const double d = centred(c.theta, c.rho) * c.kappa_density;
      if (d != 0.0) comp.pieces.push_back({c.lo, c.hi, d});
    }
    for (const auto& a : field.atoms) {
      const double m = centred(a.theta, a.rho) * a.mass;
      if (m != 0.0) comp.atoms.push_back({a.x, m});
    }
    parts.compensated_drift = std::move(comp);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kDivergentIntegral) throw;
  }
  return parts;
}

FreeTriplet levy_ito_triplet(const LevyItoParts& parts, const SetExpr& E) {
  const FreeTriplet g = triplet_of_set(parts.gaussian, E);
  const FreeTriplet j = triplet_of_set(parts.jumps, E);
  return FreeTriplet{parts.drift(E) + g.a + j.a, g.b + j.b, g.r + j.r, Flavor::kFree};
}

SeedField truncate_small_jumps(const SeedField& field, double eps) {
  if (!(eps > 0.0)) fail(ErrorCode::kInvalidArgument, "truncation level must be > 0");
  std::vector<SeedCell> cells;
  std::vector<KappaAtom> atoms;
  for (const auto& c : field.cells) {
    LevyMeasure r = c.rho.restricted_outside(eps);
    if (!r.empty()) cells.push_back({c.lo, c.hi, 0.0, 0.0, std::move(r), c.kappa_density});
  }
  for (const auto& a : field.atoms) {
    LevyMeasure r = a.rho.restricted_outside(eps);
    if (!r.empty()) atoms.push_back({a.x, a.mass, 0.0, 0.0, std::move(r)});
  }
  return make_field(field.carrier, std::move(cells), std::move(atoms));
}

}  // namespace freelevy
