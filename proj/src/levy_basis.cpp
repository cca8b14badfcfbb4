#include "freelevy/levy_basis.hpp"

#include <algorithm>
#include <cmath>

#include "freelevy/error.hpp"

namespace freelevy {
namespace {

void check_seed(double theta, double sigma2) {
  if (!std::isfinite(theta)) fail(ErrorCode::kInvalidArgument, "seed theta must be finite");
  if (!std::isfinite(sigma2) || sigma2 < 0.0)
    fail(ErrorCode::kInvalidArgument, "seed sigma2 must be finite and >= 0");
}

double seed_mass(double theta, double sigma2, const LevyMeasure& rho) {
  return std::abs(theta) + sigma2 +
         (rho.empty() ? 0.0 : levy_quadrature(rho, integrands::min1_sq()));
}

void require_inside(const SeedField& field, const SetExpr& E) {
  if (!set_subset(E, field.carrier))
    fail(ErrorCode::kOutOfCarrier, "set " + format_set_expr(E) + " is not inside the carrier");
}

}  // namespace

SeedField make_field(SetExpr carrier, std::vector<SeedCell> cells, std::vector<KappaAtom> atoms) {
  for (const auto& c : cells) {
    if (!std::isfinite(c.lo) || !std::isfinite(c.hi) || !(c.lo < c.hi))
      fail(ErrorCode::kInvalidArgument, "cell needs finite lo < hi");
    if (!std::isfinite(c.kappa_density) || !(c.kappa_density > 0.0))
      fail(ErrorCode::kInvalidArgument, "cell kappa density must be > 0");
    check_seed(c.theta, c.sigma2);
  }
  std::sort(cells.begin(), cells.end(),
            [](const SeedCell& x, const SeedCell& y) { return x.lo < y.lo; });
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (cells[i].lo < cells[i - 1].hi) fail(ErrorCode::kInvalidArgument, "cells overlap");
  if (carrier.empty()) {
    std::vector<Interval> iv;
    for (const auto& c : cells) iv.push_back({c.lo, c.hi});
    carrier = SetExpr::normalize(std::move(iv));
  }
  for (const auto& c : cells)
    if (!set_subset(SetExpr::interval(c.lo, c.hi), carrier))
      fail(ErrorCode::kOutOfCarrier, "cell outside the carrier");
  for (const auto& a : atoms) {
    if (!std::isfinite(a.x) || !std::isfinite(a.mass) || !(a.mass > 0.0))
      fail(ErrorCode::kInvalidArgument, "kappa atom needs finite location and mass > 0");
    check_seed(a.theta, a.sigma2);
    if (!carrier.contains(a.x)) fail(ErrorCode::kOutOfCarrier, "kappa atom outside the carrier");
  }
  std::sort(atoms.begin(), atoms.end(),
            [](const KappaAtom& x, const KappaAtom& y) { return x.x < y.x; });
  for (std::size_t i = 1; i < atoms.size(); ++i)
    if (atoms[i].x == atoms[i - 1].x)
      fail(ErrorCode::kInvalidArgument, "kappa atoms must have distinct locations");
  return SeedField{std::move(carrier), std::move(cells), std::move(atoms)};
}

FreeTriplet seed_triplet(const SeedCell& c) {
  return FreeTriplet{c.theta, c.sigma2, c.rho, Flavor::kFree};
}

FreeTriplet seed_triplet(const KappaAtom& a) {
  return FreeTriplet{a.theta, a.sigma2, a.rho, Flavor::kFree};
}

FreeTriplet triplet_of_set(const SeedField& field, const SetExpr& E) {
  require_inside(field, E);
  FreeTriplet out;
  std::vector<LevyMeasure> parts;
  for (const auto& c : field.cells) {
    const double len = E.overlap(c.lo, c.hi);
    if (len <= 0.0) continue;
    const double w = len * c.kappa_density;
    out.a += c.theta * w;
    out.b += c.sigma2 * w;
    if (!c.rho.empty()) parts.push_back(c.rho.weighted(w));
  }
  for (const auto& a : field.atoms) {
    if (!E.contains(a.x)) continue;
    out.a += a.theta * a.mass;
    out.b += a.sigma2 * a.mass;
    if (!a.rho.empty()) parts.push_back(a.rho.weighted(a.mass));
  }
  out.r = levy_sum(parts);
  return out;
}

double control_measure(const SeedField& field, const SetExpr& E) {
  require_inside(field, E);
  double k = 0.0;
  for (const auto& c : field.cells) {
    const double len = E.overlap(c.lo, c.hi);
    if (len > 0.0) k += len * c.kappa_density * seed_mass(c.theta, c.sigma2, c.rho);
  }
  for (const auto& a : field.atoms)
    if (E.contains(a.x)) k += a.mass * seed_mass(a.theta, a.sigma2, a.rho);
  return k;
}

double stored_kappa(const SeedField& field, const SetExpr& E) {
  double k = 0.0;
  for (const auto& c : field.cells) k += E.overlap(c.lo, c.hi) * c.kappa_density;
  for (const auto& a : field.atoms)
    if (E.contains(a.x)) k += a.mass;
  return k;
}

SeedField canonicalize_field(const SeedField& field) {
  SeedField out;
  out.carrier = field.carrier;
  for (const auto& c : field.cells) {
    const double s = seed_mass(c.theta, c.sigma2, c.rho);
    if (s == 0.0) continue;
    if (s == 1.0) {
      out.cells.push_back(c);
      continue;
    }
    out.cells.push_back(
        {c.lo, c.hi, c.theta / s, c.sigma2 / s, c.rho.weighted(1.0 / s), c.kappa_density * s});
  }
  for (const auto& a : field.atoms) {
    const double s = seed_mass(a.theta, a.sigma2, a.rho);
    if (s == 0.0) continue;
    if (s == 1.0) {
      out.atoms.push_back(a);
      continue;
    }
    out.atoms.push_back({a.x, a.mass * s, a.theta / s, a.sigma2 / s, a.rho.weighted(1.0 / s)});
  }
  return out;
}

SeedField make_factorizable(const FreeTriplet& nu, const std::vector<EtaPiece>& eta) {
  if (nu.flavor != Flavor::kFree)
    fail(ErrorCode::kFlavorMismatch, "factorizable basis needs a free triplet");
  const double c = triplet_mass(nu);
  if (c == 0.0) fail(ErrorCode::kZeroLaw, "factorizable basis needs nu != delta_0");
  std::vector<Interval> carrier;
  std::vector<SeedCell> cells;
  const LevyMeasure rho = nu.r.weighted(1.0 / c);
  for (const auto& p : eta) {
    if (!(p.density >= 0.0) || !std::isfinite(p.density))
      fail(ErrorCode::kInvalidArgument, "eta density must be finite and >= 0");
    carrier.push_back({p.lo, p.hi});
    if (p.density > 0.0) cells.push_back({p.lo, p.hi, nu.a / c, nu.b / c, rho, c * p.density});
  }
  return make_field(SetExpr::normalize(std::move(carrier)), std::move(cells));
}

PiecewiseLinearMap make_map(std::vector<double> x, std::vector<double> y) {
  if (x.size() < 2 || x.size() != y.size())
    fail(ErrorCode::kInvalidArgument, "map needs at least two knots");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      fail(ErrorCode::kInvalidArgument, "map knots must be finite");
  const bool inc = y[1] > y[0];
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) fail(ErrorCode::kInvalidArgument, "map knots must increase in x");
    if (inc ? !(y[i] > y[i - 1]) : !(y[i] < y[i - 1]))
      fail(ErrorCode::kNotInvertible, "map is not strictly monotone");
  }
  return PiecewiseLinearMap{std::move(x), std::move(y)};
}

double PiecewiseLinearMap::operator()(double t) const {
  if (t < x.front() || t > x.back()) fail(ErrorCode::kNotInvertible, "point outside map domain");
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t k = std::min<std::size_t>(it - x.begin(), x.size() - 1);
  if (k == 0) k = 1;
  if (t == x[k]) return y[k];
  if (t == x[k - 1]) return y[k - 1];
  return y[k - 1] + (y[k] - y[k - 1]) * (t - x[k - 1]) / (x[k] - x[k - 1]);
}

double PiecewiseLinearMap::inverse(double s) const {
  const bool inc = increasing();
  const double lo = inc ? y.front() : y.back(), hi = inc ? y.back() : y.front();
  if (s < lo || s > hi) fail(ErrorCode::kNotInvertible, "point outside map range");
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double a = std::min(y[k - 1], y[k]), b = std::max(y[k - 1], y[k]);
    if (s >= a && s <= b) {
      if (s == y[k - 1]) return x[k - 1];
      if (s == y[k]) return x[k];
      return x[k - 1] + (x[k] - x[k - 1]) * (s - y[k - 1]) / (y[k] - y[k - 1]);
    }
  }
  fail(ErrorCode::kNotInvertible, "point outside map range");
}

SetExpr set_preimage(const PiecewiseLinearMap& phi, const SetExpr& H) {
  const double lo = std::min(phi.y.front(), phi.y.back());
  const double hi = std::max(phi.y.front(), phi.y.back());
  std::vector<Interval> out;
  for (const auto& iv : H.intervals()) {
    const double c = std::max(iv.lo, lo), d = std::min(iv.hi, hi);
    if (!(c < d)) continue;
    const double a = phi.inverse(c), b = phi.inverse(d);
    out.push_back({std::min(a, b), std::max(a, b)});
  }
  return SetExpr::normalize(std::move(out));
}

SeedField pushforward_field(const SeedField& field, const PiecewiseLinearMap& phi) {
  for (const auto& iv : field.carrier.intervals())
    if (iv.lo < phi.x.front() || iv.hi > phi.x.back())
      fail(ErrorCode::kNotInvertible, "map does not cover the carrier");
  auto split = [&](double lo, double hi) {
    std::vector<double> pts{lo};
    for (double k : phi.x)
      if (k > lo && k < hi) pts.push_back(k);
    pts.push_back(hi);
    return pts;
  };
  auto image = [&](double p, double q) {
    const double a = phi(p), b = phi(q);
    return Interval{std::min(a, b), std::max(a, b)};
  };
  std::vector<Interval> carrier;
  for (const auto& iv : field.carrier.intervals()) {
    const auto pts = split(iv.lo, iv.hi);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) carrier.push_back(image(pts[i], pts[i + 1]));
  }
  std::vector<SeedCell> cells;
  for (const auto& c : field.cells) {
    const auto pts = split(c.lo, c.hi);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const Interval im = image(pts[i], pts[i + 1]);
      const double slope = (im.hi - im.lo) / (pts[i + 1] - pts[i]);
      SeedCell n = c;
      n.lo = im.lo;
      n.hi = im.hi;
      n.kappa_density = c.kappa_density / slope;
      cells.push_back(std::move(n));
    }
  }
  std::vector<KappaAtom> atoms;
  for (const auto& a : field.atoms) {
    KappaAtom n = a;
    n.x = phi(a.x);
    atoms.push_back(std::move(n));
  }
  return make_field(SetExpr::normalize(std::move(carrier)), std::move(cells), std::move(atoms));
}

SeedField concentrate_field(const SeedField& field, const SetExpr& A) {
  SeedField out;
  out.carrier = field.carrier;
  for (const auto& c : field.cells) {
    for (const auto& iv : A.intervals()) {
      const double lo = std::max(c.lo, iv.lo), hi = std::min(c.hi, iv.hi);
      if (!(lo < hi)) continue;
      SeedCell n = c;
      n.lo = lo;
      n.hi = hi;
      out.cells.push_back(std::move(n));
    }
  }
  for (const auto& a : field.atoms)
    if (A.contains(a.x)) out.atoms.push_back(a);
  return out;
}

double SignedSetMeasure::operator()(const SetExpr& E) const {
  double m = 0.0;
  for (const auto& p : pieces) m += p.density * E.overlap(p.lo, p.hi);
  for (const auto& a : atoms)
    if (E.contains(a.x)) m += a.mass;
  return m;
}

SignedSetMeasure SignedSetMeasure::positive_part() const {
  SignedSetMeasure out;
  for (const auto& p : pieces)
    if (p.density > 0.0) out.pieces.push_back(p);
  for (const auto& a : atoms)
    if (a.mass > 0.0) out.atoms.push_back(a);
  return out;
}

SignedSetMeasure SignedSetMeasure::negative_part() const {
  SignedSetMeasure out;
  for (const auto& p : pieces)
    if (p.density < 0.0) out.pieces.push_back({p.lo, p.hi, -p.density});
  for (const auto& a : atoms)
    if (a.mass < 0.0) out.atoms.push_back({a.x, -a.mass});
  return out;
}

double SignedSetMeasure::total_variation(const SetExpr& E) const {
  return positive_part()(E) + negative_part()(E);
}

SignedSetMeasure drift_measure(const SeedField& field) {
  SignedSetMeasure m;
  for (const auto& c : field.cells)
    if (c.theta != 0.0) m.pieces.push_back({c.lo, c.hi, c.theta * c.kappa_density});
  for (const auto& a : field.atoms)
    if (a.theta != 0.0) m.atoms.push_back({a.x, a.theta * a.mass});
  return m;
}

}  // namespace freelevy
