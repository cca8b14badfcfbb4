#include "freelevy/integration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "freelevy/error.hpp"
#include "freelevy/transforms.hpp"

namespace freelevy {
namespace {

double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// int (sigma(v t) - v sigma(t)) rho(dt)
double compensator(const LevyMeasure& rho, double v) {
  if (rho.empty() || v == 1.0 || v == 0.0) return 0.0;
  return levy_quadrature(rho, integrands::scale_compensator(v));
}

// Overlap of an integrand piece with a cell, visited with the constant value
// when the piece has degree 0.
struct Overlap {
  double lo;
  double hi;
  const IntegrandPiece* piece;
};

std::vector<Overlap> overlaps(const Integrand& f, double lo, double hi) {
  std::vector<Overlap> out;
  for (const auto& p : f.pieces()) {
    const double a = std::max(lo, p.lo), b = std::min(hi, p.hi);
    if (a < b) out.push_back({a, b, &p});
  }
  return out;
}

struct Accumulator {
  double a = 0.0;
  double b = 0.0;
  std::vector<LevyMeasure> parts;

  // Adds weight * (triplet of the seed scaled by v), the law of v X for one
  // unit of kappa.
  void add_scaled_seed(double theta, double sigma2, const LevyMeasure& rho, double v,
                       double weight) {
    if (v == 0.0 || weight == 0.0) return;
    a += weight * (v * theta + compensator(rho, v));
    b += weight * v * v * sigma2;
    if (!rho.empty()) parts.push_back(rho.image(v).weighted(weight));
  }
};

// Probe points for panel refinement: the cumulant transform of the result
// is accurate for |z| up to about 10.
constexpr std::array<Complex, 7> kProbes{Complex(0, -0.1), Complex(0, -0.3), Complex(0, -1),
                                         Complex(0, -3),   Complex(0, -10),  Complex(1, -0.5),
                                         Complex(-1, -0.5)};
constexpr int kMaxPanelDepth = 10;

using ProbeSums = std::array<Complex, kProbes.size()>;

ProbeSums probe_sums(const FreeTriplet& seed, const std::vector<double>& coeffs, double lo,
                     double hi, int nodes) {
  const auto& rule = gauss_legendre(nodes);
  const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
  ProbeSums s{};
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const double v = horner(coeffs, mid + half * rule.nodes[j]);
    for (std::size_t k = 0; k < kProbes.size(); ++k)
      s[k] += half * rule.weights[j] * eval_free_ct_unchecked(seed, v * kProbes[k]);
  }
  return s;
}

// Bisects [lo, hi) until the n-node rule for x -> C_seed(f(x) z) agrees with
// the rule on the two halves at every probe z.
std::vector<std::pair<double, double>> adaptive_panels(const FreeTriplet& seed,
                                                       const std::vector<double>& coeffs,
                                                       double lo, double hi, int nodes) {
  std::vector<std::pair<double, double>> out;
  auto refine = [&](auto&& self, double a, double b, const ProbeSums& whole, int depth) -> void {
    const double m = 0.5 * (a + b);
    const ProbeSums left = probe_sums(seed, coeffs, a, m, nodes);
    const ProbeSums right = probe_sums(seed, coeffs, m, b, nodes);
    bool ok = true;
    for (std::size_t k = 0; k < kProbes.size() && ok; ++k) {
      const Complex split = left[k] + right[k];
      ok = std::abs(split - whole[k]) <= 1e-11 * std::max(std::abs(split), b - a);
    }
    if (ok || depth >= kMaxPanelDepth) {
      out.emplace_back(a, m);
      out.emplace_back(m, b);
      return;
    }
    self(self, a, m, left, depth + 1);
    self(self, m, b, right, depth + 1);
  };
  refine(refine, lo, hi, probe_sums(seed, coeffs, lo, hi, nodes), 0);
  return out;
}

IntegralResult integral_with_nodes(const SeedField& field, const Integrand& f, int nodes) {
  Accumulator acc;
  bool exact = true;
  for (const auto& c : field.cells) {
    for (const auto& ov : overlaps(f, c.lo, c.hi)) {
      const auto& coeffs = ov.piece->coeffs;
      if (coeffs.size() <= 1) {
        const double v = coeffs.empty() ? 0.0 : coeffs[0];
        acc.add_scaled_seed(c.theta, c.sigma2, c.rho, v, (ov.hi - ov.lo) * c.kappa_density);
        continue;
      }
      exact = false;
      const auto& rule = gauss_legendre(nodes);
      for (const auto& [lo, hi] : adaptive_panels(seed_triplet(c), coeffs, ov.lo, ov.hi, nodes)) {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
          const double x = mid + half * rule.nodes[j];
          acc.add_scaled_seed(c.theta, c.sigma2, c.rho, horner(coeffs, x),
                              half * rule.weights[j] * c.kappa_density);
        }
      }
    }
  }
  for (const auto& at : field.atoms)
    acc.add_scaled_seed(at.theta, at.sigma2, at.rho, f(at.x), at.mass);
  IntegralResult res;
  res.triplet = FreeTriplet{acc.a, acc.b, levy_sum(acc.parts), Flavor::kFree};
  res.exact = exact;
  return res;
}

QuadratureOptions fine_options() {
  QuadratureOptions q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-11;
  return q;
}

}  // namespace

Integrand::Integrand(std::vector<IntegrandPiece> pieces) {
  for (auto& p : pieces) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !(p.lo < p.hi))
      fail(ErrorCode::kInvalidArgument, "integrand piece needs finite lo < hi");
    for (double c : p.coeffs)
      if (!std::isfinite(c)) fail(ErrorCode::kInvalidArgument, "integrand coefficients must be finite");
    while (!p.coeffs.empty() && p.coeffs.back() == 0.0) p.coeffs.pop_back();
  }
  std::erase_if(pieces, [](const IntegrandPiece& p) { return p.coeffs.empty(); });
  std::sort(pieces.begin(), pieces.end(),
            [](const IntegrandPiece& x, const IntegrandPiece& y) { return x.lo < y.lo; });
  for (std::size_t i = 1; i < pieces.size(); ++i)
    if (pieces[i].lo < pieces[i - 1].hi)
      fail(ErrorCode::kInvalidArgument, "integrand pieces overlap");
  pieces_ = std::move(pieces);
}

Integrand Integrand::step(const std::vector<std::pair<SetExpr, double>>& terms) {
  std::vector<double> cuts;
  for (const auto& [E, v] : terms)
    for (const auto& iv : E.intervals()) {
      cuts.push_back(iv.lo);
      cuts.push_back(iv.hi);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<IntegrandPiece> pieces;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double v = 0.0;
    for (const auto& [E, val] : terms)
      if (E.contains(cuts[i])) v += val;
    if (v == 0.0) continue;
    if (!pieces.empty() && pieces.back().hi == cuts[i] && pieces.back().coeffs[0] == v)
      pieces.back().hi = cuts[i + 1];
    else
      pieces.push_back({cuts[i], cuts[i + 1], {v}});
  }
  return Integrand(std::move(pieces));
}

Integrand Integrand::indicator(const SetExpr& E, double value) { return step({{E, value}}); }

double Integrand::operator()(double x) const {
  for (const auto& p : pieces_)
    if (p.lo <= x && x < p.hi) return horner(p.coeffs, x);
  return 0.0;
}

bool Integrand::is_step() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const IntegrandPiece& p) { return p.coeffs.size() <= 1; });
}

Integrand Integrand::scaled(double c) const {
  std::vector<IntegrandPiece> p = pieces_;
  for (auto& q : p)
    for (auto& k : q.coeffs) k *= c;
  return Integrand(std::move(p));
}

Integrand Integrand::restricted(const SetExpr& E) const {
  std::vector<IntegrandPiece> out;
  for (const auto& p : pieces_)
    for (const auto& iv : E.intervals()) {
      const double lo = std::max(p.lo, iv.lo), hi = std::min(p.hi, iv.hi);
      if (lo < hi) out.push_back({lo, hi, p.coeffs});
    }
  return Integrand(std::move(out));
}

Integrand step_approximation(const Integrand& f, int per_piece) {
  if (per_piece < 1) fail(ErrorCode::kInvalidArgument, "refinement must be >= 1");
  std::vector<IntegrandPiece> out;
  for (const auto& p : f.pieces()) {
    if (p.coeffs.size() <= 1) {
      out.push_back(p);
      continue;
    }
    const double h = (p.hi - p.lo) / per_piece;
    for (int k = 0; k < per_piece; ++k) {
      const double lo = p.lo + k * h;
      const double hi = k + 1 == per_piece ? p.hi : lo + h;
      out.push_back({lo, hi, {horner(p.coeffs, 0.5 * (lo + hi))}});
    }
  }
  return Integrand(std::move(out));
}

IntegrabilityReport integrability_check(const SeedField& field, const Integrand& f) {
  IntegrabilityReport rep;
  auto drift_at = [](const SeedCell& c, double v) {
    return std::abs(v * c.theta + compensator(c.rho, v));
  };
  auto jumps_at = [](const LevyMeasure& rho, double v) {
    return rho.empty() || v == 0.0 ? 0.0 : levy_quadrature(rho, integrands::min1_scaled_sq(v));
  };
  QuadratureOptions q;
  q.rel_tol = 1e-7;
  for (const auto& c : field.cells) {
    for (const auto& ov : overlaps(f, c.lo, c.hi)) {
      const auto& coeffs = ov.piece->coeffs;
      const double w = c.kappa_density;
      if (coeffs.size() <= 1) {
        const double v = coeffs.empty() ? 0.0 : coeffs[0];
        const double len = ov.hi - ov.lo;
        rep.drift += len * w * drift_at(c, v);
        rep.gaussian += len * w * v * v * c.sigma2;
        rep.jumps += len * w * jumps_at(c.rho, v);
        continue;
      }
      auto fx = [&](double x) { return horner(coeffs, x); };
      rep.drift += w * integrate_real([&](double x) { return drift_at(c, fx(x)); }, ov.lo, ov.hi,
                                      {}, q);
      rep.gaussian += w * c.sigma2 *
                      integrate_real([&](double x) { return fx(x) * fx(x); }, ov.lo, ov.hi, {}, q);
      if (!c.rho.empty())
        rep.jumps += w * integrate_real([&](double x) { return jumps_at(c.rho, fx(x)); }, ov.lo,
                                        ov.hi, {}, q);
    }
  }
  for (const auto& at : field.atoms) {
    const double v = f(at.x);
    rep.drift += at.mass * std::abs(v * at.theta + compensator(at.rho, v));
    rep.gaussian += at.mass * v * v * at.sigma2;
    rep.jumps += at.mass * jumps_at(at.rho, v);
  }
  rep.integrable =
      std::isfinite(rep.drift) && std::isfinite(rep.gaussian) && std::isfinite(rep.jumps);
  return rep;
}

IntegralResult integral_triplet_detailed(const SeedField& field, const Integrand& f,
                                         const IntegralOptions& opts) {
  if (opts.nodes < 1) fail(ErrorCode::kInvalidArgument, "node count must be >= 1");
  if (!integrability_check(field, f).integrable)
    fail(ErrorCode::kNotIntegrable, "integrand fails the integrability conditions");
  IntegralResult res = integral_with_nodes(field, f, opts.nodes);
  if (!res.exact) {
    const IntegralResult fine = integral_with_nodes(field, f, 2 * opts.nodes);
    const auto& u = res.triplet;
    const auto& v = fine.triplet;
    auto rel = [](double x, double y) {
      return std::abs(x - y) / std::max({1.0, std::abs(x), std::abs(y)});
    };
    res.approximation_error =
        std::max({rel(u.a, v.a), rel(u.b, v.b), levy_distance(u.r, v.r)});
  }
  return res;
}

FreeTriplet integral_triplet(const SeedField& field, const Integrand& f,
                             const IntegralOptions& opts) {
  return integral_triplet_detailed(field, f, opts).triplet;
}

double integral_ct_check(const SeedField& field, const Integrand& f,
                         const std::vector<Complex>& z_grid, const IntegralOptions& opts) {
  const FreeTriplet tri = integral_triplet(field, f, opts);
  const QuadratureOptions q = fine_options();
  double worst = 0.0;
  for (const Complex z : z_grid) {
    const Complex lhs = eval_free_ct(tri, z);
    Complex rhs{};
    for (const auto& c : field.cells) {
      const FreeTriplet seed = seed_triplet(c);
      for (const auto& ov : overlaps(f, c.lo, c.hi)) {
        const auto& coeffs = ov.piece->coeffs;
        if (coeffs.size() <= 1) {
          const double v = coeffs.empty() ? 0.0 : coeffs[0];
          rhs += (ov.hi - ov.lo) * c.kappa_density * eval_free_ct_unchecked(seed, v * z);
          continue;
        }
        auto kern = [&](double x) {
          return c.kappa_density * eval_free_ct_unchecked(seed, horner(coeffs, x) * z);
        };
        rhs += integrate_gk(kern, ov.lo, ov.hi, {}, q).value;
      }
    }
    for (const auto& at : field.atoms)
      rhs += at.mass * eval_free_ct_unchecked(seed_triplet(at), f(at.x) * z);
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

SeedField density_field(const SeedField& field, const Integrand& f) {
  if (!f.is_step())
    fail(ErrorCode::kNotRepresentable,
         "density field needs a piecewise-constant f; use density_field_refined");
  std::vector<SeedCell> cells;
  for (const auto& c : field.cells) {
    for (const auto& ov : overlaps(f, c.lo, c.hi)) {
      const double v = ov.piece->coeffs[0];
      SeedCell n{ov.lo, ov.hi, v * c.theta + compensator(c.rho, v), v * v * c.sigma2,
                 c.rho.empty() ? LevyMeasure{} : c.rho.image(v), c.kappa_density};
      if (n.theta == 0.0 && n.sigma2 == 0.0 && n.rho.empty()) continue;
      cells.push_back(std::move(n));
    }
  }
  std::vector<KappaAtom> atoms;
  for (const auto& at : field.atoms) {
    const double v = f(at.x);
    if (v == 0.0) continue;
    KappaAtom n{at.x, at.mass, v * at.theta + compensator(at.rho, v), v * v * at.sigma2,
                at.rho.empty() ? LevyMeasure{} : at.rho.image(v)};
    if (n.theta == 0.0 && n.sigma2 == 0.0 && n.rho.empty()) continue;
    atoms.push_back(std::move(n));
  }
  return make_field(field.carrier, std::move(cells), std::move(atoms));
}

DensityFieldResult density_field_refined(const SeedField& field, const Integrand& f,
                                         int refinement) {
  if (f.is_step()) return {density_field(field, f), 0.0};
  if (refinement < 1)
    fail(ErrorCode::kNotRepresentable, "non-step integrand needs a refinement budget");
  DensityFieldResult out{density_field(field, step_approximation(f, refinement)), 0.0};
  const SeedField finer = density_field(field, step_approximation(f, 2 * refinement));
  const FreeTriplet u = triplet_of_set(out.field, field.carrier);
  const FreeTriplet v = triplet_of_set(finer, field.carrier);
  for (double y : {-0.1, -0.3, -1.0, -3.0, -10.0}) {
    const Complex cu = eval_free_ct(u, Complex(0.0, y)), cv = eval_free_ct(v, Complex(0.0, y));
    const double scale = std::max({std::abs(cu), std::abs(cv), 1e-300});
    out.approximation_error = std::max(out.approximation_error, std::abs(cu - cv) / scale);
  }
  return out;
}

}  // namespace freelevy
