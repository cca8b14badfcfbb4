#pragma once

// Seeded random triplets and fields shared by the unit and acceptance tests.

#include <random>

#include "freelevy/levy_basis.hpp"

namespace testgen {

using freelevy::LevyMeasure;

inline double uni(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

struct MeasureShape {
  bool atoms = true;
  bool body = true;
  bool power = true;
  double max_alpha = 1.8;
  bool positive_only = false;
};

inline LevyMeasure random_measure(std::mt19937_64& g, const MeasureShape& s = {}) {
  std::vector<freelevy::LevyAtom> atoms;
  std::vector<freelevy::PowerPiece> power;
  std::vector<freelevy::PolyPiece> poly;
  if (s.atoms) {
    int n = static_cast<int>(uni(g, 0, 3.999));
    for (int i = 0; i < n; ++i) {
      double x = uni(g, 0.2, 2.5);
      if (!s.positive_only && uni(g, 0, 1) < 0.4) x = -x;
      atoms.push_back({x, uni(g, 0.1, 1.5)});
    }
  }
  if (s.body && uni(g, 0, 1) < 0.7) {
    double lo = uni(g, 0.3, 1.5), hi = lo + uni(g, 0.2, 1.5);
    if (!s.positive_only && uni(g, 0, 1) < 0.4) {
      double t = lo;
      lo = -hi;
      hi = -t;
    }
    double c0 = uni(g, 0.1, 1.0), c1 = uni(g, -0.05, 0.05);
    // keep the density positive on [lo, hi)
    if (c0 + c1 * lo <= 0.0 || c0 + c1 * hi <= 0.0) c1 = 0.0;
    poly.push_back({lo, hi, {c0, c1}});
  }
  if (s.power && uni(g, 0, 1) < 0.6) {
    double alpha = uni(g, 0.1, s.max_alpha);
    double eps0 = uni(g, 0.1, 0.3);
    power.push_back({alpha, uni(g, 0.05, 0.5), 0.0, eps0, +1});
    if (!s.positive_only && uni(g, 0, 1) < 0.5) power.push_back({alpha, uni(g, 0.05, 0.5), 0.0, eps0, -1});
  }
  return LevyMeasure(std::move(atoms), std::move(power), std::move(poly));
}

inline freelevy::FreeTriplet random_triplet(std::mt19937_64& g, const MeasureShape& s = {},
                                            freelevy::Flavor fl = freelevy::Flavor::kFree) {
  double b = uni(g, 0, 1) < 0.3 ? 0.0 : uni(g, 0.0, 1.5);
  return freelevy::make_triplet(uni(g, -1.5, 1.5), b, random_measure(g, s), fl);
}

// Cells on a random partition of [0, L) with random seeds, plus optional
// kappa atoms at cell midpoints.
inline freelevy::SeedField random_field(std::mt19937_64& g, const MeasureShape& s = {},
                                        bool with_atoms = true) {
  int cells = 1 + static_cast<int>(uni(g, 0, 3.999));
  std::vector<freelevy::SeedCell> cs;
  double x = 0.0;
  for (int i = 0; i < cells; ++i) {
    double w = uni(g, 0.3, 1.2);
    freelevy::SeedCell c{x, x + w, 0.0, 0.0, {}, 1.0};
    c.theta = uni(g, -1.0, 1.0);
    c.sigma2 = uni(g, 0, 1) < 0.3 ? 0.0 : uni(g, 0.0, 1.0);
    c.rho = random_measure(g, s);
    c.kappa_density = uni(g, 0.2, 2.0);
    cs.push_back(std::move(c));
    x += w;
  }
  std::vector<freelevy::KappaAtom> as;
  if (with_atoms && uni(g, 0, 1) < 0.5) {
    const auto& c = cs[static_cast<std::size_t>(uni(g, 0, cells - 1e-9))];
    freelevy::KappaAtom a{0.5 * (c.lo + c.hi), uni(g, 0.1, 1.0), 0.0, 0.0, {}};
    a.theta = uni(g, -1.0, 1.0);
    a.sigma2 = uni(g, 0.0, 1.0);
    a.rho = random_measure(g, s);
    as.push_back(std::move(a));
  }
  return freelevy::make_field({}, std::move(cs), std::move(as));
}

// Random finite union of intervals inside [0, L).
inline freelevy::SetExpr random_set(std::mt19937_64& g, double L) {
  int n = 1 + static_cast<int>(uni(g, 0, 2.999));
  std::vector<freelevy::Interval> iv;
  for (int i = 0; i < n; ++i) {
    double a = uni(g, 0, L), b = uni(g, 0, L);
    if (a > b) std::swap(a, b);
    if (b - a > 1e-3) iv.push_back({a, b});
  }
  return freelevy::set_normalize(iv);
}

inline double field_end(const freelevy::SeedField& f) { return f.cells.back().hi; }

}  // namespace testgen
