#include <algorithm>
#include <cmath>

#include "freelevy/error.hpp"
#include "freelevy/rmt/ensembles.hpp"

namespace freelevy::rmt {

KsReport ks_report(const EigenSample& sample, const SpectralDensity& model) {
  KsReport rep;
  const auto& g = model.grid;
  if (g.empty() || model.cdf.size() != g.size())
    fail(ErrorCode::kInvalidArgument, "model CDF is empty or malformed");
  std::vector<double> xs = sample.eigenvalues;
  if (xs.empty()) fail(ErrorCode::kInvalidArgument, "empty sample");
  constexpr double kAtomTol = 1e-8;
  auto atoms = model.atoms;
  std::sort(atoms.begin(), atoms.end(),
            [](const AtomEstimate& a, const AtomEstimate& b) { return a.location < b.location; });
  for (auto& x : xs)
    for (const auto& a : atoms)
      if (std::abs(x - a.location) <= kAtomTol) x = a.location;
  std::sort(xs.begin(), xs.end());

  // Continuous part of the model CDF on the grid.
  std::vector<double> cont(g.size());
  {
    double acc = 0.0;
    std::size_t ai = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      while (ai < atoms.size() && atoms[ai].location <= g[i]) acc += atoms[ai++].mass;
      cont[i] = model.cdf[i] - acc;
    }
  }
  auto atoms_upto = [&](double x, bool inclusive) {
    double m = 0.0;
    for (const auto& a : atoms)
      if (inclusive ? a.location <= x : a.location < x) m += a.mass;
    return m;
  };
  auto continuous = [&](double x) {
    if (x <= g.front()) return cont.front();
    if (x >= g.back()) return cont.back();
    const auto it = std::upper_bound(g.begin(), g.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - g.begin());
    const double w = (x - g[i - 1]) / (g[i] - g[i - 1]);
    return cont[i - 1] + w * (cont[i] - cont[i - 1]);
  };

  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < xs.size()) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    const double x = xs[i];
    const bool outside = x < g.front() || x > g.back();
    if (outside) rep.clamped += j - i;
    double f_right, f_left;
    if (x < g.front()) {
      f_right = f_left = 0.0;
    } else {
      const double c = continuous(x);
      f_right = c + atoms_upto(x, true);
      f_left = c + atoms_upto(x, false);
    }
    d = std::max({d, std::abs(static_cast<double>(j) / n - f_right),
                  std::abs(static_cast<double>(i) / n - f_left)});
    i = j;
  }
  if (rep.clamped == xs.size()) {
    rep.empty_overlap = true;
    rep.statistic = 1.0;
    rep.warning = "sample lies entirely outside the model grid";
    return rep;
  }
  if (rep.clamped > 0)
    rep.warning = std::to_string(rep.clamped) + " sample points outside the model grid were clamped";
  rep.statistic = d;
  return rep;
}

double ks_distance(const EigenSample& sample, const SpectralDensity& model) {
  return ks_report(sample, model).statistic;
}

}  // namespace freelevy::rmt
