#include "freelevy/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freelevy/error.hpp"
#include "freelevy/parallel.hpp"

namespace freelevy {
namespace {

constexpr double kPi = 3.14159265358979323846;

void require_free(const FreeTriplet& u, const char* what) {
  if (u.flavor != Flavor::kFree)
    fail(ErrorCode::kFlavorMismatch, std::string(what) + " needs a free triplet");
}

// Fits eps*v(eps) = sum_i c_i eps^i through the ladder points.
std::vector<double> polyfit_exact(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t k = x.size();
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1));
  for (std::size_t r = 0; r < k; ++r) {
    double p = 1.0;
    for (std::size_t c = 0; c < k; ++c, p *= x[r]) a[r][c] = p;
    a[r][k] = y[r];
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t j = c; j <= k; ++j) a[r][j] -= f * a[c][j];
    }
  }
  std::vector<double> out(k);
  for (std::size_t c = 0; c < k; ++c) out[c] = a[c][k] / a[c][c];
  return out;
}

}  // namespace

Complex eval_free_ct_unchecked(const FreeTriplet& u, Complex z) {
  Complex c = u.a * z + u.b * z * z;
  if (!u.r.empty()) c += levy_integrate(u.r, integrands::free_ct_kernel(z));
  return c;
}

Complex eval_r_transform_unchecked(const FreeTriplet& u, Complex w) {
  Complex c = u.a + u.b * w;
  if (!u.r.empty()) c += levy_integrate(u.r, integrands::r_kernel(w));
  return c;
}

Complex eval_r_derivative(const FreeTriplet& u, Complex w) {
  Complex c = u.b;
  if (!u.r.empty()) c += levy_integrate(u.r, integrands::r_kernel_derivative(w));
  return c;
}

Complex eval_free_ct(const FreeTriplet& u, Complex z) {
  require_free(u, "eval_free_ct");
  if (!(z.imag() < 0.0)) fail(ErrorCode::kDomainError, "free cumulant transform needs Im z < 0");
  return eval_free_ct_unchecked(u, z);
}

Complex eval_r_transform(const FreeTriplet& u, Complex w) {
  require_free(u, "eval_r_transform");
  if (!(w.imag() < 0.0)) fail(ErrorCode::kDomainError, "R-transform needs Im w < 0");
  return eval_r_transform_unchecked(u, w);
}

Complex eval_classical_cf(const FreeTriplet& u, double y) {
  if (u.flavor != Flavor::kClassical)
    fail(ErrorCode::kFlavorMismatch, "eval_classical_cf needs a classical triplet");
  Complex e(-0.5 * u.b * y * y, u.a * y);
  if (!u.r.empty()) e += levy_integrate(u.r, integrands::classical_cf_kernel(y));
  return std::exp(e);
}

Complex cauchy_from_triplet(const FreeTriplet& u, Complex z, const CauchyOptions& opts) {
  return cauchy_from_triplet(u, z, 1.0 / z, opts);
}

Complex cauchy_from_triplet(const FreeTriplet& u, Complex z, Complex warm_start,
                            const CauchyOptions& opts) {
  require_free(u, "cauchy_from_triplet");
  if (!(z.imag() > 0.0)) fail(ErrorCode::kDomainError, "Cauchy transform needs Im z > 0");
  Complex g = warm_start;
  if (!(g.imag() < 0.0) || !std::isfinite(std::abs(g))) g = 1.0 / z;
  Complex rg = eval_r_transform_unchecked(u, g);
  double theta = opts.damping;
  double prev_res = std::numeric_limits<double>::infinity();
  double res = prev_res;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const Complex t = 1.0 / (z - rg);
    res = std::abs(g - t);
    if (res <= opts.tolerance * std::max(1.0, std::abs(g))) return g;

    Complex next;
    Complex r_next;
    bool have_r = false;
    if (it >= opts.newton_after) {
      // Newton on F(G) = G (z - R(G)) - 1 with backtracking.
      const Complex f = g * (z - rg) - 1.0;
      const Complex df = z - rg - g * eval_r_derivative(u, g);
      const Complex step = f / df;
      double lambda = 1.0;
      for (int k = 0; k < 30 && !have_r; ++k, lambda *= 0.5) {
        const Complex cand = g - lambda * step;
        if (!(cand.imag() < 0.0) || !std::isfinite(std::abs(cand))) continue;
        const Complex rc = eval_r_transform_unchecked(u, cand);
        if (std::abs(cand * (z - rc) - 1.0) < std::abs(f)) {
          next = cand;
          r_next = rc;
          have_r = true;
        }
      }
      if (!have_r) next = g + theta * (t - g);
    } else {
      if (res > prev_res) theta = std::max(theta * 0.5, 1.0 / 64);
      next = g + theta * (t - g);
    }
    prev_res = res;
    if (!(next.imag() < 0.0)) {
      next = Complex(next.real(), 0.5 * g.imag());
      have_r = false;
    }
    g = next;
    rg = have_r ? r_next : eval_r_transform_unchecked(u, g);
  }
  fail(ErrorCode::kNoConvergence, "Cauchy fixed point did not converge", res);
}

double SpectralDensity::total_mass() const {
  double m = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i)
    m += 0.5 * (density[i] + density[i - 1]) * (grid[i] - grid[i - 1]);
  for (const auto& a : atoms) m += a.mass;
  return m;
}

void check_mass(const SpectralDensity& d, double tol) {
  const double m = d.total_mass();
  if (!(std::abs(m - 1.0) <= tol))
    fail(ErrorCode::kInvalidArgument,
         "recovered spectral mass " + std::to_string(m) + " outside tolerance");
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 2 || !(lo < hi)) fail(ErrorCode::kInvalidArgument, "grid needs lo < hi and n >= 2");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  g.back() = hi;
  return g;
}

SpectralDensity density_from_triplet(const FreeTriplet& u, const std::vector<double>& grid,
                                     const DensityOptions& opts) {
  require_free(u, "density_from_triplet");
  if (grid.empty()) fail(ErrorCode::kInvalidArgument, "empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) fail(ErrorCode::kInvalidArgument, "grid must be increasing");
  const auto& ladder = opts.eps_ladder;
  if (ladder.empty()) fail(ErrorCode::kInvalidArgument, "empty epsilon ladder");
  for (std::size_t j = 0; j < ladder.size(); ++j)
    if (!(ladder[j] > 0.0) || (j > 0 && !(ladder[j] < ladder[j - 1])))
      fail(ErrorCode::kInvalidArgument, "epsilon ladder must be positive and decreasing");

  // Approach the axis from Im z = 1 so every level starts from a nearby root.
  std::vector<double> path;
  for (double e : {1.0, 0.1, 0.01})
    if (e > ladder.front()) path.push_back(e);
  const std::size_t first_ladder = path.size();
  path.insert(path.end(), ladder.begin(), ladder.end());

  const std::size_t n = grid.size();
  std::vector<double> dens(n, 0.0), atom_mass(n, 0.0);
  std::vector<char> failed(n, 0);
  CauchyOptions warm = opts.cauchy;
  warm.newton_after = std::min(warm.newton_after, 3);

  parallel_for(n, [&](std::size_t i) {
    const double x = grid[i];
    std::vector<double> v;  // -Im G along the ladder
    try {
      Complex g;
      for (std::size_t j = 0; j < path.size(); ++j) {
        const Complex z(x, path[j]);
        g = j == 0 ? cauchy_from_triplet(u, z, opts.cauchy)
                   : cauchy_from_triplet(u, z, g, warm);
        if (j >= first_ladder) v.push_back(-g.imag());
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoConvergence) throw;
      failed[i] = 1;
      return;
    }
    bool atom = true;
    for (std::size_t j = 0; j < ladder.size(); ++j)
      if (!(ladder[j] * v[j] > opts.atom_threshold)) atom = false;
    if (atom) {
      std::vector<double> ev(ladder.size());
      for (std::size_t j = 0; j < ladder.size(); ++j) ev[j] = ladder[j] * v[j];
      const auto c = polyfit_exact(ladder, ev);
      atom_mass[i] = std::max(0.0, c[0]);
      dens[i] = c.size() > 1 ? std::max(0.0, c[1] / kPi) : 0.0;
      return;
    }
    double d = v.back() / kPi;
    if (ladder.size() >= 2) {
      const double e1 = ladder[ladder.size() - 2], e2 = ladder.back();
      const double d1 = v[v.size() - 2] / kPi;
      d += (d - d1) * e2 / (e1 - e2);
    }
    dens[i] = std::max(0.0, d);
  });

  SpectralDensity out;
  out.grid = grid;
  out.density = dens;
  out.cdf.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (failed[i]) out.failed_points.push_back(i);
    if (atom_mass[i] > 0.0) out.atoms.push_back({grid[i], atom_mass[i]});
    double c = i == 0 ? 0.0 : out.cdf[i - 1] + 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
    out.cdf[i] = c + atom_mass[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (dens[i] > opts.support_threshold || atom_mass[i] > 0.0) {
      if (!out.has_support) out.support_lo = grid[i];
      out.has_support = true;
      out.support_hi = grid[i];
    }
  }
  return out;
}

ConvergenceReport convergence_diagnostic(const std::vector<FreeTriplet>& seq,
                                         const FreeTriplet& target,
                                         const ConvergenceOptions& opts) {
  if (seq.empty()) fail(ErrorCode::kInvalidArgument, "convergence_diagnostic needs a sequence");
  require_free(target, "convergence_diagnostic");
  std::vector<double> ys = opts.y_grid;
  if (ys.empty()) {
    for (int k = 0; k < 40; ++k) ys.push_back(-0.05 * std::pow(100.0, k / 39.0));
  }
  std::vector<LevyIntegrand> tests;
  for (double c : {0.1, 0.3, 1.0, 3.0}) {
    tests.push_back(integrands::bump(c, 0.5 * c));
    tests.push_back(integrands::bump(-c, 0.5 * c));
  }
  tests.push_back(integrands::ramp(0.05));
  tests.push_back(integrands::ramp(0.5));
  std::vector<double> target_tests;
  for (const auto& g : tests) target_tests.push_back(levy_quadrature(target.r, g));
  std::vector<Complex> target_ct;
  for (double y : ys) target_ct.push_back(eval_free_ct(target, Complex(0.0, y)));

  ConvergenceReport rep;
  rep.eps_grid = opts.eps_grid;
  const std::size_t n = seq.size();
  rep.drift_gap.resize(n);
  rep.bump_gap.resize(n);
  rep.bracket.resize(n);
  rep.ct_gap.resize(n);
  parallel_for(n, [&](std::size_t k) {
    const auto& u = seq[k];
    require_free(u, "convergence_diagnostic");
    rep.drift_gap[k] = std::abs(u.a - target.a);
    double bump = 0.0;
    for (std::size_t j = 0; j < tests.size(); ++j)
      bump = std::max(bump, std::abs(levy_quadrature(u.r, tests[j]) - target_tests[j]));
    rep.bump_gap[k] = bump;
    for (double e : opts.eps_grid)
      rep.bracket[k].push_back(
          std::abs(u.b - target.b + levy_quadrature(u.r, integrands::sq_window(e))));
    double ct = 0.0;
    for (std::size_t j = 0; j < ys.size(); ++j)
      ct = std::max(ct, std::abs(eval_free_ct(u, Complex(0.0, ys[j])) - target_ct[j]));
    rep.ct_gap[k] = ct;
  });
  rep.drift_pass = rep.drift_gap.back() <= opts.drift_tol;
  rep.bump_pass = rep.bump_gap.back() <= opts.bump_tol;
  const auto& last = rep.bracket.back();
  rep.bracket_pass =
      !last.empty() && *std::min_element(last.begin(), last.end()) <= opts.bracket_tol;
  rep.ct_pass = rep.ct_gap.back() <= opts.ct_tol;
  rep.note =
      "laws are freely infinitely divisible; the extra uniform condition on "
      "sup_n |C_n(iy)| as y -> 0 needed outside that class is not evaluated";
  return rep;
}

}  // namespace freelevy
