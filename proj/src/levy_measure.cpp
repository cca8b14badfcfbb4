#include "freelevy/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "freelevy/error.hpp"

namespace freelevy {
namespace {

double centering(double t) { return t < -1.0 ? -1.0 : (t > 1.0 ? 1.0 : t); }

double horner(const std::vector<double>& c, double t) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

void trim(std::vector<double>& c) {
  while (!c.empty() && c.back() == 0.0) c.pop_back();
}

// (cos x - 1) / x^2, accurate near 0.
double cosm1_over_sq(double x) {
  const double h = 0.5 * x;
  const double sinc = (h == 0.0) ? 1.0 : std::sin(h) / h;
  return -0.5 * sinc * sinc;
}

// (sin x - x) / x^2, accurate near 0.
double sinmx_over_sq(double x) {
  if (std::abs(x) < 0.5) {
    const double x2 = x * x;
    return x * (-1.0 / 6 + x2 * (1.0 / 120 + x2 * (-1.0 / 5040 + x2 * (1.0 / 362880 +
                                                                      x2 * (-1.0 / 39916800)))));
  }
  return (std::sin(x) - x) / (x * x);
}

LevyIntegrand make(std::string name, int order, std::vector<double> bps,
                   std::function<Complex(double)> value,
                   std::function<Complex(double)> reduced = {}) {
  LevyIntegrand g;
  g.name = std::move(name);
  g.order_at_zero = order;
  g.breakpoints = std::move(bps);
  if (!reduced) {
    // Only valid for integrands that vanish identically near the origin.
    reduced = [value, order](double t) { return value(t) / std::pow(t, order); };
  }
  g.value = std::move(value);
  g.reduced = std::move(reduced);
  return g;
}

}  // namespace

namespace integrands {

LevyIntegrand min1_sq() {
  return make(
      "min1_sq", 2, {-1.0, 1.0},
      [](double t) { return Complex(std::min(1.0, t * t), 0.0); },
      [](double t) { return Complex(std::abs(t) <= 1.0 ? 1.0 : 1.0 / (t * t), 0.0); });
}

LevyIntegrand min1_scaled_sq(double c) {
  const double cut = c == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / std::abs(c);
  return make(
      "min1_scaled_sq", 2, {-cut, cut},
      [c](double t) { return Complex(std::min(1.0, c * c * t * t), 0.0); },
      [c, cut](double t) {
        return Complex(std::abs(t) <= cut ? c * c : 1.0 / (t * t), 0.0);
      });
}

LevyIntegrand t_minus_sigma() {
  return make("t_minus_sigma", 2, {-1.0, 1.0},
              [](double t) { return Complex(t - centering(t), 0.0); });
}

LevyIntegrand sigma() {
  return make(
      "sigma", 1, {-1.0, 1.0}, [](double t) { return Complex(centering(t), 0.0); },
      [](double t) { return Complex(std::abs(t) <= 1.0 ? 1.0 : 1.0 / std::abs(t), 0.0); });
}

LevyIntegrand abs_sigma() {
  return make(
      "abs_sigma", 1, {-1.0, 1.0},
      [](double t) { return Complex(std::abs(centering(t)), 0.0); },
      [](double t) {
        const double s = t < 0 ? -1.0 : 1.0;
        return Complex(std::abs(t) <= 1.0 ? s : s / std::abs(t), 0.0);
      });
}

LevyIntegrand power(int n) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "moment order must be >= 1");
  return make(
      "t^" + std::to_string(n), n, {},
      [n](double t) { return Complex(std::pow(t, n), 0.0); },
      [](double) { return Complex(1.0, 0.0); });
}

LevyIntegrand sq_window(double eps) {
  return make(
      "sq_window", 2, {-eps, eps},
      [eps](double t) { return Complex(std::abs(t) <= eps ? t * t : 0.0, 0.0); },
      [eps](double t) { return Complex(std::abs(t) <= eps ? 1.0 : 0.0, 0.0); });
}

LevyIntegrand free_ct_kernel(Complex z) {
  return make(
      "free_ct_kernel", 2, {-1.0, 1.0},
      [z](double t) {
        if (std::abs(t) <= 1.0) return t * t * z * z / (1.0 - t * z);
        return t * z / (1.0 - t * z) - z * centering(t);
      },
      [z](double t) {
        if (std::abs(t) <= 1.0) return z * z / (1.0 - t * z);
        return (t * z / (1.0 - t * z) - z * centering(t)) / (t * t);
      });
}

LevyIntegrand r_kernel(Complex w) {
  return make(
      "r_kernel", 2, {-1.0, 1.0},
      [w](double t) {
        if (std::abs(t) <= 1.0) return t * t * w / (1.0 - t * w);
        return t / (1.0 - t * w) - centering(t);
      },
      [w](double t) {
        if (std::abs(t) <= 1.0) return w / (1.0 - t * w);
        return (t / (1.0 - t * w) - centering(t)) / (t * t);
      });
}

LevyIntegrand r_kernel_derivative(Complex w) {
  return make(
      "r_kernel_derivative", 2, {},
      [w](double t) {
        const Complex d = 1.0 - t * w;
        return t * t / (d * d);
      },
      [w](double t) {
        const Complex d = 1.0 - t * w;
        return 1.0 / (d * d);
      });
}

LevyIntegrand classical_cf_kernel(double y) {
  return make(
      "classical_cf_kernel", 2, {-1.0, 1.0},
      [y](double t) {
        const double x = t * y;
        if (std::abs(t) <= 1.0) {
          return Complex(-2.0 * std::pow(std::sin(0.5 * x), 2), std::sin(x) - x);
        }
        return Complex(std::cos(x) - 1.0, std::sin(x) - y * centering(t));
      },
      [y](double t) {
        const double x = t * y;
        if (std::abs(t) <= 1.0) {
          return y * y * Complex(cosm1_over_sq(x), sinmx_over_sq(x));
        }
        return Complex(std::cos(x) - 1.0, std::sin(x) - y * centering(t)) / (t * t);
      });
}

LevyIntegrand scale_compensator(double c) {
  std::vector<double> bps{-1.0, 1.0};
  if (c != 0.0) {
    bps.push_back(1.0 / std::abs(c));
    bps.push_back(-1.0 / std::abs(c));
  }
  return make("scale_compensator", 2, std::move(bps), [c](double t) {
    return Complex(centering(c * t) - c * centering(t), 0.0);
  });
}

LevyIntegrand bump(double center, double half_width) {
  if (!(half_width > 0.0) || std::abs(center) <= half_width)
    fail(ErrorCode::kInvalidArgument, "bump must vanish near the origin");
  return make("bump", 2, {center - half_width, center, center + half_width},
              [center, half_width](double t) {
                const double u = (t - center) / half_width;
                if (std::abs(u) >= 1.0) return Complex(0.0, 0.0);
                const double v = 1.0 - u * u;
                return Complex(v * v, 0.0);
              });
}

LevyIntegrand ramp(double delta) {
  if (!(delta > 0.0)) fail(ErrorCode::kInvalidArgument, "ramp width must be positive");
  return make("ramp", 2, {-2 * delta, -delta, delta, 2 * delta}, [delta](double t) {
    return Complex(std::clamp(std::abs(t) / delta - 1.0, 0.0, 1.0), 0.0);
  });
}

}  // namespace integrands

LevyMeasure::LevyMeasure(std::vector<LevyAtom> atoms, std::vector<PowerPiece> power,
                         std::vector<PolyPiece> poly)
    : atoms_(std::move(atoms)), power_(std::move(power)), poly_(std::move(poly)) {
  normalize();
}

LevyMeasure LevyMeasure::dirac(double location, double mass) {
  return LevyMeasure({{location, mass}}, {}, {});
}

LevyMeasure LevyMeasure::near_zero(double alpha, double c_plus, double c_minus, double eps0) {
  std::vector<PowerPiece> p;
  if (c_plus != 0.0) p.push_back({alpha, c_plus, 0.0, eps0, +1});
  if (c_minus != 0.0) p.push_back({alpha, c_minus, 0.0, eps0, -1});
  return LevyMeasure({}, std::move(p), {});
}

LevyMeasure LevyMeasure::polynomial(double lo, double hi, std::vector<double> coeffs) {
  return LevyMeasure({}, {}, {{lo, hi, std::move(coeffs)}});
}

void LevyMeasure::normalize() {
  // Atoms.
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.location) || !std::isfinite(a.mass))
      fail(ErrorCode::kInvalidArgument, "non-finite Levy atom");
    if (a.location == 0.0) fail(ErrorCode::kInvalidArgument, "Levy measure atom at 0");
    if (a.mass < 0.0) fail(ErrorCode::kInvalidArgument, "negative Levy atom mass");
  }
  std::sort(atoms_.begin(), atoms_.end(),
            [](const LevyAtom& x, const LevyAtom& y) { return x.location < y.location; });
  std::vector<LevyAtom> merged;
  for (const auto& a : atoms_) {
    if (a.mass == 0.0) continue;
    if (!merged.empty() && merged.back().location == a.location)
      merged.back().mass += a.mass;
    else
      merged.push_back(a);
  }
  atoms_ = std::move(merged);

  // Power pieces.
  for (const auto& p : power_) {
    if (!(p.side == 1 || p.side == -1))
      fail(ErrorCode::kInvalidArgument, "power piece side must be +1 or -1");
    if (!(p.coef >= 0.0) || !std::isfinite(p.coef))
      fail(ErrorCode::kInvalidArgument, "power piece coefficient must be >= 0");
    if (!(p.inner >= 0.0) || !(p.outer > p.inner) || !std::isfinite(p.outer))
      fail(ErrorCode::kInvalidArgument, "power piece needs 0 <= inner < outer < inf");
    if (!(p.alpha >= 0.0 && p.alpha < 2.0))
      fail(ErrorCode::kInvalidArgument, "power piece exponent alpha must lie in [0, 2)");
  }
  std::sort(power_.begin(), power_.end(), [](const PowerPiece& x, const PowerPiece& y) {
    return std::tie(x.side, x.alpha, x.inner, x.outer) <
           std::tie(y.side, y.alpha, y.inner, y.outer);
  });
  std::vector<PowerPiece> pw;
  for (const auto& p : power_) {
    if (p.coef == 0.0) continue;
    if (!pw.empty() && pw.back().side == p.side && pw.back().alpha == p.alpha &&
        pw.back().inner == p.inner && pw.back().outer == p.outer)
      pw.back().coef += p.coef;
    else
      pw.push_back(p);
  }
  power_ = std::move(pw);

  // Polynomial pieces: split at 0, then on the union of all breakpoints.
  std::vector<PolyPiece> raw;
  for (auto p : poly_) {
    if (!std::isfinite(p.lo) || !std::isfinite(p.hi) || !(p.lo < p.hi))
      fail(ErrorCode::kInvalidArgument, "polynomial piece needs finite lo < hi");
    trim(p.coeffs);
    if (p.coeffs.empty()) continue;
    if (p.lo < 0.0 && p.hi > 0.0) {
      raw.push_back({p.lo, 0.0, p.coeffs});
      raw.push_back({0.0, p.hi, p.coeffs});
    } else {
      raw.push_back(std::move(p));
    }
  }
  std::vector<double> cuts;
  for (const auto& p : raw) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<PolyPiece> out;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const double lo = cuts[j], hi = cuts[j + 1];
    std::vector<double> sum;
    for (const auto& p : raw) {
      if (p.lo <= lo && p.hi >= hi) {
        if (sum.size() < p.coeffs.size()) sum.resize(p.coeffs.size(), 0.0);
        for (std::size_t k = 0; k < p.coeffs.size(); ++k) sum[k] += p.coeffs[k];
      }
    }
    trim(sum);
    if (sum.empty()) continue;
    if (!out.empty() && out.back().hi == lo && lo != 0.0 && out.back().coeffs == sum)
      out.back().hi = hi;
    else
      out.push_back({lo, hi, std::move(sum)});
  }
  for (const auto& p : out) {
    for (int i = 0; i <= 16; ++i) {
      const double t = p.lo + (p.hi - p.lo) * i / 16.0;
      double scale = 0.0;
      for (std::size_t k = 0; k < p.coeffs.size(); ++k)
        scale += std::abs(p.coeffs[k]) * std::pow(std::abs(t), static_cast<double>(k));
      if (horner(p.coeffs, t) < -1e-12 * scale)
        fail(ErrorCode::kInvalidArgument, "polynomial Levy density is negative");
    }
  }
  poly_ = std::move(out);
}

LevyMeasure LevyMeasure::operator+(const LevyMeasure& other) const {
  LevyMeasure r = *this;
  r += other;
  return r;
}

LevyMeasure& LevyMeasure::operator+=(const LevyMeasure& other) {
  atoms_.insert(atoms_.end(), other.atoms_.begin(), other.atoms_.end());
  power_.insert(power_.end(), other.power_.begin(), other.power_.end());
  poly_.insert(poly_.end(), other.poly_.begin(), other.poly_.end());
  normalize();
  return *this;
}

LevyMeasure LevyMeasure::weighted(double w) const {
  if (!(w >= 0.0) || !std::isfinite(w))
    fail(ErrorCode::kInvalidArgument, "Levy measure weight must be finite and >= 0");
  if (w == 0.0) return {};
  LevyMeasure r = *this;
  for (auto& a : r.atoms_) a.mass *= w;
  for (auto& p : r.power_) p.coef *= w;
  for (auto& p : r.poly_)
    for (auto& c : p.coeffs) c *= w;
  return r;
}

LevyMeasure LevyMeasure::image(double c) const {
  if (c == 0.0 || !std::isfinite(c))
    fail(ErrorCode::kInvalidArgument, "image under t -> c t needs finite c != 0");
  std::vector<LevyAtom> atoms;
  for (const auto& a : atoms_) atoms.push_back({c * a.location, a.mass});
  std::vector<PowerPiece> power;
  const double ac = std::abs(c);
  const int sign = c > 0 ? 1 : -1;
  for (const auto& p : power_)
    power.push_back({p.alpha, p.coef * std::pow(ac, p.alpha), p.inner * ac, p.outer * ac,
                     p.side * sign});
  std::vector<PolyPiece> poly;
  for (const auto& p : poly_) {
    PolyPiece q;
    q.lo = c > 0 ? c * p.lo : c * p.hi;
    q.hi = c > 0 ? c * p.hi : c * p.lo;
    double ck = 1.0;
    for (double coef : p.coeffs) {
      q.coeffs.push_back(coef / (ck * ac));
      ck *= c;
    }
    poly.push_back(std::move(q));
  }
  return LevyMeasure(std::move(atoms), std::move(power), std::move(poly));
}

LevyMeasure LevyMeasure::restricted_outside(double eps) const {
  if (!(eps >= 0.0)) fail(ErrorCode::kInvalidArgument, "truncation level must be >= 0");
  std::vector<LevyAtom> atoms;
  for (const auto& a : atoms_)
    if (std::abs(a.location) > eps) atoms.push_back(a);
  std::vector<PowerPiece> power;
  for (auto p : power_) {
    p.inner = std::max(p.inner, eps);
    if (p.inner < p.outer) power.push_back(p);
  }
  std::vector<PolyPiece> poly;
  for (auto p : poly_) {
    if (p.lo >= 0.0) {
      p.lo = std::max(p.lo, eps);
    } else {
      p.hi = std::min(p.hi, -eps);
    }
    if (p.lo < p.hi) poly.push_back(std::move(p));
  }
  return LevyMeasure(std::move(atoms), std::move(power), std::move(poly));
}

double LevyMeasure::total_mass() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.mass;
  for (const auto& p : power_) {
    if (p.inner == 0.0) return std::numeric_limits<double>::infinity();
    m += p.alpha == 0.0
             ? p.coef * std::log(p.outer / p.inner)
             : p.coef * (std::pow(p.inner, -p.alpha) - std::pow(p.outer, -p.alpha)) / p.alpha;
  }
  for (const auto& p : poly_)
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) {
      const double e = static_cast<double>(k + 1);
      m += p.coeffs[k] * (std::pow(p.hi, e) - std::pow(p.lo, e)) / e;
    }
  return m;
}

double LevyMeasure::support_radius() const {
  double r = 0.0;
  for (const auto& a : atoms_) r = std::max(r, std::abs(a.location));
  for (const auto& p : power_) r = std::max(r, p.outer);
  for (const auto& p : poly_) r = std::max({r, std::abs(p.lo), std::abs(p.hi)});
  return r;
}

LevyMeasure levy_sum(const std::vector<LevyMeasure>& parts) {
  std::vector<LevyAtom> atoms;
  std::vector<PowerPiece> power;
  std::vector<PolyPiece> poly;
  for (const auto& m : parts) {
    atoms.insert(atoms.end(), m.atoms().begin(), m.atoms().end());
    power.insert(power.end(), m.power_pieces().begin(), m.power_pieces().end());
    poly.insert(poly.end(), m.poly_pieces().begin(), m.poly_pieces().end());
  }
  return LevyMeasure(std::move(atoms), std::move(power), std::move(poly));
}

Complex levy_integrate(const LevyMeasure& r, const LevyIntegrand& g,
                       const QuadratureOptions& opts) {
  Complex total{};
  for (const auto& a : r.atoms()) total += a.mass * g.value(a.location);

  for (const auto& p : r.power_pieces()) {
    const double side = p.side;
    if (p.inner == 0.0) {
      const int k = std::min(g.order_at_zero, 2);
      if (k <= 0 || p.alpha >= k) {
        fail(ErrorCode::kDivergentIntegral,
             "integrand '" + g.name + "' is not integrable against an alpha=" +
                 std::to_string(p.alpha) + " piece at the origin");
      }
      // t = s^(1/(k-alpha)) turns coef t^(-1-alpha) g(t) dt into
      // coef/(k-alpha) * g(t)/t^k ds, bounded at s = 0.
      const double gamma = k - p.alpha;
      const int extra = g.order_at_zero - k;
      const double sign_k = (k % 2 == 0) ? 1.0 : side;
      std::vector<double> bps;
      for (double b : g.breakpoints)
        if (b * side > 0.0 && std::abs(b) < p.outer) bps.push_back(std::pow(std::abs(b), gamma));
      auto h = [&](double s) {
        const double u = std::pow(s, 1.0 / gamma);
        const double t = side * u;
        Complex v = g.reduced(t);
        if (extra > 0) v *= std::pow(t, extra);
        return v;
      };
      const auto res = integrate_gk(h, 0.0, std::pow(p.outer, gamma), bps, opts);
      total += sign_k * p.coef / gamma * res.value;
    } else {
      std::vector<double> bps;
      for (double b : g.breakpoints)
        if (b * side > 0.0 && std::abs(b) > p.inner && std::abs(b) < p.outer)
          bps.push_back(std::log(std::abs(b)));
      auto h = [&](double u) {
        const double e = std::exp(u);
        return g.value(side * e) * std::exp(-p.alpha * u);
      };
      const auto res = integrate_gk(h, std::log(p.inner), std::log(p.outer), bps, opts);
      total += p.coef * res.value;
    }
  }

  for (const auto& p : r.poly_pieces()) {
    auto h = [&](double t) { return g.value(t) * horner(p.coeffs, t); };
    total += integrate_gk(h, p.lo, p.hi, g.breakpoints, opts).value;
  }
  return total;
}

double levy_quadrature(const LevyMeasure& r, const LevyIntegrand& g,
                       const QuadratureOptions& opts) {
  return levy_integrate(r, g, opts).real();
}

double levy_distance(const LevyMeasure& a, const LevyMeasure& b) {
  static const std::vector<LevyIntegrand> ladder = [] {
    std::vector<LevyIntegrand> v{integrands::min1_sq(), integrands::t_minus_sigma(),
                                 integrands::power(2), integrands::power(3),
                                 integrands::power(4), integrands::ramp(0.05),
                                 integrands::ramp(0.5)};
    for (double eps : {1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0})
      v.push_back(integrands::sq_window(eps));
    for (double c : {0.1, 0.3, 1.0, 3.0}) {
      v.push_back(integrands::bump(c, 0.5 * c));
      v.push_back(integrands::bump(-c, 0.5 * c));
    }
    return v;
  }();
  double worst = 0.0;
  for (const auto& g : ladder) {
    const double ia = levy_quadrature(a, g);
    const double ib = levy_quadrature(b, g);
    worst = std::max(worst, std::abs(ia - ib) / std::max({1.0, std::abs(ia), std::abs(ib)}));
  }
  return worst;
}

bool levy_close(const LevyMeasure& a, const LevyMeasure& b, double tol) {
  // Atom lists may differ by rounding in locations; cluster before comparing.
  std::vector<std::pair<double, double>> pts;
  for (const auto& x : a.atoms()) pts.emplace_back(x.location, x.mass);
  for (const auto& x : b.atoms()) pts.emplace_back(x.location, -x.mass);
  std::sort(pts.begin(), pts.end());
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p.second));
  std::size_t i = 0;
  while (i < pts.size()) {
    double net = 0.0;
    const double loc = pts[i].first;
    std::size_t j = i;
    while (j < pts.size() && std::abs(pts[j].first - loc) <= 1e-12 * std::max(1.0, std::abs(loc))) {
      net += pts[j].second;
      ++j;
    }
    if (std::abs(net) > 1e-10 * std::max(1.0, scale)) return false;
    i = j;
  }
  // Atoms matched; the window ladder is discontinuous at window edges, so it
  // only sees the diffuse parts.
  const LevyMeasure da({}, a.power_pieces(), a.poly_pieces());
  const LevyMeasure db({}, b.power_pieces(), b.poly_pieces());
  return levy_distance(da, db) <= tol;
}

}  // namespace freelevy
