#include "freelevy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

#include "freelevy/error.hpp"

namespace freelevy {
namespace {

// QUADPACK qk15 abscissae and weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  Complex value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const ComplexIntegrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Complex fc = f(center);
  Complex kronrod = fc * kWgk[7];
  Complex gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const Complex f1 = f(center - dx);
    const Complex f2 = f(center + dx);
    kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_gk(const ComplexIntegrand& f, double a, double b,
                              std::span<const double> breakpoints,
                              const QuadratureOptions& opts) {
  if (!(a < b)) return {Complex{}, 0.0, 0};
  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment> heap;
  Complex total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = gk15(f, cuts[i], cuts[i + 1]);
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }
  int subdivisions = 0;
  while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
    if (subdivisions >= opts.max_subdivisions) {
      fail(ErrorCode::kQuadratureBudget,
           "adaptive quadrature exhausted its subdivision budget", total_err);
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Floating point cannot split this segment further; accept it as is.
      total_err -= worst.error;
      worst.error = 0.0;
      heap.push(worst);
      ++subdivisions;
      continue;
    }
    Segment left = gk15(f, worst.a, mid);
    Segment right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++subdivisions;
  }
  // Re-sum to shed accumulated cancellation from the running updates.
  Complex resum{};
  double err = 0.0;
  while (!heap.empty()) {
    resum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {resum, err, subdivisions};
}

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      std::span<const double> breakpoints,
                      const QuadratureOptions& opts) {
  return integrate_gk([&](double x) { return Complex(f(x), 0.0); }, a, b,
                      breakpoints, opts)
      .value.real();
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (n < 1) fail(ErrorCode::kInvalidArgument, "Gauss-Legendre order must be >= 1");
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace freelevy
