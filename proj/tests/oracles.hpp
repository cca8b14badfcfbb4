#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Every set partition of {0..p-1} as restricted-growth label strings.
inline void all_partitions(int p, std::vector<int>& cur, int max_label,
                           std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == p) {
    out.push_back(cur);
    return;
  }
  for (int l = 0; l <= max_label + 1; ++l) {
    cur.push_back(l);
    all_partitions(p, cur, std::max(max_label, l), out);
    cur.pop_back();
  }
}

inline std::vector<std::vector<int>> all_partitions(int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  all_partitions(p, cur, -1, out);
  return out;
}

// a < b < c < d with a, c in one block and b, d in another.
inline bool crossing(const std::vector<int>& lab) {
  const int p = static_cast<int>(lab.size());
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b)
      for (int c = b + 1; c < p; ++c)
        for (int d = c + 1; d < p; ++d)
          if (lab[a] == lab[c] && lab[b] == lab[d] && lab[a] != lab[b]) return true;
  return false;
}

inline double catalan(int n) {
  double c = 1.0;
  for (int k = 0; k < n; ++k) c = c * 2.0 * (2 * k + 1) / (k + 2);
  return c;
}

// Moments from free cumulants through the functional equation
// M(z) = 1 + sum_n k_n z^n M(z)^n, solved as truncated power series.
inline std::vector<double> free_moments_series(const std::vector<double>& k) {
  const int p = static_cast<int>(k.size());
  std::vector<double> M(p + 1, 0.0);
  M[0] = 1.0;
  auto mul = [p](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(p + 1, 0.0);
    for (int i = 0; i <= p; ++i)
      for (int j = 0; i + j <= p; ++j) c[i + j] += a[i] * b[j];
    return c;
  };
  for (int iter = 0; iter < p; ++iter) {
    std::vector<double> next(p + 1, 0.0);
    next[0] = 1.0;
    std::vector<double> zm(p + 1, 0.0);  // (z M)^n
    zm[0] = 1.0;
    std::vector<double> z_times_m(p + 1, 0.0);
    for (int i = 0; i < p; ++i) z_times_m[i + 1] = M[i];
    for (int n = 1; n <= p; ++n) {
      zm = mul(zm, z_times_m);
      for (int i = 0; i <= p; ++i) next[i] += k[n - 1] * zm[i];
    }
    M = next;
  }
  return {M.begin() + 1, M.end()};
}

// m_n = sum_k C(n-1, k-1) c_k m_{n-k}.
inline std::vector<double> classical_moments_recursion(const std::vector<double>& c) {
  const int p = static_cast<int>(c.size());
  std::vector<double> m(p + 1, 0.0);
  m[0] = 1.0;
  for (int n = 1; n <= p; ++n) {
    double binom = 1.0;  // C(n-1, k-1)
    for (int k = 1; k <= n; ++k) {
      m[n] += binom * c[k - 1] * m[n - k];
      binom = binom * (n - k) / k;
    }
  }
  return {m.begin() + 1, m.end()};
}

// Semicircle of mean c and radius l: 2/(pi l^2) sqrt(l^2 - (t - c)^2).
inline double semicircle(double t, double c = 0.0, double l = 2.0) {
  double s = l * l - (t - c) * (t - c);
  return s > 0.0 ? 2.0 / (std::numbers::pi * l * l) * std::sqrt(s) : 0.0;
}

// Free Poisson law of rate l, continuous part:
// sqrt((t - s)(u - t)) / (2 pi t) with s, u = (1 -+ sqrt l)^2.
inline double marchenko_pastur(double t, double l = 1.0) {
  double s = (1 - std::sqrt(l)) * (1 - std::sqrt(l));
  double u = (1 + std::sqrt(l)) * (1 + std::sqrt(l));
  if (t <= s || t >= u) return 0.0;
  return std::sqrt((t - s) * (u - t)) / (2.0 * std::numbers::pi * t);
}

// Composite Gauss-Legendre (8 nodes) on n panels: a plain, fixed rule.
inline std::complex<double> integrate(const std::function<std::complex<double>(double)>& f,
                                      double a, double b, int panels = 2000) {
  static const double x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                              -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                              0.7966664774136267,  0.9602898564975363};
  static const double w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                              0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                              0.2223810344533745, 0.1012285362903763};
  std::complex<double> s = 0.0;
  double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    double mid = a + (i + 0.5) * h;
    for (int j = 0; j < 8; ++j) s += w[j] * f(mid + 0.5 * h * x[j]);
  }
  return s * (0.5 * h);
}

// Cauchy transform by quadrature of 1/(z - x) against a density on [lo, hi];
// the substitution x = lo + (hi - lo) sin^2(theta) removes the square-root edges.
inline std::complex<double> cauchy_of_density(const std::function<double(double)>& rho,
                                              double lo, double hi, std::complex<double> z) {
  return integrate(
      [&](double th) {
        double s = std::sin(th), c = std::cos(th);
        double x = lo + (hi - lo) * s * s;
        double jac = 2.0 * (hi - lo) * s * c;
        return std::complex<double>(rho(x) * jac) / (z - x);
      },
      0.0, std::numbers::pi / 2);
}

}  // namespace oracle
