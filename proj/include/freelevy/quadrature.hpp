#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace freelevy {

using Complex = std::complex<double>;

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  // Subdivision budget per integrated piece. Exhaustion raises
  // ErrorCode::kQuadratureBudget; results are never silently truncated.
  int max_subdivisions = 1 << 16;
};

struct QuadratureResult {
  Complex value;
  double error_estimate = 0.0;
  int subdivisions = 0;
};

using ComplexIntegrand = std::function<Complex(double)>;

// Globally adaptive 7/15-point Gauss-Kronrod on [a, b]. Interior kinks listed
// in `breakpoints` are honoured by pre-splitting; points outside (a, b) are
// ignored.
QuadratureResult integrate_gk(const ComplexIntegrand& f, double a, double b,
                              std::span<const double> breakpoints = {},
                              const QuadratureOptions& opts = {});

double integrate_real(const std::function<double(double)>& f, double a, double b,
                      std::span<const double> breakpoints = {},
                      const QuadratureOptions& opts = {});

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// n-point Gauss-Legendre rule (Newton on the Legendre recurrence). Cached.
const GaussRule& gauss_legendre(int n);

}  // namespace freelevy
