#include "freelevy/triplet.hpp"

#include <algorithm>
#include <cmath>

#include "freelevy/error.hpp"

namespace freelevy {

const char* to_string(Flavor f) { return f == Flavor::kFree ? "free" : "classical"; }

FreeTriplet make_triplet(double a, double b, LevyMeasure r, Flavor flavor) {
  if (!std::isfinite(a)) fail(ErrorCode::kInvalidArgument, "drift must be finite");
  if (!std::isfinite(b) || b < 0.0)
    fail(ErrorCode::kInvalidArgument, "second-order part b must be finite and >= 0");
  return FreeTriplet{a, b, std::move(r), flavor};
}

double sigma_centering(double t) { return t < -1.0 ? -1.0 : (t > 1.0 ? 1.0 : t); }

FreeTriplet triplet_add(const FreeTriplet& u, const FreeTriplet& v) {
  if (u.flavor != v.flavor)
    fail(ErrorCode::kFlavorMismatch, "cannot add a free and a classical triplet");
  return FreeTriplet{u.a + v.a, u.b + v.b, u.r + v.r, u.flavor};
}

FreeTriplet triplet_scale(double c, const FreeTriplet& u) {
  if (!std::isfinite(c)) fail(ErrorCode::kInvalidArgument, "scale factor must be finite");
  if (c == 0.0) return FreeTriplet{0.0, 0.0, {}, u.flavor};
  if (c == 1.0) return u;
  double a = c * u.a;
  if (!u.r.empty()) a += levy_quadrature(u.r, integrands::scale_compensator(c));
  return FreeTriplet{a, c * c * u.b, u.r.image(c), u.flavor};
}

FreeTriplet bp_lambda(const FreeTriplet& u) {
  if (u.flavor != Flavor::kClassical)
    fail(ErrorCode::kFlavorMismatch, "bp_lambda expects a classical triplet");
  FreeTriplet v = u;
  v.flavor = Flavor::kFree;
  return v;
}

FreeTriplet bp_lambda_inv(const FreeTriplet& u) {
  if (u.flavor != Flavor::kFree)
    fail(ErrorCode::kFlavorMismatch, "bp_lambda_inv expects a free triplet");
  FreeTriplet v = u;
  v.flavor = Flavor::kClassical;
  return v;
}

namespace {

CumulantVector cumulants(const FreeTriplet& u, int p) {
  if (p < 1) fail(ErrorCode::kInvalidArgument, "cumulant order must be >= 1");
  CumulantVector k;
  k.values.resize(p);
  const bool has_r = !u.r.empty();
  k.values[0] = u.a + (has_r ? levy_quadrature(u.r, integrands::t_minus_sigma()) : 0.0);
  for (int n = 2; n <= p; ++n) {
    const double m = has_r ? levy_quadrature(u.r, integrands::power(n)) : 0.0;
    k.values[n - 1] = (n == 2 ? u.b : 0.0) + m;
  }
  return k;
}

}  // namespace

CumulantVector free_cumulants_from_triplet(const FreeTriplet& u, int p) {
  if (u.flavor != Flavor::kFree)
    fail(ErrorCode::kFlavorMismatch, "free cumulants need a free triplet");
  return cumulants(u, p);
}

CumulantVector classical_cumulants_from_triplet(const FreeTriplet& u, int p) {
  if (u.flavor != Flavor::kClassical)
    fail(ErrorCode::kFlavorMismatch, "classical cumulants need a classical triplet");
  return cumulants(u, p);
}

double triplet_mass(const FreeTriplet& u) {
  return std::abs(u.a) + u.b +
         (u.r.empty() ? 0.0 : levy_quadrature(u.r, integrands::min1_sq()));
}

bool triplets_close(const FreeTriplet& u, const FreeTriplet& v, double scalar_tol,
                    double levy_tol) {
  if (u.flavor != v.flavor) return false;
  auto near = [scalar_tol](double x, double y) {
    return std::abs(x - y) <= scalar_tol * std::max({1.0, std::abs(x), std::abs(y)});
  };
  return near(u.a, v.a) && near(u.b, v.b) && levy_close(u.r, v.r, levy_tol);
}

}  // namespace freelevy
