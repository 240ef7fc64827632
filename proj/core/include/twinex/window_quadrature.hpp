#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "twinex/units.hpp"

// Integrals of polynomial-times-exponential integrands over finite windows.
// The closed-form response expressions integrate the unbounded time directions
// analytically and leave at most one bounded window variable, which is
// handled by Gauss-Legendre quadrature on pieces where the integrand is smooth.
namespace twinex::quad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Coefficients c0 + c1 x + c2 x^2 + c3 x^3.
using Poly = std::array<cplx, 4>;

/// int_0^len e^{p x} dx. len may be kInf when Re p < 0.
cplx expint(cplx p, double len);

/// int_lo^hi poly(x) e^{p x} dx, finite limits.
cplx polyexp(const Poly& poly, cplx p, double lo, double hi);

/// int_lo^hi tri(x / width) poly(x) e^{p x} dx. The limits are clipped to
/// [-width, width]; the kink at 0 is split out.
cplx tri_polyexp(const Poly& poly, cplx p, double lo, double hi, double width);

/// Convenience for poly == 1.
inline cplx tri_exp(cplx p, double lo, double hi, double width) {
  return tri_polyexp(Poly{cplx{1.0}, {}, {}, {}}, p, lo, hi, width);
}

/// Gauss-Legendre nodes and weights on [lo, hi].
struct Rule {
  std::vector<double> x;
  std::vector<double> w;
};

/// `order` must be one of 10, 20, 30.
Rule gauss_legendre(double lo, double hi, int order = 30);

/// Concatenated rule over consecutive intervals [b0, b1], [b1, b2], ...
Rule piecewise_gauss_legendre(std::span<const double> breaks, int order = 30);

/// Reference 30-point rule on [-1, 1].
const Rule& reference_rule();

/// Composite Gauss-Legendre over [lo, hi] split into `pieces` equal parts.
template <class F>
cplx integrate_interval(double lo, double hi, int pieces, F&& f) {
  const Rule& ref = reference_rule();
  const double len = (hi - lo) / pieces;
  cplx acc{};
  for (int k = 0; k < pieces; ++k) {
    const double mid = lo + (k + 0.5) * len;
    const double half = 0.5 * len;
    for (std::size_t n = 0; n < ref.x.size(); ++n) acc += half * ref.w[n] * f(mid + half * ref.x[n]);
  }
  return acc;
}

/// Pieces needed so that each carries at most ~16 radians of phase or decay;
/// the 30-point rule is then exact to rounding.
inline int pieces_for(double rate_bound, double length) {
  return 1 + static_cast<int>(rate_bound * length / 16.0);
}

template <class F>
cplx integrate(const Rule& rule, F&& f) {
  cplx acc{};
  for (std::size_t k = 0; k < rule.x.size(); ++k) acc += rule.w[k] * f(rule.x[k]);
  return acc;
}

}  // namespace twinex::quad
