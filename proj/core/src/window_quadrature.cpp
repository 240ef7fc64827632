#include "twinex/window_quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>

#include "twinex/errors.hpp"

namespace twinex::quad {
namespace {

// Moments m_k = int_0^h s^k e^{p s} ds for k = 0..K.
template <int K>
std::array<cplx, K + 1> moments(cplx p, double h) {
  std::array<cplx, K + 1> m{};
  const cplx z = p * h;
  if (std::abs(z) < 0.5) {
    // m_k = h^{k+1} sum_n z^n / (n! (n + k + 1))
    cplx term{1.0};
    for (int n = 0; n < 30; ++n) {
      for (int k = 0; k <= K; ++k) m[k] += term / static_cast<double>(n + k + 1);
      term *= z / static_cast<double>(n + 1);
      if (std::abs(term) < 1e-17) break;
    }
    double hk = h;
    for (int k = 0; k <= K; ++k, hk *= h) m[k] *= hk;
    return m;
  }
  const cplx eph = std::exp(z);
  m[0] = (eph - 1.0) / p;
  double hk = 1.0;
  for (int k = 1; k <= K; ++k) {
    hk *= h;
    m[k] = (hk * eph - static_cast<double>(k) * m[k - 1]) / p;
  }
  return m;
}

// int_lo^hi (c0 + c1 x) e^{p x} dx
cplx linexp(cplx c0, cplx c1, cplx p, double lo, double hi) {
  const auto m = moments<1>(p, hi - lo);
  return std::exp(p * lo) * ((c0 + c1 * lo) * m[0] + c1 * m[1]);
}

template <int N>
Rule boost_rule(double lo, double hi) {
  using G = boost::math::quadrature::gauss<double, N>;
  const auto& abs = G::abscissa();
  const auto& wts = G::weights();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  Rule r;
  for (std::size_t i = 0; i < abs.size(); ++i) {
    if (abs[i] == 0.0) {
      r.x.push_back(mid);
      r.w.push_back(half * wts[i]);
      continue;
    }
    r.x.push_back(mid - half * abs[i]);
    r.w.push_back(half * wts[i]);
    r.x.push_back(mid + half * abs[i]);
    r.w.push_back(half * wts[i]);
  }
  return r;
}

}  // namespace

cplx expint(cplx p, double len) {
  if (std::isinf(len)) {
    if (!(p.real() < 0.0)) throw DegenerateInputError("expint: divergent infinite window");
    return -1.0 / p;
  }
  return moments<0>(p, len)[0];
}

cplx polyexp(const Poly& c, cplx p, double lo, double hi) {
  const double h = hi - lo;
  if (h <= 0.0) return {};
  // Re-expand the polynomial around lo: x = lo + s.
  const double l = lo;
  const cplx d0 = c[0] + l * (c[1] + l * (c[2] + l * c[3]));
  const cplx d1 = c[1] + l * (2.0 * c[2] + 3.0 * l * c[3]);
  const cplx d2 = c[2] + 3.0 * l * c[3];
  const cplx d3 = c[3];
  const auto m = moments<3>(p, h);
  return std::exp(p * lo) * (d0 * m[0] + d1 * m[1] + d2 * m[2] + d3 * m[3]);
}

cplx tri_polyexp(const Poly& c, cplx p, double lo, double hi, double width) {
  lo = std::max(lo, -width);
  hi = std::min(hi, width);
  if (hi <= lo) return {};
  const double inv = 1.0 / width;
  if (c[1] == cplx{} && c[2] == cplx{} && c[3] == cplx{}) {
    cplx acc{};
    if (lo < 0.0) acc += linexp(c[0], c[0] * inv, p, lo, std::min(hi, 0.0));
    if (hi > 0.0) acc += linexp(c[0], -c[0] * inv, p, std::max(lo, 0.0), hi);
    return acc;
  }
  if (c[3] != cplx{}) throw UsageError("tri_polyexp: polynomial degree must be <= 2");
  // (1 - s x / width) * poly, with s = +1 on x >= 0 and -1 on x < 0.
  const auto times_tri = [&](double s) {
    const double k = -s * inv;
    return Poly{c[0], c[1] + k * c[0], c[2] + k * c[1], k * c[2]};
  };
  cplx acc{};
  if (lo < 0.0) acc += polyexp(times_tri(-1.0), p, lo, std::min(hi, 0.0));
  if (hi > 0.0) acc += polyexp(times_tri(1.0), p, std::max(lo, 0.0), hi);
  return acc;
}

Rule gauss_legendre(double lo, double hi, int order) {
  switch (order) {
    case 10: return boost_rule<10>(lo, hi);
    case 20: return boost_rule<20>(lo, hi);
    case 30: return boost_rule<30>(lo, hi);
    default: throw UsageError("gauss_legendre: unsupported order");
  }
}

const Rule& reference_rule() {
  static const Rule r = boost_rule<30>(-1.0, 1.0);
  return r;
}

Rule piecewise_gauss_legendre(std::span<const double> breaks, int order) {
  Rule out;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Rule r = gauss_legendre(breaks[i], breaks[i + 1], order);
    out.x.insert(out.x.end(), r.x.begin(), r.x.end());
    out.w.insert(out.w.end(), r.w.begin(), r.w.end());
  }
  return out;
}

}  // namespace twinex::quad
