#include "twinex/response.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "twinex/errors.hpp"
#include "twinex/window_quadrature.hpp"

namespace twinex {
namespace {

using quad::expint;
using quad::integrate_interval;
using quad::kInf;
using quad::pieces_for;
using quad::tri_exp;
using quad::tri_polyexp;

// omega - i gamma: the ket side propagates as e^{-i wbar x}.
cplx wbar(double w, double g) { return {w, -g}; }

cplx guarded_inverse(cplx den) {
  if (std::abs(den) < 1e-9) throw DegenerateInputError("vanishing resonance denominator");
  return 1.0 / den;
}

void require_kind(const LightSpec& spec, std::initializer_list<LightKind> kinds, const char* op) {
  spec.validate();
  for (LightKind k : kinds)
    if (spec.kind == k) return;
  throw UsageError(std::string(op) + ": light kind '" + to_string(spec.kind) + "' not supported");
}

void require_e(const ExcitonModel& m, const char* op) {
  if (m.n_e() == 0) throw DegenerateInputError(std::string(op) + ": empty e-manifold");
}

void require_f(const ExcitonModel& m, const char* op) {
  require_e(m, op);
  if (m.n_f() == 0) throw DegenerateInputError(std::string(op) + ": empty f-manifold");
}

// Window length in cm (conjugate to cm^-1).
double window(const LightSpec& spec) {
  return spec.kind == LightKind::CwPair ? kInf : units::fs_to_cm(spec.entanglement_time);
}

std::array<double, 2> photons(const LightSpec& s) { return {s.omega1, s.omega2}; }

// Largest net exponent among the terms of an integrand.
double rate_bound(std::initializer_list<cplx> ps) {
  double r = 0.0;
  for (cplx p : ps) r = std::max(r, std::abs(p));
  return r;
}

// The conjugate diagram completes the one-sided sum.
DensityMatrix e_block(const CMatrix& a) { return {Manifold::E, a + a.adjoint(), false}; }

}  // namespace

DensityMatrix TransitionAmplitudes::outer(bool normalize) const {
  DensityMatrix rho{Manifold::F, t_fg * t_fg.adjoint(), false};
  rho.data = hermitize(rho.data);
  return normalize ? rho.normalized_copy() : rho;
}

DensityMatrix rho_e_second_order(const ExcitonModel& m, const LightSpec& spec) {
  require_kind(spec, {LightKind::Twin, LightKind::Stochastic}, "rho_e_second_order");
  require_e(m, "rho_e_second_order");
  const double T = window(spec);
  const std::size_t n = m.n_e();
  // int_0^T (1 - x/T) e^{-z x} dx
  const auto phi = [T](cplx z) { return tri_exp(-z, 0.0, T, T); };
  CMatrix rho = CMatrix::Zero(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const cplx dip = m.mu_ge(a) * std::conj(m.mu_ge(b));
      if (dip == cplx{}) continue;
      cplx acc{};
      for (double wc : photons(spec)) {
        const cplx alpha{m.gamma_e(a), m.e_energies(a) - wc};
        const cplx beta{m.gamma_e(b), -(m.e_energies(b) - wc)};
        acc += (phi(alpha) + phi(beta)) * guarded_inverse(alpha + beta);
      }
      rho(a, b) = spec.amplitude * spec.amplitude * dip * acc;
    }
  }
  return {Manifold::E, hermitize(rho), false};
}

TransitionAmplitudes transition_amplitude_fg(const ExcitonModel& m, const LightSpec& spec) {
  require_kind(spec, {LightKind::Twin, LightKind::CwPair}, "transition_amplitude_fg");
  require_f(m, "transition_amplitude_fg");
  const double T = window(spec);
  // -i * int_0^T e^{i (w - wbar_e) s} ds, i.e. -(e^{i (w - wbar_e) T} - 1) / (w - wbar_e);
  // the cw limit is 1/(w - wbar_e)
  CVector d_sum = CVector::Zero(static_cast<Eigen::Index>(m.n_e()));
  for (std::size_t e = 0; e < m.n_e(); ++e)
    for (double w : photons(spec)) {
      const cplx x = w - wbar(m.e_energies(e), m.gamma_e(e));
      guarded_inverse(x);
      d_sum(e) -= kI * expint(kI * x, T);
    }
  TransitionAmplitudes out;
  out.t_fg = CVector::Zero(static_cast<Eigen::Index>(m.n_f()));
  for (std::size_t f = 0; f < m.n_f(); ++f) {
    const cplx lf = guarded_inverse(spec.omega_p() - wbar(m.f_energies(f), m.gamma_f(f)));
    cplx acc{};
    for (std::size_t e = 0; e < m.n_e(); ++e) acc += m.mu_ge(e) * m.mu_ef(f, e) * d_sum(e);
    out.t_fg(f) = spec.amplitude * lf * acc;
  }
  return out;
}

DensityMatrix rho_f_entangled(const ExcitonModel& m, const LightSpec& spec, bool normalize) {
  require_kind(spec, {LightKind::Twin}, "rho_f_entangled");
  return transition_amplitude_fg(m, spec).outer(normalize);
}

DensityMatrix rho_f_cw_pair(const ExcitonModel& m, const LightSpec& spec) {
  require_kind(spec, {LightKind::CwPair}, "rho_f_cw_pair");
  return transition_amplitude_fg(m, spec).outer(false);
}

namespace {

// Diagram II for amplitude-type (twin or cw) light. The ket leg collapses to
// the transition amplitude; the bra leg absorbs one photon of the pair.
DensityMatrix fourth_amplitude_type(const ExcitonModel& m, const LightSpec& spec) {
  const double T = window(spec);
  const TransitionAmplitudes t = transition_amplitude_fg(m, spec);
  const std::size_t n = m.n_e();
  CMatrix a_mat = CMatrix::Zero(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const cplx lam{m.gamma_e(a) + m.gamma_e(b), m.e_energies(a) - m.e_energies(b)};
      cplx w{};
      for (double wg : photons(spec)) {
        const cplx mu1{m.gamma_e(b), wg - m.e_energies(b)};
        const cplx mu2{m.gamma_e(a), m.e_energies(a) - wg};
        w += expint(-mu1, T) + expint(-mu2, T);
      }
      w *= guarded_inverse(lam);
      cplx acc{};
      for (std::size_t f = 0; f < m.n_f(); ++f) acc += t.t_fg(f) * std::conj(m.mu_ef(f, a));
      a_mat(a, b) = spec.amplitude * acc * std::conj(m.mu_ge(b)) * w;
    }
  }
  return e_block(a_mat);
}

}  // namespace

DensityMatrix rho_e_fourth_entangled(const ExcitonModel& m, const LightSpec& spec) {
  require_kind(spec, {LightKind::Twin}, "rho_e_fourth_entangled");
  require_f(m, "rho_e_fourth_entangled");
  return fourth_amplitude_type(m, spec);
}

DensityMatrix rho_e_fourth_cw_pair(const ExcitonModel& m, const LightSpec& spec) {
  require_kind(spec, {LightKind::CwPair}, "rho_e_fourth_cw_pair");
  require_f(m, "rho_e_fourth_cw_pair");
  return fourth_amplitude_type(m, spec);
}

DensityMatrix rho_e_raman_entangled(const ExcitonModel& m, const LightSpec& spec) {
  require_kind(spec, {LightKind::Twin}, "rho_e_raman_entangled");
  require_e(m, "rho_e_raman_entangled");
  const double T = window(spec);
  const std::size_t n = m.n_e();
  const auto w = photons(spec);
  const double amp2 = spec.amplitude * spec.amplitude;
  CMatrix a_mat = CMatrix::Zero(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const cplx dip_ab = m.mu_ge(a) * std::conj(m.mu_ge(b));
      if (dip_ab == cplx{}) continue;
      const cplx lam{m.gamma_e(a) + m.gamma_e(b), m.e_energies(a) - m.e_energies(b)};
      const cplx inv_lam = guarded_inverse(lam);
      cplx acc{};
      for (std::size_t ep = 0; ep < n; ++ep) {
        const double dip_ep = std::norm(m.mu_ge(ep));
        if (dip_ep == 0.0) continue;
        for (int c = 0; c < 2; ++c) {
          for (int g = 0; g < 2; ++g) {
            const cplx py{-m.gamma_e(ep), w[c] - m.e_energies(ep)};
            const cplx pv{-m.gamma_e(b), -(w[1 - c] - m.e_energies(b))};
            const cplx pd{-m.gamma_e(b), -(w[1 - g] - m.e_energies(b))};
            const auto f = [&](double v) {
              const cplx dd = std::exp(lam * v) * quad::polyexp({1.0, 0.0, 0.0, 0.0}, pd + lam, -T, -v) +
                              quad::polyexp({1.0, 0.0, 0.0, 0.0}, pd, -v, T);
              return expint(py, T - v) * std::exp(pv * v) * dd;
            };
            acc += dip_ep * integrate_interval(0.0, T, pieces_for(std::abs(pv) + std::abs(py) + rate_bound({lam, pd}), T), f);
          }
        }
      }
      a_mat(a, b) = -amp2 * dip_ab * inv_lam * acc;
    }
  }
  return e_block(a_mat);
}

DensityMatrix rho_f_stochastic(const ExcitonModel& m, const LightSpec& spec) {
  require_kind(spec, {LightKind::Stochastic}, "rho_f_stochastic");
  require_f(m, "rho_f_stochastic");
  const double T = window(spec);
  const std::size_t ne = m.n_e();
  const std::size_t nf = m.n_f();
  const auto w = photons(spec);
  const double amp4 = std::pow(spec.amplitude, 4);
  const auto we = [&](std::size_t e) { return wbar(m.e_energies(e), m.gamma_e(e)); };
  const auto wf = [&](std::size_t f) { return wbar(m.f_energies(f), m.gamma_f(f)); };
  const auto lam_e = [&](std::size_t e, std::size_t ep) {
    return cplx{m.gamma_e(e) + m.gamma_e(ep), m.e_energies(e) - m.e_energies(ep)};
  };
  const auto lam_f = [&](std::size_t fi, std::size_t fj) {
    return cplx{m.gamma_f(fi) + m.gamma_f(fj), m.f_energies(fi) - m.f_energies(fj)};
  };

  // Pairing (13)(24) integrates over b = x2 - x4 with the x1 - x3 integral
  // done analytically; pairing (14)(23) likewise over w = x2 - x4. Both
  // integrands factor into f-pair, (e, e') and photon parts, so one node set
  // serves every term.
  double rate = 0.0;
  for (std::size_t fi = 0; fi < nf; ++fi)
    for (std::size_t fj = fi; fj < nf; ++fj)
      for (std::size_t e = 0; e < ne; ++e)
        for (std::size_t ep = 0; ep < ne; ++ep) {
          const cplx big_m = kI * wf(fi) - kI * we(e) - kI * std::conj(we(ep));
          for (double wc : w)
            for (double wd : w) {
              const cplx pa = kI * (wc - we(e));
              const cplx pb = kI * (wd - wf(fi) + we(e));
              rate = std::max(rate, rate_bound({pb - lam_e(e, ep), pb + pa, pb, big_m, pa - big_m}) +
                                        std::abs(lam_f(fi, fj)));
            }
        }
  const int np = pieces_for(rate, T);
  std::vector<double> breaks;
  for (int k = -np; k <= np; ++k) breaks.push_back(T * k / np);
  const quad::Rule rule = quad::piecewise_gauss_legendre(breaks);
  const std::size_t nk = rule.x.size();

  // q[e][ep][k]: everything but the f-pair factor, summed over photons
  std::vector<CMatrix> q(nk, CMatrix::Zero(ne, ne));
  for (std::size_t k = 0; k < nk; ++k) {
    const double x = rule.x[k];
    cplx fd{};
    for (double wd : w) fd += std::exp(kI * wd * x);
    fd *= rule.w[k] * tri(x / T);
    CVector h = CVector::Zero(ne);
    CVector j = CVector::Zero(ne);
    for (std::size_t e = 0; e < ne; ++e) {
      const cplx ph = std::exp(kI * we(e) * x);
      for (double wc : w) h(e) += tri_exp(kI * (wc - we(e)), x, T, T);
      h(e) *= ph;
      const cplx wep_c = std::conj(we(e));
      for (double wd : w) j(e) += tri_exp(kI * (wd - wep_c), -T, x, T);
      j(e) *= std::exp(kI * wep_c * x);
    }
    for (std::size_t e = 0; e < ne; ++e) {
      const cplx ph = std::exp(kI * we(e) * x);
      for (std::size_t ep = 0; ep < ne; ++ep) {
        const cplx le = lam_e(e, ep);
        cplx g{};
        for (double wc : w) {
          const cplx pa = kI * (wc - we(e));
          g += std::exp(-le * x) * tri_exp(pa + le, -T, x, T) + tri_exp(pa, x, T, T);
        }
        q[k](e, ep) = fd * ph * g * guarded_inverse(le) + rule.w[k] * h(e) * j(ep);
      }
    }
  }

  CMatrix ket(ne, nf);
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t e = 0; e < ne; ++e) ket(e, f) = m.mu_ge(e) * m.mu_ef(f, e);
  CMatrix rho = CMatrix::Zero(nf, nf);
  for (std::size_t fi = 0; fi < nf; ++fi) {
    const cplx wfi = wf(fi);
    for (std::size_t fj = fi; fj < nf; ++fj) {
      const cplx lf = lam_f(fi, fj);
      cplx acc{};
      for (std::size_t k = 0; k < nk; ++k) {
        const double x = rule.x[k];
        const cplx below = x < 0.0 ? std::exp(lf * x) : cplx{1.0};
        const cplx ff = std::exp(-kI * wfi * x) * below;
        acc += ff * (ket.col(fi).transpose() * q[k] * ket.col(fj).conjugate())(0, 0);
      }
      rho(fi, fj) = amp4 * guarded_inverse(lf) * acc;
      if (fj != fi) rho(fj, fi) = std::conj(rho(fi, fj));
    }
  }
  return {Manifold::F, hermitize(rho), false};
}

DensityMatrix rho_e_fourth_stochastic(const ExcitonModel& m, const LightSpec& spec) {
  require_kind(spec, {LightKind::Stochastic}, "rho_e_fourth_stochastic");
  require_f(m, "rho_e_fourth_stochastic");
  const double T = window(spec);
  const std::size_t ne = m.n_e();
  const std::size_t nf = m.n_f();
  const auto w = photons(spec);
  const double amp4 = std::pow(spec.amplitude, 4);
  const auto we = [&](std::size_t e) { return wbar(m.e_energies(e), m.gamma_e(e)); };
  const auto wf = [&](std::size_t f) { return wbar(m.f_energies(f), m.gamma_f(f)); };

  // Both pairings leave a 1D integral over v in [0, T] whose only f
  // dependence is e^{-i wbar_f v}; the f sum is folded into u below and every
  // term shares one node set.
  double rate = 0.0;
  for (std::size_t a = 0; a < ne; ++a)
    for (std::size_t b = 0; b < ne; ++b) {
      const cplx wb_c = std::conj(we(b));
      const cplx l1 = kI * we(a) - kI * wb_c;
      for (std::size_t ep = 0; ep < ne; ++ep) {
        const cplx l2 = kI * we(ep) - kI * wb_c;
        for (std::size_t f = 0; f < nf; ++f)
          for (double wc : w)
            for (double wg : w) {
              const cplx py = -kI * we(ep) + kI * wc;
              const cplx pv = -kI * wf(f) + kI * wc + kI * wb_c;
              const cplx pd = kI * wb_c - kI * wg;
              const cplx pv1 = -kI * wf(f) + kI * wb_c + kI * wg;
              const cplx pd1 = kI * wb_c - kI * wc;
              rate = std::max({rate, rate_bound({pv - py, pv}) + rate_bound({pd, l1}),
                               std::abs(pv1) + rate_bound({pd1, l1, l2})});
            }
      }
    }
  const int np = pieces_for(rate, T);
  std::vector<double> breaks;
  for (int k = 0; k <= np; ++k) breaks.push_back(T * k / np);
  const quad::Rule rule = quad::piecewise_gauss_legendre(breaks);

  CMatrix a_mat = CMatrix::Zero(ne, ne);
  CMatrix u(ne, ne);
  for (std::size_t k = 0; k < rule.x.size(); ++k) {
    const double v = rule.x[k];
    // u(ep, a) = sum_f mu_ge(ep) mu_ef(f, ep) conj(mu_ef(f, a)) e^{-i wbar_f v}
    u.setZero();
    for (std::size_t f = 0; f < nf; ++f) {
      const cplx ph = std::exp(-kI * wf(f) * v);
      for (std::size_t ep = 0; ep < ne; ++ep) {
        const cplx left = m.mu_ge(ep) * m.mu_ef(f, ep) * ph;
        if (left == cplx{}) continue;
        for (std::size_t a = 0; a < ne; ++a) u(ep, a) += left * std::conj(m.mu_ef(f, a));
      }
    }
    cplx sum_g{};
    for (double wg : w) sum_g += std::exp(kI * wg * v);
    CVector y(ne);
    for (std::size_t ep = 0; ep < ne; ++ep) {
      y(ep) = 0.0;
      for (double wc : w) y(ep) += tri_exp(-kI * we(ep) + kI * wc, v, T, T);
    }
    for (std::size_t b = 0; b < ne; ++b) {
      if (m.mu_ge(b) == cplx{}) continue;
      const cplx wb_c = std::conj(we(b));
      for (std::size_t a = 0; a < ne; ++a) {
        const cplx l1 = kI * we(a) - kI * wb_c;  // Lambda_ab
        const cplx inv_l1 = guarded_inverse(l1);
        const cplx e1 = std::exp(l1 * v);
        // pairing (13)(24): inner integral over d
        cplx dv{};
        for (double wg : w) {
          const cplx pd = kI * wb_c - kI * wg;
          dv += e1 * tri_exp(pd + l1, -T, -v, T) + tri_exp(pd, -v, T, T);
        }
        cplx acc{};
        for (std::size_t ep = 0; ep < ne; ++ep) {
          if (u(ep, a) == cplx{}) continue;
          const cplx wep = we(ep);
          const cplx l2 = kI * wep - kI * wb_c;  // Lambda_e'b
          const cplx inv_l2 = guarded_inverse(l2);
          const cplx dl = l2 - l1;
          const bool degenerate = std::abs(dl) * 2.0 * T < 1e-5;
          cplx r = inv_l1 * std::exp(kI * (wb_c + wep) * v) * y(ep) * dv;
          // pairing (14)(23)
          cplx s1{};
          for (double wc : w) {
            const cplx pd1 = kI * wb_c - kI * wc;
            const cplx full = tri_exp(pd1, -T, T, T) * inv_l1 * inv_l2;
            const cplx i0 = tri_exp(pd1, -T, -v, T);
            const cplx i1 = tri_exp(pd1 + l1, -T, -v, T);
            cplx delta;
            if (degenerate) {
              const quad::Poly poly{-v - 0.5 * dl * v * v, -1.0 - dl * v, -0.5 * dl, 0.0};
              delta = e1 * tri_polyexp(poly, pd1 + l1, -T, -v, T);
            } else {
              delta = (e1 * i1 - std::exp(l2 * v) * tri_exp(pd1 + l2, -T, -v, T)) / dl;
            }
            const cplx tail = inv_l2 * (inv_l1 * i0 - e1 * inv_l1 * i1 - delta);
            s1 += full - tail;
          }
          r += tri(v / T) * std::exp(kI * wb_c * v) * sum_g * s1;
          acc += u(ep, a) * r;
        }
        a_mat(a, b) += rule.w[k] * acc;
      }
    }
  }
  for (std::size_t b = 0; b < ne; ++b) a_mat.col(b) *= -amp4 * std::conj(m.mu_ge(b));
  return e_block(a_mat);
}

FourthOrderDensities fourth_order_densities(const ExcitonModel& m, const LightSpec& spec) {
  switch (spec.kind) {
    case LightKind::Twin: return {rho_e_fourth_entangled(m, spec), rho_f_entangled(m, spec)};
    case LightKind::Stochastic: return {rho_e_fourth_stochastic(m, spec), rho_f_stochastic(m, spec)};
    case LightKind::CwPair: return {rho_e_fourth_cw_pair(m, spec), rho_f_cw_pair(m, spec)};
  }
  throw UsageError("unknown light kind");
}

DensityMatrix rho_f_fourth(const ExcitonModel& m, const LightSpec& spec) {
  switch (spec.kind) {
    case LightKind::Twin: return rho_f_entangled(m, spec);
    case LightKind::Stochastic: return rho_f_stochastic(m, spec);
    case LightKind::CwPair: return rho_f_cw_pair(m, spec);
  }
  throw UsageError("unknown light kind");
}

DensityMatrix rho_e_fourth(const ExcitonModel& m, const LightSpec& spec) {
  switch (spec.kind) {
    case LightKind::Twin: return rho_e_fourth_entangled(m, spec);
    case LightKind::Stochastic: return rho_e_fourth_stochastic(m, spec);
    case LightKind::CwPair: return rho_e_fourth_cw_pair(m, spec);
  }
  throw UsageError("unknown light kind");
}

}  // namespace twinex
