#include "twinex/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "twinex/errors.hpp"

namespace twinex {

const char* to_string(OracleTerm t) {
  switch (t) {
    case OracleTerm::E2: return "e2";
    case OracleTerm::EI: return "eI";
    case OracleTerm::EII: return "eII";
    case OracleTerm::FIII: return "fIII";
  }
  return "?";
}

OracleTerm oracle_term_from_string(const std::string& s) {
  if (s == "e2") return OracleTerm::E2;
  if (s == "eI") return OracleTerm::EI;
  if (s == "eII") return OracleTerm::EII;
  if (s == "fIII") return OracleTerm::FIII;
  throw ConfigError("unknown oracle term '" + s + "'");
}

OracleOrder order_of(OracleTerm t) { return t == OracleTerm::E2 ? OracleOrder::Second : OracleOrder::Fourth; }

double default_horizon(const ExcitonModel& m) {
  double g = m.gamma_e.size() ? m.gamma_e.minCoeff() : 200.0;
  if (m.gamma_f.size()) g = std::min(g, m.gamma_f.minCoeff());
  return 10.0 / units::wavenumber_to_rate(g);
}

namespace oracle_detail {
namespace {

const double kappa = units::kPhaseFactor;

// Everything tied to one grid: nodes, trapezoid weights, absolute times,
// ordering step function and the field correlators on node pairs.
struct Context {
  const ExcitonModel& m;
  const LightSpec& s;
  int n1;  // number of nodes
  RVector x, w, tau;
  CMatrix theta;

  Context(const ExcitonModel& model, const LightSpec& spec, const Grid& g) : m(model), s(spec), n1(g.n + 1) {
    x.resize(n1);
    w = RVector::Constant(n1, g.h);
    w(0) = w(n1 - 1) = 0.5 * g.h;
    tau.resize(n1);
    for (int k = 0; k < n1; ++k) {
      x(k) = k * g.h;
      tau(k) = g.n * g.h - x(k);
    }
    theta = CMatrix::Zero(n1, n1);
    for (int i = 0; i < n1; ++i) {
      theta(i, i) = 0.5;
      for (int j = 0; j < i; ++j) theta(i, j) = 1.0;
    }
  }

  // Symmetric two-photon amplitude of the pair of nodes (i, j). On the rect
  // edge the one-sided mean (half the inside value) is used.
  cplx amp(int i, int j) const {
    const double hi = std::max(tau(i), tau(j));
    const double lo = std::min(tau(i), tau(j));
    if (s.kind == LightKind::CwPair) return cw_two_photon_amplitude(hi, lo, s);
    const double T = s.entanglement_time;
    if (std::abs((hi - lo) - T) <= 1e-9 * T) return 0.5 * twin_two_photon_amplitude(hi, hi - T * (1.0 - 1e-9), s);
    return twin_two_photon_amplitude(hi, lo, s);
  }

  CMatrix amp_matrix() const {
    CMatrix a(n1, n1);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = amp(i, j);
    return a;
  }

  // <E^dagger(bra) E(ket)> on nodes, rows = ket node.
  CMatrix two_point_matrix() const {
    CMatrix g(n1, n1);
    for (int k = 0; k < n1; ++k)
      for (int b = 0; b < n1; ++b)
        g(k, b) = s.kind == LightKind::Twin ? twin_two_point(tau(b), tau(k), s) : stochastic_two_point(tau(b), tau(k), s);
    return g;
  }

  static cplx rate(double wv, double gm) { return kappa * cplx{wv, -gm}; }

  // Ket propagation e^{-i r x}.
  CVector ket(cplx r) const {
    CVector v(n1);
    for (int k = 0; k < n1; ++k) v(k) = std::exp(-kI * r * x(k));
    return v;
  }
  CVector bra(cplx r) const { return ket(r).conjugate(); }

  // Theta(x_i - x_j) e^{-i r (x_i - x_j)}, rows = earlier node i.
  CMatrix ordered_propagator(cplx r) const {
    CMatrix p = CMatrix::Zero(n1, n1);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j <= i; ++j) p(i, j) = theta(i, j) * std::exp(-kI * r * (x(i) - x(j)));
    return p;
  }

  CVector weighted(const CVector& v) const { return w.cast<cplx>().cwiseProduct(v); }
  CMatrix diag_w() const { return w.cast<cplx>().asDiagonal(); }
};

cplx e_rate(const ExcitonModel& m, std::size_t e) { return Context::rate(m.e_energies(e), m.gamma_e(e)); }
cplx f_rate(const ExcitonModel& m, std::size_t f) { return Context::rate(m.f_energies(f), m.gamma_f(f)); }

DensityMatrix second_order(const Context& c) {
  const std::size_t ne = c.m.n_e();
  const CMatrix g = c.two_point_matrix();
  CMatrix r(ne, c.n1), b(ne, c.n1);
  for (std::size_t a = 0; a < ne; ++a) {
    r.row(a) = (c.m.mu_ge(a) * c.weighted(c.ket(e_rate(c.m, a)))).transpose();
    b.row(a) = (std::conj(c.m.mu_ge(a)) * c.weighted(c.bra(e_rate(c.m, a)))).transpose();
  }
  return {Manifold::E, kappa * kappa * r * g * b.transpose(), false};
}

// -kappa^2 sum_{i,j} w_i w_j Theta_ij sum_e mu_ge mu_ef e^{-i r_e (x_i - x_j)} e^{-i r_f x_j} amp(i, j)
CVector amplitude_fg(const Context& c) {
  const CMatrix a = c.amp_matrix();
  CMatrix v(c.m.n_e(), c.n1);
  for (std::size_t e = 0; e < c.m.n_e(); ++e) {
    const CMatrix p = c.ordered_propagator(e_rate(c.m, e)).cwiseProduct(a);
    v.row(e) = (p.transpose() * c.weighted(CVector::Ones(c.n1))).transpose();
  }
  CVector out(c.m.n_f());
  for (std::size_t f = 0; f < c.m.n_f(); ++f) {
    CVector acc = CVector::Zero(c.n1);
    for (std::size_t e = 0; e < c.m.n_e(); ++e) acc += c.m.mu_ge(e) * c.m.mu_ef(f, e) * v.row(e).transpose();
    out(f) = -kappa * kappa * c.weighted(c.ket(f_rate(c.m, f))).cwiseProduct(acc).sum();
  }
  return out;
}

// Ket-side kernels K_f(1,2) of the g -> e -> f ladder, weights included.
std::vector<CMatrix> ladder_kernels(const Context& c) {
  std::vector<CMatrix> props;
  for (std::size_t e = 0; e < c.m.n_e(); ++e) props.push_back(c.ordered_propagator(e_rate(c.m, e)));
  std::vector<CMatrix> k;
  for (std::size_t f = 0; f < c.m.n_f(); ++f) {
    CMatrix acc = CMatrix::Zero(c.n1, c.n1);
    for (std::size_t e = 0; e < c.m.n_e(); ++e) acc += (c.m.mu_ge(e) * c.m.mu_ef(f, e)) * props[e];
    const CVector col = c.weighted(c.ket(f_rate(c.m, f)));
    k.push_back(-(c.diag_w() * acc * col.asDiagonal()));
  }
  return k;
}

DensityMatrix f_stochastic(const Context& c) {
  const std::size_t nf = c.m.n_f();
  const CMatrix g = c.two_point_matrix();
  const std::vector<CMatrix> k = ladder_kernels(c);
  CMatrix rho(nf, nf);
  for (std::size_t fj = 0; fj < nf; ++fj) {
    const CMatrix kc = k[fj].conjugate();
    const CMatrix pair = g * kc * g.transpose() + g * kc.transpose() * g.transpose();
    for (std::size_t fi = 0; fi < nf; ++fi) rho(fi, fj) = k[fi].cwiseProduct(pair).sum();
  }
  return {Manifold::F, std::pow(kappa, 4) * rho, false};
}

struct EPaths {
  std::vector<CMatrix> p;   // e' propagators
  std::vector<CMatrix> q;   // f propagators
  std::vector<CVector> r;   // weighted ket e^{-i r_a x}
  std::vector<CVector> b;   // weighted bra e^{+i conj(r_b) x}
};

EPaths e_paths(const Context& c, bool need_f) {
  EPaths out;
  for (std::size_t e = 0; e < c.m.n_e(); ++e) {
    out.p.push_back(c.ordered_propagator(e_rate(c.m, e)));
    out.r.push_back(c.weighted(c.ket(e_rate(c.m, e))));
    out.b.push_back(c.weighted(c.bra(e_rate(c.m, e))));
  }
  if (need_f)
    for (std::size_t f = 0; f < c.m.n_f(); ++f) out.q.push_back(c.ordered_propagator(f_rate(c.m, f)));
  return out;
}

DensityMatrix finish_e(const CMatrix& a) { return {Manifold::E, std::pow(kappa, 4) * (a + a.adjoint()), false}; }

cplx eii_coef(const ExcitonModel& m, std::size_t ep, std::size_t f, std::size_t a, std::size_t b) {
  return -m.mu_ge(ep) * m.mu_ef(f, ep) * std::conj(m.mu_ef(f, a)) * std::conj(m.mu_ge(b));
}

DensityMatrix eii_amplitude(const Context& c) {
  const std::size_t ne = c.m.n_e(), nf = c.m.n_f();
  const EPaths ps = e_paths(c, true);
  const CMatrix amp = c.amp_matrix();
  std::vector<CVector> z;
  for (std::size_t b = 0; b < ne; ++b) z.push_back(amp.conjugate() * ps.b[b]);
  CMatrix a_mat = CMatrix::Zero(ne, ne);
  for (std::size_t ep = 0; ep < ne; ++ep) {
    const CVector xv = ps.p[ep].cwiseProduct(amp).transpose() * c.w.cast<cplx>();
    for (std::size_t f = 0; f < nf; ++f) {
      const CVector y = ps.q[f].transpose() * c.weighted(xv);
      for (std::size_t a = 0; a < ne; ++a) {
        const CVector ry = ps.r[a].cwiseProduct(y);
        for (std::size_t b = 0; b < ne; ++b) a_mat(a, b) += eii_coef(c.m, ep, f, a, b) * ry.cwiseProduct(z[b]).sum();
      }
    }
  }
  return finish_e(a_mat);
}

DensityMatrix eii_stochastic(const Context& c) {
  const std::size_t ne = c.m.n_e(), nf = c.m.n_f();
  const EPaths ps = e_paths(c, true);
  const CMatrix g = c.two_point_matrix();
  const CMatrix dw = c.diag_w();
  std::vector<CVector> gb;
  for (std::size_t b = 0; b < ne; ++b) gb.push_back(g * ps.b[b]);
  CMatrix a_mat = CMatrix::Zero(ne, ne);
  for (std::size_t ep = 0; ep < ne; ++ep) {
    const CMatrix ct = ps.p[ep].transpose() * dw * g;  // C(2,3) = sum_1 w1 P(1,2) G(1,3)
    std::vector<CVector> h;
    for (std::size_t b = 0; b < ne; ++b) h.push_back(c.weighted(ps.p[ep].transpose() * c.weighted(gb[b])));
    for (std::size_t f = 0; f < nf; ++f) {
      const CMatrix qg = ps.q[f].cwiseProduct(g);
      const CMatrix qc = ps.q[f].cwiseProduct(ct);
      for (std::size_t a = 0; a < ne; ++a) {
        const CVector u1 = qg * ps.r[a];
        const CVector u2 = qc * ps.r[a];
        for (std::size_t b = 0; b < ne; ++b) {
          const cplx t1 = h[b].cwiseProduct(u1).sum();
          const cplx t2 = c.weighted(gb[b]).cwiseProduct(u2).sum();
          a_mat(a, b) += eii_coef(c.m, ep, f, a, b) * (t1 + t2);
        }
      }
    }
  }
  return finish_e(a_mat);
}

DensityMatrix ei_twin(const Context& c) {
  const std::size_t ne = c.m.n_e();
  const EPaths ps = e_paths(c, false);
  const CMatrix amp = c.amp_matrix();
  std::vector<CVector> z;
  for (std::size_t b = 0; b < ne; ++b) z.push_back(c.weighted(amp.conjugate() * ps.b[b]));
  CMatrix a_mat = CMatrix::Zero(ne, ne);
  for (std::size_t ep = 0; ep < ne; ++ep) {
    const double dip = std::norm(c.m.mu_ge(ep));
    if (dip == 0.0) continue;
    const CMatrix ct = (ps.p[ep].transpose() * c.diag_w() * amp).cwiseProduct(c.theta);
    for (std::size_t a = 0; a < ne; ++a) {
      const CVector u = ct * ps.r[a];
      for (std::size_t b = 0; b < ne; ++b) {
        const cplx coef = -dip * c.m.mu_ge(a) * std::conj(c.m.mu_ge(b));
        a_mat(a, b) += coef * z[b].cwiseProduct(u).sum();
      }
    }
  }
  return finish_e(a_mat);
}

void check_supported(const LightSpec& s, OracleTerm which, const ExcitonModel& m) {
  s.validate();
  const bool ok = [&] {
    switch (which) {
      case OracleTerm::E2: return s.kind != LightKind::CwPair;
      case OracleTerm::EI: return s.kind == LightKind::Twin;
      case OracleTerm::EII:
      case OracleTerm::FIII: return true;
    }
    return false;
  }();
  if (!ok) throw UsageError(std::string("oracle: term ") + to_string(which) + " undefined for " + to_string(s.kind) + " light");
  if (m.n_e() == 0) throw DegenerateInputError("oracle: empty e-manifold");
  if ((which == OracleTerm::EII || which == OracleTerm::FIII) && m.n_f() == 0)
    throw DegenerateInputError("oracle: empty f-manifold");
}

}  // namespace

DensityMatrix on_grid(const ExcitonModel& m, const LightSpec& s, OracleTerm which, const Grid& g) {
  check_supported(s, which, m);
  const Context c(m, s, g);
  switch (which) {
    case OracleTerm::E2: return second_order(c);
    case OracleTerm::EI: return ei_twin(c);
    case OracleTerm::EII: return s.kind == LightKind::Stochastic ? eii_stochastic(c) : eii_amplitude(c);
    case OracleTerm::FIII: {
      if (s.kind == LightKind::Stochastic) return f_stochastic(c);
      const CVector t = amplitude_fg(c);
      return {Manifold::F, t * t.adjoint(), false};
    }
  }
  throw UsageError("oracle: unknown term");
}

DensityMatrix naive_on_grid(const ExcitonModel& m, const LightSpec& s, OracleTerm which, const Grid& g) {
  check_supported(s, which, m);
  const Context c(m, s, g);
  if (which == OracleTerm::E2) return second_order(c);
  const int n1 = c.n1;
  const auto four = [&](int k1, int k2, int b3, int b4) -> cplx {
    // E at k1, k2; E^dagger at b3, b4
    const auto& t = c.tau;
    switch (s.kind) {
      case LightKind::Twin: return twin_four_point(t(b3), t(b4), t(k2), t(k1), s);
      case LightKind::Stochastic: return stochastic_four_point(t(k1), t(k2), t(b3), t(b4), s);
      case LightKind::CwPair: return std::conj(c.amp(b3, b4)) * c.amp(k2, k1);
    }
    return {};
  };
  const auto prop = [&](cplx r, int i, int j) { return c.theta(i, j) * std::exp(-kI * r * (c.x(i) - c.x(j))); };
  const std::size_t ne = m.n_e(), nf = m.n_f();
  if (which == OracleTerm::FIII) {
    CMatrix rho = CMatrix::Zero(nf, nf);
    const std::vector<CMatrix> k = ladder_kernels(c);
    for (int i1 = 0; i1 < n1; ++i1)
      for (int i2 = 0; i2 <= i1; ++i2)
        for (int i3 = 0; i3 < n1; ++i3)
          for (int i4 = 0; i4 <= i3; ++i4) {
            const cplx fld = four(i1, i2, i3, i4);
            if (fld == cplx{}) continue;
            for (std::size_t fi = 0; fi < nf; ++fi)
              for (std::size_t fj = 0; fj < nf; ++fj)
                rho(fi, fj) += k[fi](i1, i2) * std::conj(k[fj](i3, i4)) * fld;
          }
    return {Manifold::F, std::pow(kappa, 4) * rho, false};
  }
  CMatrix a_mat = CMatrix::Zero(ne, ne);
  for (int i1 = 0; i1 < n1; ++i1)
    for (int i2 = 0; i2 <= i1; ++i2)
      for (int i3 = 0; i3 <= i2; ++i3)
        for (int i4 = 0; i4 < n1; ++i4) {
          const double wt = c.w(i1) * c.w(i2) * c.w(i3) * c.w(i4);
          for (std::size_t ep = 0; ep < ne; ++ep) {
            const cplx p12 = prop(e_rate(m, ep), i1, i2);
            for (std::size_t a = 0; a < ne; ++a) {
              const cplx r3 = std::exp(-kI * e_rate(m, a) * c.x(i3));
              for (std::size_t b = 0; b < ne; ++b) {
                const cplx b4 = std::exp(kI * std::conj(e_rate(m, b)) * c.x(i4));
                if (which == OracleTerm::EI) {
                  const cplx coef = -std::norm(m.mu_ge(ep)) * m.mu_ge(a) * std::conj(m.mu_ge(b));
                  a_mat(a, b) += coef * wt * p12 * c.theta(i2, i3) * r3 * b4 * four(i1, i3, i2, i4);
                  continue;
                }
                for (std::size_t f = 0; f < nf; ++f)
                  a_mat(a, b) += eii_coef(m, ep, f, a, b) * wt * p12 * prop(f_rate(m, f), i2, i3) * r3 * b4 *
                                 four(i1, i2, i3, i4);
              }
            }
          }
        }
  return finish_e(a_mat);
}

}  // namespace oracle_detail

namespace {


oracle_detail::Grid start_grid(const ExcitonModel& m, const LightSpec& s, const OracleConfig& cfg) {
  if (cfg.n_steps < 64) throw UsageError("oracle: n_steps must be >= 64");
  const double t_min = 0.5 * default_horizon(m);
  const double t_max = cfg.t_max > 0.0 ? cfg.t_max : default_horizon(m);
  if (t_max < t_min * (1.0 - 1e-12)) throw UsageError("oracle: t_max below 5 / gamma_min");
  oracle_detail::Grid c;
  if (s.kind == LightKind::CwPair) {
    c.h = t_max / cfg.n_steps;
    c.n = cfg.n_steps;
  } else {
    // T is an integer number of steps so window edges sit on nodes
    const double T = s.entanglement_time;
    const int per_window = std::max(1, static_cast<int>(std::ceil(cfg.n_steps * T / t_max)));
    c.h = T / per_window;
    c.n = static_cast<int>(std::ceil(t_max / c.h - 1e-9));
  }
  return c;
}

// Trapezoid values on grids of step h, h/2, h/4, ... until two successive
// ones agree to tol; the last pair is Richardson-extrapolated.
template <class F>
auto converge(const oracle_detail::Grid& start, int refinements, double tol, const char* what, F&& eval) {
  oracle_detail::Grid g = start;
  auto coarse = eval(g);
  for (int level = 0;; ++level) {
    g = {0.5 * g.h, 2 * g.n};
    auto fine = eval(g);
    const double nc = coarse.norm(), nf = fine.norm();
    if (nf == 0.0 && nc == 0.0) return fine;
    if ((fine - coarse).norm() <= tol * std::max(nf, nc)) return decltype(fine)((4.0 * fine - coarse) / 3.0);
    if (level >= refinements)
      throw ConvergenceError(std::string("oracle did not converge for ") + what, nc, nf);
    coarse = std::move(fine);
  }
}

}  // namespace

DensityMatrix time_domain_oracle(const ExcitonModel& m, const LightSpec& s, OracleTerm which, OracleConfig cfg) {
  if (cfg.order != order_of(which)) cfg.order = order_of(which);
  const oracle_detail::Grid start = start_grid(m, s, cfg);
  const Manifold manifold = which == OracleTerm::FIII ? Manifold::F : Manifold::E;
  const CMatrix data = converge(start, cfg.refinements, cfg.tolerance, to_string(which),
                                [&](const oracle_detail::Grid& g) { return oracle_detail::on_grid(m, s, which, g).data; });
  return {manifold, hermitize(data), false};
}

CVector transition_amplitude_oracle(const ExcitonModel& m, const LightSpec& s, OracleConfig cfg) {
  if (s.kind != LightKind::Twin && s.kind != LightKind::CwPair)
    throw UsageError("transition_amplitude_oracle: twin or cw_pair light required");
  oracle_detail::check_supported(s, OracleTerm::FIII, m);
  const oracle_detail::Grid start = start_grid(m, s, cfg);
  const auto one = [&](const oracle_detail::Grid& g) {
    const oracle_detail::Context c(m, s, g);
    // remove the common carrier e^{-i omega_p t}
    return CVector(oracle_detail::amplitude_fg(c) * std::polar(1.0, units::phase(s.omega_p(), g.n * g.h)));
  };
  return converge(start, cfg.refinements, cfg.tolerance, "fg amplitude", one);
}

}  // namespace twinex
