#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "twinex/errors.hpp"
#include "twinex/response.hpp"

using namespace twinex;
using fixtures::light;

namespace {

cplx wbar_e(const ExcitonModel& m, std::size_t e) { return {m.e_energies(e), -m.gamma_e(e)}; }
cplx wbar_f(const ExcitonModel& m, std::size_t f) { return {m.f_energies(f), -m.gamma_f(f)}; }

// window factor (e^{i x T} - 1) / x with x = w - w_eg + i gamma_e.
cplx window_d(double w, cplx we, double t_fs) {
  const cplx x = w - we;
  return (std::exp(kI * x * units::fs_to_cm(t_fs)) - 1.0) / x;
}

double max_rel(const CMatrix& a, const CMatrix& b) {
  const double s = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return s > 0.0 ? (a - b).cwiseAbs().maxCoeff() / s : 0.0;
}

}  // namespace

TEST_CASE("T_fg against the sum-over-states window formula") {
  const ExcitonModel m = fixtures::shipped("heterotrimer");
  const LightSpec s = light(LightKind::Twin, 12700.0, 11400.0, 30.0, 1.5);
  const CVector t = transition_amplitude_fg(m, s).t_fg;
  for (std::size_t f = 0; f < m.n_f(); ++f) {
    cplx ref{};
    for (std::size_t e = 0; e < m.n_e(); ++e)
      ref += m.mu_ge(e) * m.mu_ef(f, e) *
             (window_d(s.omega1, wbar_e(m, e), 30.0) + window_d(s.omega2, wbar_e(m, e), 30.0));
    ref *= 1.5 / (s.omega_p() - wbar_f(m, f));
    // opposite overall sign, see README
    CHECK(std::abs(t(f) + ref) < 1e-12 * std::abs(ref));
  }
}

TEST_CASE("cw T_fg is the pure-Lorentzian form and the long-window limit of twin") {
  const ExcitonModel m = fixtures::shipped("heterotrimer");
  const LightSpec cw = light(LightKind::CwPair, 12700.0, 11400.0, 0.0, 0.9);
  const CVector t = transition_amplitude_fg(m, cw).t_fg;
  for (std::size_t f = 0; f < m.n_f(); ++f) {
    cplx ref{};
    for (std::size_t e = 0; e < m.n_e(); ++e)
      ref += m.mu_ge(e) * m.mu_ef(f, e) * (1.0 / (cw.omega1 - wbar_e(m, e)) + 1.0 / (cw.omega2 - wbar_e(m, e)));
    ref *= 0.9 / (cw.omega_p() - wbar_f(m, f));
    CHECK(std::abs(t(f) - ref) < 1e-12 * std::abs(ref));
  }
  LightSpec twin = cw.with_kind(LightKind::Twin);
  twin.entanglement_time = 4000.0;
  CHECK((transition_amplitude_fg(m, twin).t_fg - t).norm() < 1e-12 * t.norm());
}

TEST_CASE("homodimer |T_fg| peaks at the two-photon resonance") {
  const ExcitonModel m = fixtures::shipped("homodimer");
  double best_wp = 0.0, best = 0.0;
  for (double wp = 21000.0; wp <= 23000.0; wp += 5.0) {
    const double a = std::abs(transition_amplitude_fg(m, light(LightKind::Twin, wp - 11000.0, 11000.0, 30.0)).t_fg(0));
    if (a > best) best = a, best_wp = wp;
  }
  // the window factors vary slowly with omega1 and pull the peak slightly
  CHECK(std::abs(best_wp - m.f_energies(0)) < 0.25 * m.gamma_f(0));
}

TEST_CASE("entangled f-state is pure") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> wp(22000.0, 26000.0), tt(3.0, 200.0);
  for (int k = 0; k < 10; ++k) {
    const ExcitonModel m = fixtures::random_model(rng, 3);
    const LightSpec s = light(LightKind::Twin, wp(rng) - 11000.0, 11000.0, tt(rng));
    const DensityMatrix rho = rho_f_entangled(m, s, true);
    CHECK(rho.normalized);
    CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-12));
    const TransitionAmplitudes t = transition_amplitude_fg(m, s);
    CHECK(max_rel(rho_f_entangled(m, s).data, t.t_fg * t.t_fg.adjoint()) < 1e-14);
  }
}

TEST_CASE("stochastic f-state is mixed when two f-states are bright") {
  const ExcitonModel m = fixtures::shipped("heterotrimer");
  for (double wp : {23500.0, 24500.0, 25500.0}) {
    const DensityMatrix rho = rho_f_stochastic(m, light(LightKind::Stochastic, wp - 11000.0, 11000.0, 30.0));
    rho.check_invariants();
    const double p = purity(rho.normalized_copy());
    CHECK(p < 1.0 - 1e-3);
    CHECK(p > 1.0 / 3.0 - 1e-12);
  }
  // single f-state: trivially pure
  const ExcitonModel d = fixtures::dimer();
  CHECK(purity(rho_f_stochastic(d, light(LightKind::Stochastic, 12500.0, 11600.0, 30.0)).normalized_copy()) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("second order is the same for twin and stochastic light") {
  const ExcitonModel m = fixtures::shipped("rc_like");
  const LightSpec t = light(LightKind::Twin, 12300.0, 11100.0, 42.0, 1.7);
  const DensityMatrix a = rho_e_second_order(m, t);
  const DensityMatrix b = rho_e_second_order(m, t.with_kind(LightKind::Stochastic));
  CHECK((a.data - b.data).cwiseAbs().maxCoeff() == 0.0);
  a.check_invariants();
  CHECK_THROWS_AS(rho_e_second_order(m, t.with_kind(LightKind::CwPair)), UsageError);
}

TEST_CASE("amplitude scaling is exact") {
  const ExcitonModel m = fixtures::shipped("heterotrimer");
  const LightSpec t = light(LightKind::Twin, 12700.0, 11400.0, 30.0);
  const LightSpec s = t.with_kind(LightKind::Stochastic);
  for (double a : {1e-3, 0.2, 7.0}) {
    CHECK(rho_f_entangled(m, t.with_amplitude(a)).trace() == doctest::Approx(a * a * rho_f_entangled(m, t).trace()));
    CHECK(rho_f_stochastic(m, s.with_amplitude(a)).trace() ==
          doctest::Approx(std::pow(a, 4) * rho_f_stochastic(m, s).trace()));
    CHECK(rho_e_second_order(m, t.with_amplitude(a)).trace() ==
          doctest::Approx(a * a * rho_e_second_order(m, t).trace()));
  }
}

TEST_CASE("entangled results are symmetric under w1 <-> w2") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> w(10500.0, 13500.0), tt(5.0, 80.0);
  for (int k = 0; k < 4; ++k) {
    const ExcitonModel m = fixtures::random_model(rng, 3);
    const LightSpec s = light(LightKind::Twin, w(rng), w(rng), tt(rng));
    const LightSpec r = s.swapped();
    CHECK(max_rel(transition_amplitude_fg(m, s).t_fg, transition_amplitude_fg(m, r).t_fg) < 1e-12);
    CHECK(max_rel(rho_f_entangled(m, s).data, rho_f_entangled(m, r).data) < 1e-12);
    CHECK(max_rel(rho_e_fourth_entangled(m, s).data, rho_e_fourth_entangled(m, r).data) < 1e-12);
    CHECK(max_rel(rho_e_raman_entangled(m, s).data, rho_e_raman_entangled(m, r).data) < 1e-12);
    const LightSpec st = s.with_kind(LightKind::Stochastic);
    CHECK(max_rel(rho_f_stochastic(m, st).data, rho_f_stochastic(m, st.swapped()).data) < 1e-10);
  }
}

TEST_CASE("zero dipoles give zero densities") {
  const ExcitonModel m = build_manifolds(fixtures::from_sites(
      {fixtures::site({0, 0, 0}, {0, 0, 0}, 12000.0), fixtures::site({0, 8, 0}, {0, 0, 0}, 12500.0)}));
  const LightSpec t = light(LightKind::Twin, 13000.0, 11500.0, 30.0);
  CHECK(transition_amplitude_fg(m, t).t_fg.norm() == 0.0);
  CHECK(rho_e_second_order(m, t).data.norm() == 0.0);
  CHECK(rho_e_fourth_entangled(m, t).data.norm() == 0.0);
  CHECK(rho_e_raman_entangled(m, t).data.norm() == 0.0);
  CHECK(rho_f_stochastic(m, t.with_kind(LightKind::Stochastic)).data.norm() == 0.0);
  CHECK(rho_e_fourth_stochastic(m, t.with_kind(LightKind::Stochastic)).data.norm() == 0.0);
  CHECK_THROWS_AS(rho_f_entangled(m, t, true), DegenerateInputError);
}

TEST_CASE("contract errors") {
  const ExcitonModel one = fixtures::single_site();
  const LightSpec t = light(LightKind::Twin, 12000.0, 11000.0, 30.0);
  CHECK_THROWS_AS(transition_amplitude_fg(one, t), DegenerateInputError);
  CHECK_THROWS_AS(rho_f_stochastic(one, t.with_kind(LightKind::Stochastic)), DegenerateInputError);
  CHECK_NOTHROW(rho_e_second_order(one, t));
  const ExcitonModel d = fixtures::dimer();
  CHECK_THROWS_AS(rho_f_entangled(d, t.with_kind(LightKind::Stochastic)), UsageError);
  CHECK_THROWS_AS(rho_f_stochastic(d, t), UsageError);
  CHECK_THROWS_AS(rho_e_raman_entangled(d, t.with_kind(LightKind::CwPair)), UsageError);
  CHECK_THROWS_AS(purity(rho_f_entangled(d, t)), UsageError);
}

TEST_CASE("fourth-order densities are Hermitian for every light kind") {
  const ExcitonModel m = fixtures::shipped("heterotrimer");
  for (LightKind k : {LightKind::Twin, LightKind::Stochastic, LightKind::CwPair}) {
    const FourthOrderDensities d = fourth_order_densities(m, light(k, 12900.0, 11200.0, 30.0));
    CHECK((d.e.data - d.e.data.adjoint()).norm() == 0.0);
    CHECK((d.f.data - d.f.data.adjoint()).norm() == 0.0);
    d.f.check_invariants();
    CHECK(rho_f_fourth(m, light(k, 12900.0, 11200.0, 30.0)).data == d.f.data);
  }
}
