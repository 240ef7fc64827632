#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "twinex/errors.hpp"

using namespace twinex;

TEST_CASE("window functions") {
  CHECK(rect(0.0) == 1.0);
  CHECK(rect(0.999) == 1.0);
  CHECK(rect(1.0) == 0.0);
  CHECK(rect(-1e-12) == 0.0);
  CHECK(tri(0.0) == 1.0);
  CHECK(tri(-0.25) == doctest::Approx(0.75));
  CHECK(tri(1.0) == 0.0);
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-6) == doctest::Approx(1.0));
  CHECK(sinc(M_PI) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(sinc(2.0) == doctest::Approx(std::sin(2.0) / 2.0));
}

TEST_CASE("power spectrum at the Fig. 4 settings") {
  const LightSpec s = fixtures::light(LightKind::Twin, 13000.0, 11000.0, 30.0, 2.0);
  const double x = units::kPhaseFactor * 2000.0 * 15.0;
  CHECK(x == doctest::Approx(5.651).epsilon(1e-4));
  CHECK(power_spectrum(13000.0, s) == doctest::Approx(4.0 * (1.0 + std::pow(std::sin(x) / x, 2))).epsilon(1e-14));
  for (double w = 9000.0; w < 15000.0; w += 37.0)
    CHECK(power_spectrum(w, s) == power_spectrum(w, s.with_kind(LightKind::Stochastic)));
  CHECK_THROWS_AS(power_spectrum(12000.0, s.with_kind(LightKind::CwPair)), UsageError);
}

TEST_CASE("twin and stochastic two-point functions coincide") {
  const LightSpec t = fixtures::light(LightKind::Twin, 12500.0, 11300.0, 25.0, 1.3);
  const LightSpec s = t.with_kind(LightKind::Stochastic);
  for (double a : {0.0, 3.0, 17.0, 40.0})
    for (double b : {0.0, 5.0, 24.0})
      CHECK(std::abs(twin_two_point(a, b, t) - stochastic_two_point(a, b, s)) == 0.0);
  CHECK(twin_two_point(30.0, 0.0, t) == cplx{});
  CHECK_THROWS_AS(twin_two_point(0.0, 0.0, s), UsageError);
}

TEST_CASE("twin pair amplitude") {
  const LightSpec t = fixtures::light(LightKind::Twin, 12500.0, 11300.0, 25.0, 0.7);
  // later time first, inside the window
  const cplx a = twin_two_photon_amplitude(10.0, 0.0, t);
  CHECK(std::abs(a) > 0.0);
  CHECK(twin_two_photon_amplitude(0.0, 10.0, t) == cplx{});
  CHECK(twin_two_photon_amplitude(25.0, 0.0, t) == cplx{});
  // equal times: |A (e^{-i w1 t} e^{-i w2 t}) * 2| = 2A
  CHECK(std::abs(twin_two_photon_amplitude(3.0, 3.0, t)) == doctest::Approx(1.4));
  // invariant under w1 <-> w2
  CHECK(std::abs(twin_two_photon_amplitude(7.0, 2.0, t) - twin_two_photon_amplitude(7.0, 2.0, t.swapped())) < 1e-15);
}

TEST_CASE("four-point functions") {
  const LightSpec t = fixtures::light(LightKind::Twin, 12500.0, 11300.0, 25.0, 0.8);
  // twin: factorizes into bra and ket pair amplitudes, order within a pair irrelevant
  const cplx f = twin_four_point(12.0, 4.0, 9.0, 1.0, t);
  CHECK(std::abs(f - std::conj(twin_two_photon_amplitude(12.0, 4.0, t)) * twin_two_photon_amplitude(9.0, 1.0, t)) <
        1e-15);
  CHECK(std::abs(f - twin_four_point(4.0, 12.0, 1.0, 9.0, t)) < 1e-15);
  // stochastic: A^4 scaling and Gaussian pairings vanish outside both windows
  const LightSpec s = t.with_kind(LightKind::Stochastic);
  const cplx g1 = stochastic_four_point(0.0, 1.0, 2.0, 3.0, s);
  const cplx g2 = stochastic_four_point(0.0, 1.0, 2.0, 3.0, s.with_amplitude(1.6));
  CHECK(std::abs(g2 - g1 * 16.0) < 1e-12 * std::abs(g2));
  CHECK(stochastic_four_point(0.0, 0.0, 100.0, 100.0, s) == cplx{});
}

TEST_CASE("light validation") {
  CHECK_THROWS_AS(fixtures::light(LightKind::Twin, -1.0, 11000.0, 30.0).validate(), UsageError);
  CHECK_THROWS_AS(fixtures::light(LightKind::Twin, 12000.0, 11000.0, 0.0).validate(), UsageError);
  CHECK_NOTHROW(fixtures::light(LightKind::CwPair, 12000.0, 11000.0, 0.0).validate());
  CHECK_THROWS_AS(fixtures::light(LightKind::Stochastic, 12000.0, 11000.0, 30.0, 0.0).validate(), UsageError);
  CHECK(light_kind_from_string("cw_pair") == LightKind::CwPair);
  CHECK_THROWS_AS(light_kind_from_string("laser"), ConfigError);
}

TEST_CASE("sinc form of the window difference quotient") {
  // (e^{i d T} - 1) / d = i T e^{i d T / 2} sinc(d T / 2) for a real detuning d.
  // the 2iT variant of this prefactor is exactly twice the quotient
  for (double d_cm : {-900.0, -150.0, 0.5, 40.0, 700.0}) {
    for (double t_fs : {5.0, 30.0, 80.0}) {
      const double T = units::fs_to_cm(t_fs);
      const cplx exact = (std::exp(kI * d_cm * T) - 1.0) / d_cm;
      const cplx form = kI * T * std::exp(kI * d_cm * T / 2.0) * sinc(d_cm * T / 2.0);
      CHECK(std::abs(exact - form) < 1e-12 * std::abs(exact));
      const cplx doubled = 2.0 * kI * T * std::exp(kI * d_cm * T / 2.0) * sinc(d_cm * T / 2.0);
      CHECK(std::abs(doubled / exact - 2.0) < 1e-12);
    }
  }
  // with damping the identity is approximate; small gamma T keeps it close
  const double T = units::fs_to_cm(30.0), d = 300.0, g = 5.0;
  const cplx z{d, g};
  const cplx exact = (std::exp(kI * z * T) - 1.0) / z;
  const cplx form = kI * T * std::exp(kI * d * T / 2.0) * sinc(d * T / 2.0);
  CHECK(std::abs(exact - form) < 0.05 * std::abs(exact));
}
