#pragma once

#include <string>

#include "twinex/units.hpp"

namespace twinex {

enum class LightKind { Twin, Stochastic, CwPair };

const char* to_string(LightKind k);
LightKind light_kind_from_string(const std::string& s);

/// Field parameters. `amplitude` absorbs every dropped constant of the source:
/// C*E_p for twin photons, A_0 for stochastic light, the beam amplitude for a
/// cw pair. Frequencies in cm^-1, entanglement time in fs.
struct LightSpec {
  LightKind kind = LightKind::Twin;
  double omega1 = 0.0;
  double omega2 = 0.0;
  double entanglement_time = 0.0;
  double amplitude = 1.0;

  double omega_p() const { return omega1 + omega2; }

  /// Throws UsageError on non-positive frequencies, amplitude or (for Twin and
  /// Stochastic) entanglement time.
  void validate() const;

  LightSpec with_kind(LightKind k) const;
  LightSpec swapped() const;
  LightSpec with_amplitude(double a) const;
};

/// 1 on [0, 1), 0 elsewhere.
double rect(double x);
/// 1 - |x| on |x| < 1, 0 elsewhere.
double tri(double x);
/// sin(x)/x with the removable singularity filled in.
double sinc(double x);

/// <E^dagger(tau2) E(tau1)> of twin photons.
cplx twin_two_point(double tau2, double tau1, const LightSpec& spec);

/// <0|E(tau2) E(tau1)|psi>. Nonzero only for 0 <= tau2 - tau1 < T, i.e. the
/// later time goes first.
cplx twin_two_photon_amplitude(double tau2, double tau1, const LightSpec& spec);

/// <psi|E^dagger(t3) E^dagger(t4)|0><0|E(t2) E(t1)|psi>.
cplx twin_four_point(double t3, double t4, double t2, double t1, const LightSpec& spec);

/// <E^dagger(t3) E^dagger(t4) E(t2) E(t1)> of phase-averaged stochastic light.
cplx stochastic_four_point(double t1, double t2, double t3, double t4, const LightSpec& spec);

/// <E^dagger(t2) E(t1)> of stochastic light; same form as twin_two_point.
cplx stochastic_two_point(double t2, double t1, const LightSpec& spec);

/// Two-photon amplitude of a cw beam pair (no temporal envelope).
cplx cw_two_photon_amplitude(double tau2, double tau1, const LightSpec& spec);

/// Power spectrum n(omega) of twin or stochastic light.
double power_spectrum(double omega, const LightSpec& spec);

}  // namespace twinex
