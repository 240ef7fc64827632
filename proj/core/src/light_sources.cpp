#include "twinex/light_sources.hpp"

#include <cmath>
#include <utility>

#include "twinex/errors.hpp"

namespace twinex {
namespace {

void require_kind(const LightSpec& spec, LightKind k, const char* op) {
  if (spec.kind != k) {
    throw UsageError(std::string(op) + ": expected " + to_string(k) + " light, got " +
                     to_string(spec.kind));
  }
}

// e^{-i w tau} with tau in fs and w in cm^-1.
cplx carrier(double w, double tau) { return std::polar(1.0, -units::phase(w, tau)); }

// Shared tri-windowed two-point form of twin and stochastic light.
cplx windowed_two_point(double tau2, double tau1, const LightSpec& s) {
  const double w = tri((tau2 - tau1) / s.entanglement_time);
  if (w == 0.0) return {};
  const double d = tau1 - tau2;
  return s.amplitude * s.amplitude * w * (carrier(s.omega1, d) + carrier(s.omega2, d));
}

cplx pair_phase(double tau2, double tau1, const LightSpec& s) {
  return carrier(s.omega1, tau1) * carrier(s.omega2, tau2) +
         carrier(s.omega1, tau2) * carrier(s.omega2, tau1);
}

// Annihilation operators commute, so the bra/ket pair amplitudes inside a
// four-point function are taken with the later time first.
cplx ordered_amplitude(double a, double b, const LightSpec& s) {
  return a >= b ? twin_two_photon_amplitude(a, b, s) : twin_two_photon_amplitude(b, a, s);
}

}  // namespace

const char* to_string(LightKind k) {
  switch (k) {
    case LightKind::Twin: return "twin";
    case LightKind::Stochastic: return "stochastic";
    case LightKind::CwPair: return "cw_pair";
  }
  return "?";
}

LightKind light_kind_from_string(const std::string& s) {
  if (s == "twin") return LightKind::Twin;
  if (s == "stochastic") return LightKind::Stochastic;
  if (s == "cw_pair") return LightKind::CwPair;
  throw ConfigError("unknown light kind '" + s + "' (expected twin, stochastic or cw_pair)");
}

void LightSpec::validate() const {
  if (!(omega1 > 0.0) || !(omega2 > 0.0)) throw UsageError("light: omega1 and omega2 must be positive");
  if (!(amplitude > 0.0)) throw UsageError("light: amplitude must be positive");
  if (kind != LightKind::CwPair && !(entanglement_time > 0.0)) {
    throw UsageError("light: entanglement time T must be positive");
  }
}

LightSpec LightSpec::with_kind(LightKind k) const {
  LightSpec s = *this;
  s.kind = k;
  return s;
}

LightSpec LightSpec::swapped() const {
  LightSpec s = *this;
  std::swap(s.omega1, s.omega2);
  return s;
}

LightSpec LightSpec::with_amplitude(double a) const {
  LightSpec s = *this;
  s.amplitude = a;
  return s;
}

double rect(double x) { return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0; }

double tri(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 1.0 - a : 0.0;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

cplx twin_two_point(double tau2, double tau1, const LightSpec& spec) {
  require_kind(spec, LightKind::Twin, "twin_two_point");
  return windowed_two_point(tau2, tau1, spec);
}

cplx stochastic_two_point(double tau2, double tau1, const LightSpec& spec) {
  require_kind(spec, LightKind::Stochastic, "stochastic_two_point");
  return windowed_two_point(tau2, tau1, spec);
}

cplx twin_two_photon_amplitude(double tau2, double tau1, const LightSpec& spec) {
  require_kind(spec, LightKind::Twin, "twin_two_photon_amplitude");
  if (rect((tau2 - tau1) / spec.entanglement_time) == 0.0) return {};
  return spec.amplitude * pair_phase(tau2, tau1, spec);
}

cplx cw_two_photon_amplitude(double tau2, double tau1, const LightSpec& spec) {
  require_kind(spec, LightKind::CwPair, "cw_two_photon_amplitude");
  return spec.amplitude * pair_phase(tau2, tau1, spec);
}

cplx twin_four_point(double t3, double t4, double t2, double t1, const LightSpec& spec) {
  require_kind(spec, LightKind::Twin, "twin_four_point");
  const cplx ket = ordered_amplitude(t2, t1, spec);
  if (ket == cplx{}) return {};
  return std::conj(ordered_amplitude(t3, t4, spec)) * ket;
}

cplx stochastic_four_point(double t1, double t2, double t3, double t4, const LightSpec& spec) {
  require_kind(spec, LightKind::Stochastic, "stochastic_four_point");
  const double T = spec.entanglement_time;
  const double a4 = std::pow(spec.amplitude, 4);
  cplx sum{};
  const double w13 = tri((t1 - t3) / T) * tri((t2 - t4) / T);
  const double w14 = tri((t1 - t4) / T) * tri((t2 - t3) / T);
  for (double wa : {spec.omega1, spec.omega2}) {
    for (double wb : {spec.omega1, spec.omega2}) {
      if (w13 != 0.0) sum += w13 * carrier(wa, t1 - t3) * carrier(wb, t2 - t4);
      if (w14 != 0.0) sum += w14 * carrier(wa, t1 - t4) * carrier(wb, t2 - t3);
    }
  }
  return a4 * sum;
}

double power_spectrum(double omega, const LightSpec& spec) {
  if (spec.kind == LightKind::CwPair) {
    throw UsageError("power_spectrum: defined for twin and stochastic light only");
  }
  const double half = 0.5 * units::kPhaseFactor * spec.entanglement_time;
  const double s1 = sinc((omega - spec.omega1) * half);
  const double s2 = sinc((omega - spec.omega2) * half);
  return spec.amplitude * spec.amplitude * (s1 * s1 + s2 * s2);
}

}  // namespace twinex
