#pragma once

#include <complex>
#include <numbers>

namespace twinex {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

// Frequencies are wavenumbers in cm^-1 with hbar = 1. A time in fs multiplied
// by kPhaseFactor and a wavenumber gives a phase in radians.
namespace units {

/// 2*pi*c in rad fs^-1 per cm^-1.
inline constexpr double kPhaseFactor = 1.883652e-4;

/// Point-dipole coupling prefactor, cm^-1 * Angstrom^3 / Debye^2.
inline constexpr double kDipoleCouplingPrefactor = 5034.0;

/// fs -> cm (the conjugate variable of cm^-1 under kPhaseFactor).
constexpr double fs_to_cm(double t_fs) { return kPhaseFactor * t_fs; }

/// cm^-1 -> rad fs^-1.
constexpr double wavenumber_to_rate(double w_cm1) { return kPhaseFactor * w_cm1; }

/// Radian phase accumulated by a wavenumber over a time.
constexpr double phase(double w_cm1, double t_fs) { return kPhaseFactor * w_cm1 * t_fs; }

}  // namespace units
}  // namespace twinex
