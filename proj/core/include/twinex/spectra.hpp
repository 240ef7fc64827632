#pragma once

#include "twinex/density_matrix.hpp"
#include "twinex/exciton_model.hpp"
#include "twinex/light_sources.hpp"
#include "twinex/spectrum_grid.hpp"

namespace twinex {

struct EmissionConfig {
  /// Half-width of the unit-peak Lorentzian replacing the emission delta
  /// functions, cm^-1.
  double gamma_inst = 30.0;
  Axis ws_grid = Axis::uniform("ws", 9000.0, 14000.0, 5.0);

  void validate() const;
};

/// gamma^2 / (x^2 + gamma^2)
double unit_lorentzian(double x, double gamma);

/// Fluorescence from the populations (diagonals) of rho_e and rho_f:
/// f -> e emission at w_f - w_e weighted by |mu_ef|^2 p_f, plus e -> g
/// emission at w_e weighted by |mu_ge|^2 p_e.
SpectrumGrid dispersed_fluorescence(const ExcitonModel& model, const DensityMatrix& rho_e,
                                    const DensityMatrix& rho_f, const EmissionConfig& cfg);

/// Pump sweep at fixed omega2 (taken from the template), omega1 = wp - omega2.
/// Rows are pump frequencies, columns emission frequencies.
SpectrumGrid sweep_2d(const ExcitonModel& model, const LightSpec& spec_template, const Axis& wp_grid,
                      const EmissionConfig& cfg, unsigned threads = 0);

/// Trapezoid integral over the emission axis of every sweep row.
SpectrumGrid integrate_emission(const SpectrumGrid& sweep);

SpectrumGrid action_spectrum(const ExcitonModel& model, const LightSpec& spec_template, const Axis& wp_grid,
                             const EmissionConfig& cfg, unsigned threads = 0);

enum class PopulationTarget { ETotal2nd, FTotal };

/// Total manifold population over (wp, omega2); rows are pump frequencies.
SpectrumGrid population_sweep(const ExcitonModel& model, const LightSpec& spec_template, const Axis& wp_grid,
                              const Axis& w2_grid, PopulationTarget target, unsigned threads = 0);

/// Per-state share of the fourth-order manifold population at each pump
/// frequency (rows), normalized per row. All-zero rows are left zero and
/// listed in meta["empty_rows"].
SpectrumGrid state_distribution(const ExcitonModel& model, const LightSpec& spec_template, const Axis& wp_grid,
                                Manifold manifold, unsigned threads = 0);

/// The template with omega1 = wp - omega2. Throws DomainError if omega1 <= 0.
LightSpec pumped(const LightSpec& spec_template, double wp);

}  // namespace twinex
