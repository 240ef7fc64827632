#pragma once

#include "twinex/density_matrix.hpp"
#include "twinex/exciton_model.hpp"
#include "twinex/light_sources.hpp"

namespace twinex {

/// Two-photon g -> f amplitudes; the common phase e^{-i omega_p t} is dropped.
struct TransitionAmplitudes {
  CVector t_fg;

  /// |T><T| over the f-manifold, optionally trace-normalized.
  DensityMatrix outer(bool normalize) const;
};

/// Second-order rho_e. Identical for Twin and Stochastic light with matched
/// parameters since it only sees the two-point function.
DensityMatrix rho_e_second_order(const ExcitonModel& model, const LightSpec& spec);

/// Twin (finite T) or CwPair (T -> infinity).
TransitionAmplitudes transition_amplitude_fg(const ExcitonModel& model, const LightSpec& spec);

/// Pure f-manifold state created by twin photons.
DensityMatrix rho_f_entangled(const ExcitonModel& model, const LightSpec& spec,
                              bool normalize = false);

/// f-manifold state created by a cw beam pair.
DensityMatrix rho_f_cw_pair(const ExcitonModel& model, const LightSpec& spec);

/// Mixed f-manifold state created by stochastic light.
DensityMatrix rho_f_stochastic(const ExcitonModel& model, const LightSpec& spec);

/// Fourth-order single-exciton part from the pathway through f (diagram II).
DensityMatrix rho_e_fourth_entangled(const ExcitonModel& model, const LightSpec& spec);
DensityMatrix rho_e_fourth_cw_pair(const ExcitonModel& model, const LightSpec& spec);
DensityMatrix rho_e_fourth_stochastic(const ExcitonModel& model, const LightSpec& spec);

/// Normally ordered Raman-type term (diagram I) for twin photons. Diagnostic
/// only; it is not added into the fluorescence pipelines.
DensityMatrix rho_e_raman_entangled(const ExcitonModel& model, const LightSpec& spec);

/// The fourth-order e- and f-manifold blocks for any light kind.
struct FourthOrderDensities {
  DensityMatrix e;
  DensityMatrix f;
};
FourthOrderDensities fourth_order_densities(const ExcitonModel& model, const LightSpec& spec);

/// The f-manifold half of fourth_order_densities alone.
DensityMatrix rho_f_fourth(const ExcitonModel& model, const LightSpec& spec);
/// The e-manifold half of fourth_order_densities alone.
DensityMatrix rho_e_fourth(const ExcitonModel& model, const LightSpec& spec);

}  // namespace twinex
