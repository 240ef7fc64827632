#pragma once

#include "twinex/density_matrix.hpp"
#include "twinex/exciton_model.hpp"
#include "twinex/light_sources.hpp"

namespace twinex {

enum class OracleTerm { E2, EI, EII, FIII };
enum class OracleOrder { Second, Fourth };

const char* to_string(OracleTerm t);
OracleTerm oracle_term_from_string(const std::string& s);
OracleOrder order_of(OracleTerm t);

struct OracleConfig {
  /// Integration horizon in fs; 0 selects 10 / gamma_min.
  double t_max = 0.0;
  /// Minimum number of grid steps per time dimension (>= 64).
  int n_steps = 256;
  OracleOrder order = OracleOrder::Fourth;
  /// Relative change allowed when the grid is refined.
  double tolerance = 1e-2;
  /// Extra halvings of the step tried before giving up.
  int refinements = 2;
};

/// Brute-force time-domain evaluation of the perturbative density matrix at
/// t = t_max. Trapezoid quadrature over the nested time-ordered integrals with
/// sum-over-states matter correlators; the step is halved until two successive
/// grids agree to cfg.tolerance (at most cfg.refinements extra times), and
/// the last pair is Richardson-extrapolated. Throws ConvergenceError otherwise.
///
/// Supported: E2 for Twin/Stochastic; EI for Twin; EII and FIII for
/// Twin/Stochastic/CwPair.
DensityMatrix time_domain_oracle(const ExcitonModel& model, const LightSpec& spec, OracleTerm which,
                                 OracleConfig cfg = {});

/// Two-photon g -> f amplitude by direct double time integration (Twin or
/// CwPair). Same phase convention as transition_amplitude_fg.
CVector transition_amplitude_oracle(const ExcitonModel& model, const LightSpec& spec,
                                    OracleConfig cfg = {});

/// Default horizon 10 / gamma_min in fs.
double default_horizon(const ExcitonModel& model);

}  // namespace twinex

namespace twinex::oracle_detail {

/// Uniform grid x_k = k * h, k = 0..n, in fs measured backwards from t_max.
struct Grid {
  double h = 1.0;
  int n = 64;
};

/// Single-grid trapezoid value (no extrapolation), with the nested sums
/// reassociated into matrix products.
DensityMatrix on_grid(const ExcitonModel& model, const LightSpec& spec, OracleTerm which, const Grid& g);

/// Same quadrature written as the literal nested sum over all time tuples,
/// calling the four-point correlators directly. O(n^4); tiny grids only.
DensityMatrix naive_on_grid(const ExcitonModel& model, const LightSpec& spec, OracleTerm which,
                            const Grid& g);

}  // namespace twinex::oracle_detail
