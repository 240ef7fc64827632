#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "twinex/spectrum_grid.hpp"
#include "twinex/units.hpp"

namespace twinex {

using Vec3 = Eigen::Vector3d;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// One chromophore: position (Angstrom), transition dipole (Debye), site
/// energy (cm^-1). Dark sites (charge-transfer states) carry no dipole.
struct SiteSpec {
  Vec3 position = Vec3::Zero();
  Vec3 dipole = Vec3::Zero();
  double site_energy = 0.0;
  bool is_dark = false;
  std::string label;
};

struct CouplingOverride {
  std::size_t i = 0;
  std::size_t j = 0;
  double value_cm1 = 0.0;
};

struct FromSites {
  std::vector<SiteSpec> sites;
  std::vector<CouplingOverride> couplings;
};

/// Manifold Hamiltonians supplied directly. `pairs[p]` names the two sites
/// that make up two-exciton basis state p.
struct ExplicitManifolds {
  CMatrix h_e;
  CMatrix h_f;
  std::vector<Vec3> site_dipoles;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

struct BuildOptions {
  Vec3 polarization = Vec3::UnitX();
  double gamma_e = 200.0;
  /// Defaults to gamma_e.
  std::optional<double> gamma_f;
  /// Per-state width overrides, indexed by sorted state.
  std::vector<std::pair<std::size_t, double>> gamma_e_overrides;
  std::vector<std::pair<std::size_t, double>> gamma_f_overrides;
};

struct ManifoldSource {
  std::variant<FromSites, ExplicitManifolds> data;
  BuildOptions options;
  std::string id;
};

/// Single- and double-exciton manifolds with polarization-contracted
/// transition dipoles. mu_ge(e) = <e|V^dagger|g>, mu_ef(f, e) = <f|V^dagger|e>.
struct ExcitonModel {
  RVector e_energies;
  RVector f_energies;
  CVector mu_ge;
  CMatrix mu_ef;
  RVector gamma_e;
  RVector gamma_f;

  /// Columns are eigenvectors in the site / pair basis.
  CMatrix e_vectors;
  CMatrix f_vectors;
  std::string id;

  std::size_t n_e() const { return static_cast<std::size_t>(e_energies.size()); }
  std::size_t n_f() const { return static_cast<std::size_t>(f_energies.size()); }

  /// Throws DegenerateInputError if an invariant is violated.
  void validate() const;
};

/// Point-dipole coupling in cm^-1. Throws DegenerateInputError for sites
/// closer than 0.1 Angstrom.
double dipole_coupling(const SiteSpec& a, const SiteSpec& b);

/// One-exciton site Hamiltonian with diagonal site energies and point-dipole
/// couplings, overrides applied symmetrically.
CMatrix one_exciton_hamiltonian(const FromSites& src);

/// Hard-core two-exciton Hamiltonian on the pair basis {(i, j), i < j}.
CMatrix two_exciton_hamiltonian(const CMatrix& h_one,
                                const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

std::vector<std::pair<std::size_t, std::size_t>> site_pairs(std::size_t n_sites);

ExcitonModel build_manifolds(const ManifoldSource& source);

/// Lorentzian stick spectrum sum_e |mu_ge|^2 gamma_e / ((w - w_e)^2 + gamma_e^2).
SpectrumGrid absorption_spectrum(const ExcitonModel& model, const Axis& grid);

}  // namespace twinex
