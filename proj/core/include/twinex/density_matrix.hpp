#pragma once

#include <string>
#include <vector>

#include "twinex/exciton_model.hpp"

namespace twinex {

enum class Manifold { E, F };

const char* to_string(Manifold m);

/// Density matrix restricted to one manifold. e-f coherences are not
/// representable: the light fields considered here only create the
/// block-diagonal parts.
struct DensityMatrix {
  Manifold manifold = Manifold::E;
  CMatrix data;
  bool normalized = false;

  std::size_t size() const { return static_cast<std::size_t>(data.rows()); }
  double trace() const;
  /// Sum of the diagonal, i.e. the total manifold population.
  double population() const { return trace(); }
  RVector populations() const;

  /// Copy scaled to unit trace. Throws DegenerateInputError on zero trace.
  DensityMatrix normalized_copy() const;

  /// Throws DegenerateInputError if not Hermitian to 1e-10 relative, if a
  /// diagonal entry is negative beyond 1e-10 of the largest, or if the
  /// normalized flag is set without unit trace.
  void check_invariants() const;
};

/// (m + m^dagger) / 2.
CMatrix hermitize(const CMatrix& m);

/// tr(rho^2). Throws UsageError unless rho is normalized.
double purity(const DensityMatrix& rho);

/// State labels used in serialized output, e.g. "e0", "f3".
std::vector<std::string> state_labels(Manifold m, std::size_t n);

}  // namespace twinex
