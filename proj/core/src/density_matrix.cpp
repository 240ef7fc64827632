#include "twinex/density_matrix.hpp"

#include <cmath>

#include "twinex/errors.hpp"

namespace twinex {

const char* to_string(Manifold m) { return m == Manifold::E ? "E" : "F"; }

double DensityMatrix::trace() const { return data.trace().real(); }

RVector DensityMatrix::populations() const { return data.diagonal().real(); }

DensityMatrix DensityMatrix::normalized_copy() const {
  const double tr = trace();
  if (!(std::abs(tr) > 0.0) || !std::isfinite(tr))
    throw DegenerateInputError("cannot normalize a density matrix with zero trace");
  DensityMatrix out{manifold, data / tr, true};
  out.data.diagonal() = out.data.diagonal().real().cast<cplx>();
  return out;
}

void DensityMatrix::check_invariants() const {
  if (data.rows() != data.cols()) throw DegenerateInputError("density matrix is not square");
  const double scale = data.norm();
  if ((data - data.adjoint()).norm() > 1e-10 * scale)
    throw DegenerateInputError("density matrix is not Hermitian");
  if (data.size() > 0) {
    const RVector d = data.diagonal().real();
    if (d.minCoeff() < -1e-10 * std::max(d.maxCoeff(), 0.0))
      throw DegenerateInputError("density matrix has a negative population");
  }
  if (normalized && std::abs(trace() - 1.0) > 1e-12)
    throw DegenerateInputError("density matrix flagged normalized but trace != 1");
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

double purity(const DensityMatrix& rho) {
  if (!rho.normalized || std::abs(rho.trace() - 1.0) > 1e-12)
    throw UsageError("purity requires a normalized density matrix");
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return rho.data.squaredNorm();
}

std::vector<std::string> state_labels(Manifold m, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  const char* p = m == Manifold::E ? "e" : "f";
  for (std::size_t i = 0; i < n; ++i) out.push_back(p + std::to_string(i));
  return out;
}

}  // namespace twinex
