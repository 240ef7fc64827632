#include "twinex/exciton_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "twinex/errors.hpp"

namespace twinex {
namespace {

constexpr double kMinSeparation = 0.1;  // Angstrom
constexpr double kHermitianTol = 1e-10;

void require_hermitian(const CMatrix& h, const char* what) {
  if (h.rows() != h.cols()) {
    throw DegenerateInputError(std::string(what) + " is not square");
  }
  const double scale = std::max(1.0, h.norm());
  if ((h - h.adjoint()).norm() > kHermitianTol * scale) {
    throw DegenerateInputError(std::string(what) + " is not Hermitian");
  }
}

struct Eigenpairs {
  RVector values;
  CMatrix vectors;
};

// Ascending eigenvalues; exact ties broken by descending `strength`, then by
// original index. The largest-magnitude component of each eigenvector is made
// real and positive.
Eigenpairs diagonalize(const CMatrix& h, const std::function<double(const CVector&)>& strength) {
  const auto n = h.rows();
  if (n == 0) return {RVector(0), CMatrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw DegenerateInputError("eigen-decomposition failed");
  }
  CMatrix vecs = solver.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index arg = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = std::abs(vecs(i, k));
      if (m > best * (1.0 + 1e-12) + 1e-300) {
        best = m;
        arg = i;
      }
    }
    const cplx ph = vecs(arg, k) / std::abs(vecs(arg, k));
    vecs.col(k) *= std::conj(ph);
    vecs(arg, k) = std::abs(vecs(arg, k));
  }

  const RVector& vals = solver.eigenvalues();
  const double tie = 1e-9 * std::max(1.0, vals.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> str(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) str[static_cast<std::size_t>(k)] = strength(vecs.col(k));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(vals(a) - vals(b)) > tie) return vals(a) < vals(b);
    const double sa = str[static_cast<std::size_t>(a)];
    const double sb = str[static_cast<std::size_t>(b)];
    if (std::abs(sa - sb) > 1e-12 * std::max({1.0, sa, sb})) return sa > sb;
    return a < b;
  });

  Eigenpairs out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = vals(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = vecs.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

ExcitonModel assemble(const CMatrix& h_e, const CMatrix& h_f, const CVector& site_mu,
                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                      const BuildOptions& opt) {
  require_hermitian(h_e, "one-exciton Hamiltonian");
  require_hermitian(h_f, "two-exciton Hamiltonian");
  const auto n_sites = h_e.rows();
  if (site_mu.size() != n_sites) {
    throw DegenerateInputError("dipole count does not match one-exciton Hamiltonian");
  }
  if (static_cast<std::size_t>(h_f.rows()) != pairs.size()) {
    throw DegenerateInputError("pair map does not match two-exciton Hamiltonian");
  }
  for (const auto& [i, j] : pairs) {
    if (i == j || static_cast<Eigen::Index>(std::max(i, j)) >= n_sites) {
      throw DegenerateInputError("pair map references an invalid site pair");
    }
  }

  const auto e_strength = [&](const CVector& c) { return std::norm(c.dot(site_mu)); };
  Eigenpairs e = diagonalize(h_e, e_strength);

  ExcitonModel m;
  m.e_energies = e.values;
  m.e_vectors = e.vectors;
  // mu_ge(e) = sum_i conj(c_{e,i}) mu_i; Eigen's dot conjugates its left operand.
  m.mu_ge = e.vectors.adjoint() * site_mu;

  // <pair(i,j)|V^dagger|e> = c_{e,i} mu_j + c_{e,j} mu_i
  const auto n_pairs = static_cast<Eigen::Index>(pairs.size());
  CMatrix pair_from_e(n_pairs, e.vectors.cols());
  for (Eigen::Index p = 0; p < n_pairs; ++p) {
    const auto [i, j] = pairs[static_cast<std::size_t>(p)];
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    for (Eigen::Index k = 0; k < e.vectors.cols(); ++k) {
      pair_from_e(p, k) = e.vectors(ii, k) * site_mu(jj) + e.vectors(jj, k) * site_mu(ii);
    }
  }
  const auto f_strength = [&](const CVector& c) { return (c.adjoint() * pair_from_e).squaredNorm(); };
  Eigenpairs f = diagonalize(h_f, f_strength);
  m.f_energies = f.values;
  m.f_vectors = f.vectors;
  m.mu_ef = f.vectors.adjoint() * pair_from_e;

  m.gamma_e = RVector::Constant(m.e_energies.size(), opt.gamma_e);
  m.gamma_f = RVector::Constant(m.f_energies.size(), opt.gamma_f.value_or(opt.gamma_e));
  for (const auto& [k, g] : opt.gamma_e_overrides) {
    if (static_cast<Eigen::Index>(k) >= m.gamma_e.size()) throw DegenerateInputError("gamma_e override index out of range");
    m.gamma_e(static_cast<Eigen::Index>(k)) = g;
  }
  for (const auto& [k, g] : opt.gamma_f_overrides) {
    if (static_cast<Eigen::Index>(k) >= m.gamma_f.size()) throw DegenerateInputError("gamma_f override index out of range");
    m.gamma_f(static_cast<Eigen::Index>(k)) = g;
  }
  m.validate();
  return m;
}

CVector contract(const std::vector<Vec3>& dipoles, const Vec3& pol) {
  CVector mu(static_cast<Eigen::Index>(dipoles.size()));
  for (std::size_t i = 0; i < dipoles.size(); ++i) mu(static_cast<Eigen::Index>(i)) = dipoles[i].dot(pol);
  return mu;
}

}  // namespace

void ExcitonModel::validate() const {
  const auto fail = [](const std::string& msg) { throw DegenerateInputError("exciton model: " + msg); };
  if (mu_ge.size() != e_energies.size()) fail("mu_ge size does not match e-manifold");
  if (mu_ef.rows() != f_energies.size() || mu_ef.cols() != e_energies.size()) fail("mu_ef shape is not (n_f x n_e)");
  if (gamma_e.size() != e_energies.size() || gamma_f.size() != f_energies.size()) fail("width vectors do not match manifolds");
  for (Eigen::Index i = 0; i < e_energies.size(); ++i) {
    if (!(e_energies(i) > 0.0)) fail("e-state energy must be positive");
    if (!(gamma_e(i) > 0.0)) fail("gamma_e must be positive");
  }
  const double e_min = e_energies.size() ? e_energies.minCoeff() : 0.0;
  for (Eigen::Index i = 0; i < f_energies.size(); ++i) {
    if (!(f_energies(i) > e_min)) fail("f-state energy must exceed the lowest e-state energy");
    if (!(gamma_f(i) > 0.0)) fail("gamma_f must be positive");
  }
}

double dipole_coupling(const SiteSpec& a, const SiteSpec& b) {
  const Vec3 r = b.position - a.position;
  const double dist = r.norm();
  if (dist <= kMinSeparation) {
    std::ostringstream os;
    os << "degenerate geometry: sites '" << a.label << "' and '" << b.label << "' are " << dist
       << " A apart";
    throw DegenerateInputError(os.str());
  }
  const double da = a.is_dark ? 0.0 : a.dipole.norm();
  const double db = b.is_dark ? 0.0 : b.dipole.norm();
  if (da == 0.0 || db == 0.0) return 0.0;
  const Vec3 ua = a.dipole / da;
  const Vec3 ub = b.dipole / db;
  const Vec3 ur = r / dist;
  const double kappa = ua.dot(ub) - 3.0 * ua.dot(ur) * ub.dot(ur);
  return units::kDipoleCouplingPrefactor * kappa * da * db / (dist * dist * dist);
}

std::vector<std::pair<std::size_t, std::size_t>> site_pairs(std::size_t n_sites) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n_sites; ++i)
    for (std::size_t j = i + 1; j < n_sites; ++j) pairs.emplace_back(i, j);
  return pairs;
}

CMatrix one_exciton_hamiltonian(const FromSites& src) {
  const auto n = src.sites.size();
  CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    h(ii, ii) = src.sites[i].site_energy;
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      h(ii, jj) = h(jj, ii) = dipole_coupling(src.sites[i], src.sites[j]);
    }
  }
  for (const auto& c : src.couplings) {
    if (c.i >= n || c.j >= n || c.i == c.j) {
      throw DegenerateInputError("coupling override references an invalid site pair");
    }
    const auto ii = static_cast<Eigen::Index>(c.i);
    const auto jj = static_cast<Eigen::Index>(c.j);
    h(ii, jj) = h(jj, ii) = c.value_cm1;
  }
  return h;
}

CMatrix two_exciton_hamiltonian(const CMatrix& h1,
                                const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  const auto np = static_cast<Eigen::Index>(pairs.size());
  CMatrix h = CMatrix::Zero(np, np);
  const auto at = [&](std::size_t a, std::size_t b) {
    return h1(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  };
  for (Eigen::Index p = 0; p < np; ++p) {
    const auto [i, j] = pairs[static_cast<std::size_t>(p)];
    h(p, p) = at(i, i) + at(j, j);
    for (Eigen::Index q = 0; q < np; ++q) {
      if (q == p) continue;
      const auto [k, l] = pairs[static_cast<std::size_t>(q)];
      // Exactly one shared site: hop the unshared excitation.
      if (i == k && j != l) h(p, q) = at(j, l);
      else if (i == l && j != k) h(p, q) = at(j, k);
      else if (j == k && i != l) h(p, q) = at(i, l);
      else if (j == l && i != k) h(p, q) = at(i, k);
    }
  }
  return h;
}

ExcitonModel build_manifolds(const ManifoldSource& source) {
  const BuildOptions& opt = source.options;
  if (const auto* fs = std::get_if<FromSites>(&source.data)) {
    if (fs->sites.empty()) throw DegenerateInputError("model has no sites");
    std::vector<Vec3> dipoles;
    for (const auto& s : fs->sites) {
      if (!(s.site_energy > 0.0)) throw DegenerateInputError("site energy must be positive");
      dipoles.push_back(s.is_dark ? Vec3::Zero() : s.dipole);
    }
    const CMatrix h1 = one_exciton_hamiltonian(*fs);
    const auto pairs = site_pairs(fs->sites.size());
    ExcitonModel m =
        assemble(h1, two_exciton_hamiltonian(h1, pairs), contract(dipoles, opt.polarization), pairs, opt);
    m.id = source.id;
    return m;
  }
  const auto& ex = std::get<ExplicitManifolds>(source.data);
  ExcitonModel m = assemble(ex.h_e, ex.h_f, contract(ex.site_dipoles, opt.polarization), ex.pairs, opt);
  m.id = source.id;
  return m;
}

SpectrumGrid absorption_spectrum(const ExcitonModel& model, const Axis& grid) {
  SpectrumGrid out = SpectrumGrid::make_1d(grid);
  for (std::size_t k = 0; k < grid.count; ++k) {
    const double w = grid.at(k);
    double a = 0.0;
    for (Eigen::Index e = 0; e < model.e_energies.size(); ++e) {
      const double g = model.gamma_e(e);
      const double d = w - model.e_energies(e);
      a += std::norm(model.mu_ge(e)) * g / (d * d + g * g);
    }
    out.values[k] = a;
  }
  out.meta["quantity"] = "absorption";
  out.meta["model"] = model.id;
  return out;
}

}  // namespace twinex
