#include "twinex/spectra.hpp"

#include <cmath>
#include <sstream>

#include "twinex/errors.hpp"
#include "twinex/parallel.hpp"
#include "twinex/response.hpp"

namespace twinex {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_pump_grid(const LightSpec& tmpl, const Axis& wp) {
  if (wp.count == 0) throw DomainError("empty pump grid");
  const double lowest = std::min(wp.at(0), wp.at(wp.count - 1));
  if (!(lowest - tmpl.omega2 > 0.0))
    throw DomainError("pump grid reaches omega1 = wp - omega2 <= 0 (wp = " + fmt(lowest) + ")");
}

void tag(SpectrumGrid& g, const ExcitonModel& m, const LightSpec& s, const std::string& quantity) {
  g.meta["quantity"] = quantity;
  g.meta["model"] = m.id;
  g.meta["light"] = to_string(s.kind);
  g.meta["omega2_cm1"] = fmt(s.omega2);
  g.meta["T_fs"] = fmt(s.entanglement_time);
  g.meta["amplitude"] = fmt(s.amplitude);
}

}  // namespace

void EmissionConfig::validate() const {
  if (!(gamma_inst > 0.0)) throw ConfigError("gamma_inst_cm1 must be positive");
  if (ws_grid.count == 0 || !(ws_grid.step > 0.0)) throw ConfigError("emission grid must be nonempty and increasing");
}

double unit_lorentzian(double x, double gamma) { return gamma * gamma / (x * x + gamma * gamma); }

LightSpec pumped(const LightSpec& tmpl, double wp) {
  LightSpec s = tmpl;
  s.omega1 = wp - tmpl.omega2;
  if (!(s.omega1 > 0.0)) throw DomainError("omega1 = wp - omega2 must be positive");
  return s;
}

SpectrumGrid dispersed_fluorescence(const ExcitonModel& m, const DensityMatrix& rho_e, const DensityMatrix& rho_f,
                                    const EmissionConfig& cfg) {
  cfg.validate();
  if (rho_e.manifold != Manifold::E || rho_e.size() != m.n_e())
    throw UsageError("dispersed_fluorescence: rho_e does not match the model's e-manifold");
  if (rho_f.manifold != Manifold::F || rho_f.size() != m.n_f())
    throw UsageError("dispersed_fluorescence: rho_f does not match the model's f-manifold");
  SpectrumGrid out = SpectrumGrid::make_1d(cfg.ws_grid);
  const RVector pe = rho_e.populations();
  const RVector pf = rho_f.populations();
  for (std::size_t k = 0; k < cfg.ws_grid.count; ++k) {
    const double ws = cfg.ws_grid.at(k);
    double s = 0.0;
    for (std::size_t f = 0; f < m.n_f(); ++f) {
      if (pf(f) == 0.0) continue;
      for (std::size_t e = 0; e < m.n_e(); ++e)
        s += std::norm(m.mu_ef(f, e)) * pf(f) * unit_lorentzian(m.f_energies(f) - m.e_energies(e) - ws, cfg.gamma_inst);
    }
    for (std::size_t e = 0; e < m.n_e(); ++e)
      s += std::norm(m.mu_ge(e)) * pe(e) * unit_lorentzian(m.e_energies(e) - ws, cfg.gamma_inst);
    out.values[k] = s;
  }
  out.meta["quantity"] = "dispersed_fluorescence";
  out.meta["model"] = m.id;
  out.meta["gamma_inst_cm1"] = fmt(cfg.gamma_inst);
  return out;
}

SpectrumGrid sweep_2d(const ExcitonModel& m, const LightSpec& tmpl, const Axis& wp, const EmissionConfig& cfg,
                      unsigned threads) {
  cfg.validate();
  check_pump_grid(tmpl, wp);
  Axis rows = wp;
  rows.name = "wp";
  SpectrumGrid out = SpectrumGrid::make_2d(rows, cfg.ws_grid);
  parallel_for(wp.count, threads, [&](std::size_t r) {
    const LightSpec s = pumped(tmpl, wp.at(r));
    const FourthOrderDensities d = fourth_order_densities(m, s);
    const SpectrumGrid col = dispersed_fluorescence(m, d.e, d.f, cfg);
    for (std::size_t c = 0; c < col.values.size(); ++c) out.at(r, c) = col.values[c];
  });
  tag(out, m, tmpl, "sweep2d");
  out.meta["gamma_inst_cm1"] = fmt(cfg.gamma_inst);
  return out;
}

SpectrumGrid integrate_emission(const SpectrumGrid& sweep) {
  if (sweep.axes.size() != 2) throw UsageError("integrate_emission: 2D sweep expected");
  SpectrumGrid out = SpectrumGrid::make_1d(sweep.axes[0]);
  const double h = sweep.axes[1].step;
  const std::size_t n = sweep.cols();
  for (std::size_t r = 0; r < sweep.rows(); ++r) {
    double acc = 0.0;
    for (std::size_t c = 0; c < n; ++c) acc += (c == 0 || c + 1 == n ? 0.5 : 1.0) * sweep.at(r, c);
    out.values[r] = n > 1 ? acc * h : 0.0;
  }
  out.meta = sweep.meta;
  out.meta["quantity"] = "action";
  return out;
}

SpectrumGrid action_spectrum(const ExcitonModel& m, const LightSpec& tmpl, const Axis& wp, const EmissionConfig& cfg,
                             unsigned threads) {
  return integrate_emission(sweep_2d(m, tmpl, wp, cfg, threads));
}

SpectrumGrid population_sweep(const ExcitonModel& m, const LightSpec& tmpl, const Axis& wp, const Axis& w2,
                              PopulationTarget target, unsigned threads) {
  if (wp.count == 0 || w2.count == 0) throw DomainError("empty population grid");
  if (!(wp.start > 0.0) || !(w2.start > 0.0)) throw DomainError("population grids must be positive");
  if (target == PopulationTarget::ETotal2nd && tmpl.kind == LightKind::CwPair)
    throw UsageError("second-order population needs twin or stochastic light");
  for (std::size_t r = 0; r < wp.count; ++r)
    for (std::size_t c = 0; c < w2.count; ++c)
      if (!(wp.at(r) - w2.at(c) > 0.0)) throw DomainError("population grid reaches omega1 <= 0");
  Axis rows = wp, cols = w2;
  rows.name = "wp";
  cols.name = "w2";
  SpectrumGrid out = SpectrumGrid::make_2d(rows, cols);
  parallel_for(wp.count * w2.count, threads, [&](std::size_t k) {
    const std::size_t r = k / w2.count, c = k % w2.count;
    LightSpec s = tmpl;
    s.omega2 = w2.at(c);
    s.omega1 = wp.at(r) - s.omega2;
    out.at(r, c) = target == PopulationTarget::ETotal2nd ? rho_e_second_order(m, s).trace()
                                                          : rho_f_fourth(m, s).trace();
  });
  tag(out, m, tmpl, target == PopulationTarget::ETotal2nd ? "population_e2" : "population_f");
  out.meta.erase("omega2_cm1");
  return out;
}

SpectrumGrid state_distribution(const ExcitonModel& m, const LightSpec& tmpl, const Axis& wp, Manifold manifold,
                                unsigned threads) {
  check_pump_grid(tmpl, wp);
  const std::size_t n = manifold == Manifold::E ? m.n_e() : m.n_f();
  if (n == 0) throw DegenerateInputError("state_distribution: empty manifold");
  Axis rows = wp;
  rows.name = "wp";
  SpectrumGrid out = SpectrumGrid::make_2d(rows, Axis{"state", 0.0, 1.0, n});
  std::vector<char> empty(wp.count, 0);
  parallel_for(wp.count, threads, [&](std::size_t r) {
    const LightSpec s = pumped(tmpl, wp.at(r));
    const RVector p = (manifold == Manifold::E ? rho_e_fourth(m, s) : rho_f_fourth(m, s)).populations();
    const double total = p.sum();
    // e totals can be negative (dispersive eII), only an exact zero is flagged
    if (total == 0.0 || !std::isfinite(total)) {
      empty[r] = 1;
      return;
    }
    for (std::size_t i = 0; i < n; ++i) out.at(r, i) = p(i) / total;
  });
  tag(out, m, tmpl, std::string("distribution_") + to_string(manifold));
  std::string list;
  for (std::size_t r = 0; r < wp.count; ++r)
    if (empty[r]) list += (list.empty() ? "" : ",") + std::to_string(r);
  if (!list.empty()) out.meta["empty_rows"] = list;
  return out;
}

}  // namespace twinex
