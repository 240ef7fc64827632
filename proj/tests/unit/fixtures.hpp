#pragma once

#include <random>
#include <string>

#include "twinex/exciton_model.hpp"
#include "twinex/light_sources.hpp"
#include "twinex/model_io.hpp"

namespace fixtures {

inline std::string data(const std::string& rel) { return std::string(TWINEX_DATA_DIR) + "/" + rel; }

inline twinex::ExcitonModel shipped(const std::string& name) {
  return twinex::build_manifolds(twinex::load_model(data("models/" + name + ".json")));
}

inline twinex::SiteSpec site(twinex::Vec3 pos, twinex::Vec3 dip, double energy, std::string label = "") {
  twinex::SiteSpec s;
  s.position = pos;
  s.dipole = dip;
  s.site_energy = energy;
  s.label = std::move(label);
  return s;
}

inline twinex::ManifoldSource from_sites(std::vector<twinex::SiteSpec> sites,
                                         std::vector<twinex::CouplingOverride> overrides = {}) {
  twinex::ManifoldSource src;
  src.data = twinex::FromSites{std::move(sites), std::move(overrides)};
  src.id = "test";
  return src;
}

inline twinex::ExcitonModel dimer(double e1 = 11800.0, double e2 = 12400.0) {
  return twinex::build_manifolds(from_sites({site({0, 0, 0}, {4.0, 1.0, 0.0}, e1, "a"),
                                             site({0, 7, 1}, {3.0, -2.0, 0.5}, e2, "b")}));
}

inline twinex::ExcitonModel single_site(double e = 12000.0) {
  return twinex::build_manifolds(from_sites({site({0, 0, 0}, {5.0, 0.0, 0.0}, e)}));
}

// Random aggregate of 2-3 sites.
inline twinex::ExcitonModel random_model(std::mt19937& rng, int n_sites) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), en(11200.0, 12800.0);
  std::vector<twinex::SiteSpec> sites;
  for (int i = 0; i < n_sites; ++i) {
    const twinex::Vec3 pos = twinex::Vec3(7.0 * i, 3.0 * u(rng), 2.0 * u(rng));
    sites.push_back(site(pos, 4.5 * twinex::Vec3(u(rng), u(rng), u(rng)).normalized(), en(rng)));
  }
  return twinex::build_manifolds(from_sites(sites));
}

inline twinex::LightSpec light(twinex::LightKind k, double w1, double w2, double T, double a = 1.0) {
  return {k, w1, w2, T, a};
}

}  // namespace fixtures
