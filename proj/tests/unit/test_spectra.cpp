#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "twinex/errors.hpp"
#include "twinex/response.hpp"
#include "twinex/spectra.hpp"

using namespace twinex;
using fixtures::light;

namespace {

DensityMatrix zero(Manifold m, std::size_t n) { return {m, CMatrix::Zero(n, n), false}; }

DensityMatrix diag(Manifold m, std::initializer_list<double> p) {
  DensityMatrix d = zero(m, p.size());
  int i = 0;
  for (double v : p) {
    d.data(i, i) = v;
    ++i;
  }
  return d;
}

std::size_t argmax(const SpectrumGrid& g, std::size_t lo = 0, std::size_t hi = 0) {
  if (hi == 0) hi = g.values.size();
  std::size_t best = lo;
  for (std::size_t k = lo; k < hi; ++k)
    if (g.values[k] > g.values[best]) best = k;
  return best;
}

}  // namespace

TEST_CASE("fluorescence of empty manifolds is zero") {
  const ExcitonModel m = fixtures::shipped("homodimer");
  const SpectrumGrid g = dispersed_fluorescence(m, zero(Manifold::E, m.n_e()), zero(Manifold::F, m.n_f()), {});
  for (double v : g.values) CHECK(v == 0.0);
}

TEST_CASE("single emitting state peaks at its energy with height |mu|^2 p") {
  const ExcitonModel m = fixtures::single_site(12000.0);
  EmissionConfig cfg;
  cfg.ws_grid = Axis::uniform("ws", 11000.0, 13000.0, 1.0);
  const SpectrumGrid g = dispersed_fluorescence(m, diag(Manifold::E, {0.3}), zero(Manifold::F, 0), cfg);
  const std::size_t k = argmax(g);
  CHECK(g.axes[0].at(k) == doctest::Approx(12000.0));
  CHECK(g.values[k] == doctest::Approx(std::norm(m.mu_ge(0)) * 0.3).epsilon(1e-12));
}

TEST_CASE("homodimer f population emits at f minus the bright e") {
  const ExcitonModel m = fixtures::shipped("homodimer");
  EmissionConfig cfg;
  cfg.ws_grid = Axis::uniform("ws", 10000.0, 12000.0, 5.0);
  const SpectrumGrid g = dispersed_fluorescence(m, zero(Manifold::E, m.n_e()), diag(Manifold::F, {1.0}), cfg);
  CHECK(g.axes[0].at(argmax(g)) == doctest::Approx(10500.0));
}

TEST_CASE("fluorescence is linear in the populations") {
  const ExcitonModel m = fixtures::shipped("homodimer");
  const auto a = dispersed_fluorescence(m, diag(Manifold::E, {0.2, 0.7}), diag(Manifold::F, {0.1}), {});
  const auto b = dispersed_fluorescence(m, diag(Manifold::E, {0.5, 0.0}), diag(Manifold::F, {0.4}), {});
  const auto c = dispersed_fluorescence(m, diag(Manifold::E, {0.2 + 2 * 0.5, 0.7}), diag(Manifold::F, {0.1 + 2 * 0.4}), {});
  for (std::size_t k = 0; k < a.values.size(); ++k)
    CHECK(c.values[k] == doctest::Approx(a.values[k] + 2 * b.values[k]).epsilon(1e-12));
}

TEST_CASE("unit Lorentzian area") {
  const double gamma = 30.0;
  double acc = 0.0;
  for (double x = -20000.0; x <= 20000.0; x += 0.5) acc += 0.5 * unit_lorentzian(x, gamma);
  CHECK(std::abs(acc / (std::numbers::pi * gamma) - 1.0) < 0.02);
}

TEST_CASE("sweep rows are dispersed fluorescence and the action integrates them") {
  const ExcitonModel m = fixtures::shipped("homodimer");
  const LightSpec tmpl = light(LightKind::Twin, 0.0, 11000.0, 30.0);
  EmissionConfig cfg;
  cfg.ws_grid = Axis::uniform("ws", 10000.0, 12000.0, 10.0);
  const Axis wp = Axis::uniform("wp", 21800.0, 22200.0, 100.0);
  const SpectrumGrid sw = sweep_2d(m, tmpl, wp, cfg, 1);
  const SpectrumGrid act = action_spectrum(m, tmpl, wp, cfg, 2);
  REQUIRE(sw.rows() == wp.count);
  for (std::size_t r = 0; r < wp.count; ++r) {
    const FourthOrderDensities d = fourth_order_densities(m, pumped(tmpl, wp.at(r)));
    const SpectrumGrid row = dispersed_fluorescence(m, d.e, d.f, cfg);
    double trap = 0.0;
    for (std::size_t c = 0; c < sw.cols(); ++c) {
      CHECK(sw.at(r, c) == row.values[c]);
      trap += (c == 0 || c + 1 == sw.cols() ? 0.5 : 1.0) * row.values[c];
    }
    CHECK(act.values[r] == doctest::Approx(trap * cfg.ws_grid.step).epsilon(1e-12));
  }
  CHECK(sw.meta.at("quantity") == "sweep2d");
}

TEST_CASE("state distribution rows sum to one") {
  const ExcitonModel m = fixtures::shipped("heterotrimer");
  const Axis wp = Axis::uniform("wp", 23000.0, 25000.0, 500.0);
  for (LightKind k : {LightKind::Twin, LightKind::Stochastic})
    for (Manifold man : {Manifold::E, Manifold::F}) {
      const SpectrumGrid g = state_distribution(m, light(k, 0.0, 11500.0, 30.0), wp, man, 1);
      for (std::size_t r = 0; r < g.rows(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < g.cols(); ++c) s += g.at(r, c);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
}

TEST_CASE("zero dipoles give a zero population grid and flagged distribution rows") {
  const ExcitonModel m = build_manifolds(fixtures::from_sites(
      {fixtures::site({0, 0, 0}, {0, 0, 0}, 12000.0), fixtures::site({0, 8, 0}, {0, 0, 0}, 12500.0)}));
  const LightSpec tmpl = light(LightKind::Twin, 0.0, 11000.0, 30.0);
  const SpectrumGrid p = population_sweep(m, tmpl, Axis::uniform("wp", 23000.0, 25000.0, 1000.0),
                                          Axis::uniform("w2", 11000.0, 12000.0, 500.0), PopulationTarget::FTotal, 1);
  for (double v : p.values) CHECK(v == 0.0);
  const SpectrumGrid d = state_distribution(m, tmpl, Axis::uniform("wp", 23000.0, 24000.0, 1000.0), Manifold::F, 1);
  CHECK(d.meta.at("empty_rows") == "0,1");
}

TEST_CASE("second-order e population is the same for twin and stochastic light") {
  const ExcitonModel m = fixtures::shipped("heterotrimer");
  const Axis wp = Axis::uniform("wp", 23000.0, 24000.0, 500.0);
  const Axis w2 = Axis::uniform("w2", 11000.0, 12000.0, 500.0);
  const auto a = population_sweep(m, light(LightKind::Twin, 0.0, 0.0, 30.0), wp, w2, PopulationTarget::ETotal2nd, 1);
  const auto b =
      population_sweep(m, light(LightKind::Stochastic, 0.0, 0.0, 30.0), wp, w2, PopulationTarget::ETotal2nd, 1);
  for (std::size_t k = 0; k < a.values.size(); ++k) CHECK(b.values[k] == doctest::Approx(a.values[k]).epsilon(1e-12));
  CHECK_THROWS_AS(
      population_sweep(m, light(LightKind::CwPair, 0.0, 0.0, 30.0), wp, w2, PopulationTarget::ETotal2nd, 1),
      UsageError);
}

TEST_CASE("domain and contract errors") {
  const ExcitonModel m = fixtures::shipped("homodimer");
  const LightSpec tmpl = light(LightKind::Twin, 0.0, 11000.0, 30.0);
  CHECK_THROWS_AS(sweep_2d(m, tmpl, Axis::uniform("wp", 10000.0, 12000.0, 500.0), {}, 1), DomainError);
  CHECK_THROWS_AS(pumped(tmpl, 11000.0), DomainError);
  CHECK_THROWS_AS(population_sweep(m, tmpl, Axis::uniform("wp", 20000.0, 21000.0, 500.0),
                                   Axis::uniform("w2", 20500.0, 21000.0, 500.0), PopulationTarget::FTotal, 1),
                  DomainError);
  CHECK_THROWS_AS(dispersed_fluorescence(m, zero(Manifold::F, m.n_f()), zero(Manifold::F, m.n_f()), {}), UsageError);
  CHECK_THROWS_AS(dispersed_fluorescence(m, zero(Manifold::E, 3), zero(Manifold::F, m.n_f()), {}), UsageError);
  EmissionConfig bad;
  bad.gamma_inst = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
