#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "../unit/fixtures.hpp"
#include "twinex/oracle.hpp"
#include "twinex/response.hpp"

using namespace twinex;

namespace {

double rel(const CMatrix& a, const CMatrix& ref) {
  const double n = ref.norm();
  return n == 0.0 ? a.norm() : (a - ref).norm() / n;
}

struct Draw {
  ExcitonModel model;
  LightSpec light;
};

// Frequencies land near the model's own transitions so the response is not
// dominated by far off-resonant tails.
Draw draw(std::mt19937& rng, LightKind kind) {
  std::uniform_int_distribution<int> sites(2, 3);
  std::uniform_real_distribution<double> detune(-400.0, 400.0), tfs(15.0, 60.0);
  Draw d{fixtures::random_model(rng, sites(rng)), {}};
  const double e = d.model.e_energies(0);
  const double f = d.model.f_energies(0);
  const double w2 = e + detune(rng) - 600.0;
  d.light = fixtures::light(kind, f - w2 + detune(rng), w2, tfs(rng));
  return d;
}

}  // namespace

TEST_CASE("closed forms agree with the oracle on random aggregates") {
  std::mt19937 rng(20261016);
  for (int set = 0; set < 6; ++set) {
    for (LightKind k : {LightKind::Twin, LightKind::Stochastic}) {
      const Draw d = draw(rng, k);
      CAPTURE(set);
      CAPTURE(to_string(k));
      CAPTURE(d.model.n_e());
      CAPTURE(d.light.omega1);
      CAPTURE(d.light.omega2);
      CAPTURE(d.light.entanglement_time);
      OracleConfig second;
      second.order = OracleOrder::Second;
      second.tolerance = 1e-3;
      CHECK(rel(rho_e_second_order(d.model, d.light).data,
                time_domain_oracle(d.model, d.light, OracleTerm::E2, second).data) < 1e-3);
      CHECK(rel(rho_f_fourth(d.model, d.light).data, time_domain_oracle(d.model, d.light, OracleTerm::FIII).data) <
            1e-2);
      CHECK(rel(rho_e_fourth(d.model, d.light).data, time_domain_oracle(d.model, d.light, OracleTerm::EII).data) <
            1e-2);
      if (k == LightKind::Twin)
        CHECK(rel(rho_e_raman_entangled(d.model, d.light).data,
                  time_domain_oracle(d.model, d.light, OracleTerm::EI).data) < 1e-2);
    }
  }
}

TEST_CASE("random aggregates keep the structural invariants") {
  std::mt19937 rng(99);
  for (int set = 0; set < 20; ++set) {
    const Draw d = draw(rng, LightKind::Twin);
    const DensityMatrix f = rho_f_fourth(d.model, d.light);
    f.check_invariants();
    if (f.trace() > 0.0) CHECK(purity(f.normalized_copy()) == doctest::Approx(1.0).epsilon(1e-10));
    LightSpec swapped = d.light;
    std::swap(swapped.omega1, swapped.omega2);
    CHECK(rel(rho_f_fourth(d.model, swapped).data, f.data) < 1e-10);
    LightSpec doubled = d.light;
    doubled.amplitude = 2.0;
    CHECK(rel(rho_f_fourth(d.model, doubled).data, 4.0 * f.data) < 1e-12);
    const DensityMatrix s = rho_f_fourth(d.model, d.light.with_kind(LightKind::Stochastic));
    s.check_invariants();
  }
}
