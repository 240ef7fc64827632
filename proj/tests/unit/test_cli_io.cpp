#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "twinex/errors.hpp"
#include "twinex/model_io.hpp"
#include "twinex/response.hpp"
#include "twinex/run.hpp"
#include "twinex/serialize.hpp"

using namespace twinex;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("twinex_test_" + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path put(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string config_error(const std::string& text) {
  try {
    parse_model(text, "m.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kDimer = R"({
  "id": "d",
  "gamma_e_cm1": 200,
  "sites": [
    {"position_angstrom": [0, 0, 0], "dipole_debye": [5, 0, 0], "energy_cm1": 11000},
    {"position_angstrom": [0, 6, 0], "dipole_debye": [5, 0, 0], "energy_cm1": 11000}
  ]
})";

std::string with(std::string s, const std::string& from, const std::string& to) {
  const auto p = s.find(from);
  REQUIRE(p != std::string::npos);
  return s.replace(p, from.size(), to);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("shipped homodimer loads") {
  const ManifoldSource src = load_model(fixtures::data("models/homodimer.json"));
  const auto& s = std::get<FromSites>(src.data);
  CHECK(s.sites.size() == 2);
  const ExcitonModel m = build_manifolds(src);
  CHECK(m.e_energies(0) == doctest::Approx(10500.0));
  CHECK(m.e_energies(1) == doctest::Approx(11500.0));
}

TEST_CASE("model diagnostics name the field and the line") {
  const std::string neg = config_error(with(kDimer, "\"energy_cm1\": 11000}\n  ]", "\"energy_cm1\": -5}\n  ]"));
  CHECK(neg.find("m.json:6:") == 0);
  CHECK(neg.find("sites[1].energy_cm1") != std::string::npos);

  CHECK(config_error(with(kDimer, "\"id\": \"d\",", "\"id\": \"d\", \"colour\": 1,")).find("colour") !=
        std::string::npos);
  CHECK(config_error(with(kDimer, "gamma_e_cm1", "gamma_e")).find("missing unit suffix") != std::string::npos);
  CHECK(config_error(with(kDimer, "gamma_e_cm1", "gamma_e_ev")).find("wrong unit tag") != std::string::npos);
  CHECK(config_error("{\"id\": ").find("malformed JSON") != std::string::npos);

  const std::string explicit_bad = R"({
    "id": "x", "gamma_e_cm1": 200,
    "explicit": {
      "h_e_cm1": [[12000, 100, 0], [101, 12500, 0], [0, 0, 13000]],
      "h_f_cm1": [[24000]],
      "site_dipoles_debye": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
      "pairs": [[0, 1]]
    }
  })";
  CHECK(config_error(explicit_bad).find("Hermitian") != std::string::npos);
}

TEST_CASE("density matrix text round trip is exact") {
  const ExcitonModel m = fixtures::dimer();
  const DensityMatrix rho = rho_f_fourth(m, fixtures::light(LightKind::Stochastic, 12400.0, 11900.0, 25.0));
  std::stringstream ss;
  write_density_matrix(ss, rho);
  const DensityMatrix back = read_density_matrix(ss);
  CHECK(back.manifold == rho.manifold);
  CHECK(back.normalized == rho.normalized);
  CHECK((back.data - rho.data).norm() == 0.0);
}

TEST_CASE("grid text round trip is exact") {
  SpectrumGrid g = SpectrumGrid::make_2d(Axis::uniform("wp", 21000.0, 21300.0, 100.0), Axis{"state", 0.0, 1.0, 3});
  std::mt19937 rng(7);
  std::normal_distribution<double> n(0.0, 1e-3);
  for (double& v : g.values) v = n(rng);
  g.meta["k"] = "v";
  std::stringstream ss;
  write_grid(ss, g);
  const SpectrumGrid back = read_grid(ss);
  CHECK(back.values == g.values);
  CHECK(back.axes[0].start == g.axes[0].start);
  CHECK(back.axes[1].name == "state");
  CHECK(back.meta.at("k") == "v");
  CHECK(format_number(0.1) == "0.10000000000000001");
}

TEST_CASE("config hash follows semantic fields only") {
  TempDir t;
  t.put("m.json", kDimer);
  const std::string base = R"({"model_path": "m.json", "task": "density",
    "light": {"kind": "twin", "omega1_cm1": 12000, "omega2_cm1": 11000, "T_fs": 30, "amplitude": 1},
    "output_dir": "a", "threads": 1})";
  const std::string h0 = load_run_config(t.put("c0.json", base).string()).hash;
  CHECK(h0.size() == 64);
  CHECK(load_run_config(t.put("c1.json", with(base, "\"a\", \"threads\": 1", "\"b\", \"threads\": 3")).string())
            .hash == h0);
  CHECK(load_run_config(t.put("c2.json", with(base, "\"T_fs\": 30", "\"T_fs\": 31")).string()).hash != h0);
  t.put("m.json", with(kDimer, "11000}\n  ]", "11001}\n  ]"));
  CHECK(load_run_config((t.path / "c0.json").string()).hash != h0);
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("absorption run writes a grid and a manifest") {
  TempDir t;
  const fs::path cfg = fixtures::data("configs/homodimer_absorption.json");
  std::ostringstream err;
  REQUIRE(run_from_file(cfg.string(), t.path.string(), 1u, err) == kExitOk);
  std::ifstream in(t.path / "absorption.dat");
  const SpectrumGrid g = read_grid(in);
  std::size_t best = 0;
  for (std::size_t k = 0; k < g.values.size(); ++k)
    if (g.values[k] > g.values[best]) best = k;
  CHECK(g.axes[0].at(best) == doctest::Approx(11500.0));
  CHECK(g.meta.at("config_sha256") == load_run_config(cfg.string()).hash);
  CHECK(slurp(t.path / "manifest").find("\"exit_code\": 0") != std::string::npos);
}

TEST_CASE("density run footers") {
  TempDir t;
  std::ostringstream err;
  REQUIRE(run_from_file(fixtures::data("configs/homodimer_density_twin.json"), t.path.string(), 1u, err) == kExitOk);
  std::ifstream in(t.path / "rho_f.dat");
  CHECK(footer_purity(in) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("verify exit codes") {
  TempDir t;
  t.put("m.json", kDimer);
  const std::string base = R"({"model_path": "m.json", "task": "verify",
    "light": {"kind": "twin", "omega1_cm1": 12000, "omega2_cm1": 11000, "T_fs": 30, "amplitude": 1},
    "verify": {"tolerance_second": 1e-3, "tolerance_fourth": 1e-2, "n_steps": 256, "kinds": ["twin"]}})";
  std::ostringstream err;
  CHECK(run_from_file(t.put("ok.json", base).string(), (t.path / "ok").string(), 1u, err) == kExitOk);

  const std::string strict = with(with(base, "\"tolerance_second\": 1e-3", "\"tolerance_second\": 0"),
                                  "\"tolerance_fourth\": 1e-2", "\"tolerance_fourth\": 0");
  CHECK(run_from_file(t.put("strict.json", strict).string(), (t.path / "strict").string(), 1u, err) ==
        kExitVerification);
  const std::string report = slurp(t.path / "strict" / "verify_report.tsv");
  CHECK(report.find("\tpass\n") == std::string::npos);

  t.put("z.json", with(with(kDimer, "[5, 0, 0]", "[0, 0, 0]"), "[5, 0, 0]", "[0, 0, 0]"));
  CHECK(run_from_file(t.put("zero.json", with(base, "m.json", "z.json")).string(), (t.path / "zero").string(), 1u,
                      err) == kExitOk);
}

TEST_CASE("failed runs leave no partial outputs") {
  TempDir t;
  // one site: the second-order matrix is written, then the empty f-manifold fails
  t.put("one.json", R"({"id": "one", "gamma_e_cm1": 200,
    "sites": [{"position_angstrom": [0, 0, 0], "dipole_debye": [5, 0, 0], "energy_cm1": 12000}]})");
  t.put("c.json", R"({"model_path": "one.json", "task": "density",
    "light": {"kind": "twin", "omega1_cm1": 12000, "omega2_cm1": 11000, "T_fs": 30, "amplitude": 1}})");
  std::ostringstream err;
  CHECK(run_from_file((t.path / "c.json").string(), (t.path / "out").string(), 1u, err) == kExitComputation);
  CHECK(fs::is_empty(t.path / "out"));

  t.put("bad.json", R"({"model_path": "one.json", "task": "absorption", "grids": {"absorption": {"start_cm1": 1}}})");
  std::ostringstream err2;
  CHECK(run_from_file((t.path / "bad.json").string(), std::nullopt, 1u, err2) == kExitConfig);
  CHECK(err2.str().find("bad.json:") != std::string::npos);
  CHECK(run_from_file((t.path / "missing.json").string(), std::nullopt, 1u, err2) == kExitConfig);
}
