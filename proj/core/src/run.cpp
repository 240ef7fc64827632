#include "twinex/run.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json_doc.hpp"
#include "twinex/errors.hpp"
#include "twinex/model_io.hpp"
#include "twinex/parallel.hpp"
#include "twinex/response.hpp"
#include "twinex/serialize.hpp"

#ifndef TWINEX_VERSION
#define TWINEX_VERSION "dev"
#endif

namespace twinex {
namespace fs = std::filesystem;
namespace {

using detail::Fields;
using detail::JsonDoc;
using detail::ojson;

constexpr Task kTasks[] = {Task::Absorption,   Task::Density,      Task::Sweep2d, Task::Action,
                           Task::Populations, Task::Distribution, Task::Verify};

bool needs_light(Task t) { return t != Task::Absorption; }
bool pump_sweep(Task t) {
  return t == Task::Sweep2d || t == Task::Action || t == Task::Populations || t == Task::Distribution;
}

Axis read_axis(const JsonDoc& doc, const Fields& grids, const std::string& key, const std::string& name) {
  const Fields g(doc, grids.node(key), grids.path(key));
  g.only({"start_cm1", "stop_cm1", "step_cm1"});
  const double start = g.number("start_cm1");
  const double stop = g.number("stop_cm1");
  const double step = g.number("step_cm1");
  if (!(step > 0.0)) g.fail("step_cm1", "must be positive");
  if (!(start < stop) && !(start == stop)) g.fail("stop_cm1", "must not be below start_cm1");
  if ((stop - start) / step > 1e6) g.fail("step_cm1", "grid would have more than a million points");
  return Axis::uniform(name, start, stop, step);
}

ojson axis_json(const Axis& a) { return ojson{{"name", a.name}, {"start", a.start}, {"step", a.step}, {"count", a.count}}; }

// Everything that can change an output byte, with defaults resolved so that
// spelling out a default does not change the hash.
std::string canonical(const RunConfig& c, const std::string& model_text) {
  nlohmann::json j;
  j["model"] = nlohmann::json::parse(model_text);
  j["task"] = to_string(c.task);
  if (needs_light(c.task)) {
    j["light"] = {{"kind", to_string(c.light.kind)},
                  {"omega1", c.light.omega1},
                  {"omega2", c.light.omega2},
                  {"T", c.light.entanglement_time},
                  {"amplitude", c.light.amplitude}};
  }
  switch (c.task) {
    case Task::Absorption: j["grid"] = axis_json(c.absorption_grid); break;
    case Task::Density: break;
    case Task::Sweep2d:
    case Task::Action:
      j["wp"] = axis_json(*c.wp_grid);
      j["ws"] = axis_json(c.emission.ws_grid);
      j["gamma_inst"] = c.emission.gamma_inst;
      break;
    case Task::Populations:
      j["wp"] = axis_json(*c.wp_grid);
      j["w2"] = axis_json(*c.w2_grid);
      j["target"] = c.population_target == PopulationTarget::FTotal ? "f_total" : "e_total_2nd";
      break;
    case Task::Distribution:
      j["wp"] = axis_json(*c.wp_grid);
      j["manifold"] = to_string(c.distribution_manifold);
      break;
    case Task::Verify: {
      auto kinds = nlohmann::json::array();
      for (auto k : c.verify.kinds) kinds.push_back(to_string(k));
      j["verify"] = {{"tolerance_second", c.verify.tolerance_second},
                     {"tolerance_fourth", c.verify.tolerance_fourth},
                     {"n_steps", c.verify.n_steps},
                     {"t_max", c.verify.t_max},
                     {"kinds", kinds}};
      break;
    }
  }
  return j.dump();
}

}  // namespace

const char* to_string(Task t) {
  switch (t) {
    case Task::Absorption: return "absorption";
    case Task::Density: return "density";
    case Task::Sweep2d: return "sweep2d";
    case Task::Action: return "action";
    case Task::Populations: return "populations";
    case Task::Distribution: return "distribution";
    case Task::Verify: return "verify";
  }
  return "?";
}

Task task_from_string(const std::string& s) {
  for (Task t : kTasks)
    if (s == to_string(t)) return t;
  throw ConfigError("unknown task '" + s + "'");
}

const char* version() { return TWINEX_VERSION; }

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

RunConfig load_run_config(const std::string& path) {
  const JsonDoc doc = JsonDoc::load(path);
  const Fields top(doc, doc.root(), "");
  top.only({"model_path", "task", "light", "grids", "emission", "populations", "distribution", "verify",
            "output_dir", "threads"});
  RunConfig c;
  c.config_path = path;
  c.task = [&] {
    const std::string t = top.string("task");
    for (Task k : kTasks)
      if (t == to_string(k)) return k;
    top.fail("task", "unknown task '" + t + "'");
  }();

  fs::path model = top.string("model_path");
  if (model.is_relative()) model = fs::path(path).parent_path() / model;
  c.model_path = model.lexically_normal().string();
  if (!fs::is_regular_file(c.model_path)) top.fail("model_path", "file not found: " + c.model_path);

  static const ojson kEmpty = ojson::object();
  const Fields grids(doc, top.has("grids") ? top.node("grids") : kEmpty, "grids");
  grids.only({"absorption", "wp", "w2", "ws"});
  if (grids.has("absorption")) c.absorption_grid = read_axis(doc, grids, "absorption", "w");
  if (grids.has("wp")) c.wp_grid = read_axis(doc, grids, "wp", "wp");
  if (grids.has("w2")) c.w2_grid = read_axis(doc, grids, "w2", "w2");
  if (grids.has("ws")) c.emission.ws_grid = read_axis(doc, grids, "ws", "ws");
  if (pump_sweep(c.task) && !c.wp_grid) top.fail("grids", "task needs a 'wp' grid");
  if (c.task == Task::Populations && !c.w2_grid) top.fail("grids", "task needs a 'w2' grid");

  if (needs_light(c.task)) {
    const Fields l(doc, top.node("light"), "light");
    l.only({"kind", "omega1_cm1", "omega2_cm1", "T_fs", "amplitude"});
    try {
      c.light.kind = light_kind_from_string(l.string("kind"));
    } catch (const ConfigError& e) {
      l.fail("kind", e.what());
    }
    c.light.omega2 = l.number("omega2_cm1");
    // pump sweeps derive omega1 from each wp
    if (pump_sweep(c.task) && !l.has("omega1_cm1")) {
      c.light.omega1 = c.wp_grid->start - c.light.omega2;
    } else {
      c.light.omega1 = l.number("omega1_cm1");
    }
    if (c.light.kind != LightKind::CwPair || l.has("T_fs")) c.light.entanglement_time = l.number("T_fs");
    c.light.amplitude = l.number_or("amplitude", 1.0);
    if (!(c.light.omega2 > 0.0)) l.fail("omega2_cm1", "must be positive");
    if (!(c.light.omega1 > 0.0)) l.fail(pump_sweep(c.task) ? "omega2_cm1" : "omega1_cm1", "omega1 must be positive");
    if (!(c.light.amplitude > 0.0)) l.fail("amplitude", "must be positive");
    if (c.light.kind != LightKind::CwPair && !(c.light.entanglement_time > 0.0)) l.fail("T_fs", "must be positive");
  } else if (top.has("light")) {
    top.fail("light", "not used by task '" + std::string(to_string(c.task)) + "'");
  }

  if (top.has("emission")) {
    const Fields e(doc, top.node("emission"), "emission");
    e.only({"gamma_inst_cm1"});
    c.emission.gamma_inst = e.number("gamma_inst_cm1");
    if (!(c.emission.gamma_inst > 0.0)) e.fail("gamma_inst_cm1", "must be positive");
  }
  if (top.has("populations")) {
    const Fields p(doc, top.node("populations"), "populations");
    p.only({"target"});
    const std::string t = p.string("target");
    if (t == "f_total") c.population_target = PopulationTarget::FTotal;
    else if (t == "e_total_2nd") c.population_target = PopulationTarget::ETotal2nd;
    else p.fail("target", "expected 'f_total' or 'e_total_2nd'");
    if (c.population_target == PopulationTarget::ETotal2nd && c.light.kind == LightKind::CwPair)
      p.fail("target", "no second-order population for cw_pair light");
  }
  if (top.has("distribution")) {
    const Fields d(doc, top.node("distribution"), "distribution");
    d.only({"manifold"});
    const std::string m = d.string("manifold");
    if (m == "e") c.distribution_manifold = Manifold::E;
    else if (m == "f") c.distribution_manifold = Manifold::F;
    else d.fail("manifold", "expected 'e' or 'f'");
  }
  if (top.has("verify")) {
    const Fields v(doc, top.node("verify"), "verify");
    v.only({"tolerance_second", "tolerance_fourth", "n_steps", "t_max_fs", "kinds"});
    c.verify.tolerance_second = v.number_or("tolerance_second", c.verify.tolerance_second);
    c.verify.tolerance_fourth = v.number_or("tolerance_fourth", c.verify.tolerance_fourth);
    if (c.verify.tolerance_second < 0.0) v.fail("tolerance_second", "must not be negative");
    if (c.verify.tolerance_fourth < 0.0) v.fail("tolerance_fourth", "must not be negative");
    const double n = v.number_or("n_steps", c.verify.n_steps);
    if (n != std::floor(n) || n < 64 || n > 4096) v.fail("n_steps", "must be an integer in [64, 4096]");
    c.verify.n_steps = static_cast<int>(n);
    c.verify.t_max = v.number_or("t_max_fs", 0.0);
    if (c.verify.t_max < 0.0) v.fail("t_max_fs", "must not be negative");
    if (v.has("kinds")) {
      const ojson& ks = v.node("kinds");
      if (!ks.is_array() || ks.empty()) v.fail("kinds", "must be a non-empty array of light kinds");
      c.verify.kinds.clear();
      for (const auto& k : ks) {
        if (!k.is_string()) v.fail("kinds", "entries must be strings");
        try {
          c.verify.kinds.push_back(light_kind_from_string(k.get<std::string>()));
        } catch (const ConfigError& e) {
          v.fail("kinds", e.what());
        }
      }
    }
  }
  if (top.has("output_dir")) c.output_dir = top.string("output_dir");
  if (top.has("threads")) {
    const double t = top.number("threads");
    if (t != std::floor(t) || t < 1 || t > 1024) top.fail("threads", "must be a positive integer");
    c.threads = static_cast<unsigned>(t);
  }

  std::ifstream in(c.model_path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    c.hash = sha256_hex(canonical(c, ss.str()));
  } catch (const nlohmann::json::parse_error&) {
    throw ConfigError(c.model_path + ":1: malformed JSON");
  }
  return c;
}

namespace {

struct Check {
  OracleTerm term;
  LightKind kind;
};

std::vector<Check> supported_checks(const std::vector<LightKind>& kinds) {
  std::vector<Check> out;
  for (LightKind k : kinds) {
    if (k != LightKind::CwPair) out.push_back({OracleTerm::E2, k});
    if (k == LightKind::Twin) out.push_back({OracleTerm::EI, k});
    out.push_back({OracleTerm::EII, k});
    out.push_back({OracleTerm::FIII, k});
  }
  return out;
}

DensityMatrix closed_form(const ExcitonModel& m, const LightSpec& s, OracleTerm t) {
  switch (t) {
    case OracleTerm::E2: return rho_e_second_order(m, s);
    case OracleTerm::EI: return rho_e_raman_entangled(m, s);
    case OracleTerm::EII: return rho_e_fourth(m, s);
    case OracleTerm::FIII: return rho_f_fourth(m, s);
  }
  throw UsageError("unknown oracle term");
}

const char* expression_name(OracleTerm t) {
  switch (t) {
    case OracleTerm::E2: return "rho_e_second_order";
    case OracleTerm::EI: return "rho_e_raman";
    case OracleTerm::EII: return "rho_e_fourth";
    case OracleTerm::FIII: return "rho_f";
  }
  return "?";
}

}  // namespace

bool VerificationReport::passed() const {
  for (const auto& r : rows)
    if (r.status != "pass") return false;
  return true;
}

VerificationReport verify(const ExcitonModel& model, const LightSpec& light, const VerifyOptions& opts,
                          unsigned threads) {
  const auto checks = supported_checks(opts.kinds);
  VerificationReport report;
  report.rows.resize(checks.size());
  parallel_for(checks.size(), threads, [&](std::size_t i) {
    const Check& c = checks[i];
    LightSpec s = light.with_kind(c.kind);
    if (c.kind == LightKind::CwPair && !(s.entanglement_time > 0.0)) s.entanglement_time = 1.0;
    VerificationRow& row = report.rows[i];
    row.expression = expression_name(c.term);
    row.kind = c.kind;
    const bool second = order_of(c.term) == OracleOrder::Second;
    row.tolerance = second ? opts.tolerance_second : opts.tolerance_fourth;
    const DensityMatrix closed = closed_form(model, s, c.term);
    row.closed_norm = closed.data.norm();
    OracleConfig oc;
    oc.t_max = opts.t_max;
    oc.n_steps = opts.n_steps;
    oc.order = order_of(c.term);
    // grid-refinement check, independent of the comparison tolerance
    oc.tolerance = 1e-2;
    try {
      const DensityMatrix ref = time_domain_oracle(model, s, c.term, oc);
      row.oracle_norm = ref.data.norm();
      const double diff = (closed.data - ref.data).norm();
      row.rel_error = row.oracle_norm > 0.0 ? diff / row.oracle_norm : (diff > 0.0 ? INFINITY : 0.0);
      row.status = row.rel_error < row.tolerance ? "pass" : "fail";
    } catch (const ConvergenceError& e) {
      row.oracle_norm = e.fine();
      row.rel_error = std::abs(e.fine() - e.coarse()) / std::max(std::abs(e.fine()), 1e-300);
      row.status = "nonconvergence";
    }
  });
  return report;
}

void write_report(std::ostream& out, const VerificationReport& report) {
  out << "expression\tlight\tclosed_norm\toracle_norm\trel_error\ttolerance\tstatus\n";
  for (const auto& r : report.rows)
    out << r.expression << '\t' << to_string(r.kind) << '\t' << format_number(r.closed_norm) << '\t'
        << format_number(r.oracle_norm) << '\t' << format_number(r.rel_error) << '\t' << format_number(r.tolerance)
        << '\t' << r.status << '\n';
}

namespace {

class Artifacts {
 public:
  explicit Artifacts(fs::path dir) : dir_(std::move(dir)) {}

  template <class F>
  void write(const std::string& name, F&& body) {
    const fs::path p = dir_ / name;
    written_.push_back(p);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ConfigError(p.string() + ": cannot open for writing");
    body(out);
    if (!out) throw Error(p.string() + ": write failed");
  }

  void remove_all() {
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
    written_.clear();
  }

  std::vector<std::string> names() const {
    std::vector<std::string> n;
    for (const auto& p : written_) n.push_back(p.filename().string());
    return n;
  }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

void tag(SpectrumGrid& g, const RunConfig& c) {
  g.meta["config_sha256"] = c.hash;
}

// Returns the exit code of the task itself (verification may fail).
int execute(const RunConfig& c, const ExcitonModel& model, Artifacts& out) {
  const auto grid_file = [&](const std::string& name, SpectrumGrid g) {
    tag(g, c);
    out.write(name, [&](std::ostream& o) { write_grid(o, g); });
  };
  switch (c.task) {
    case Task::Absorption: {
      SpectrumGrid g = absorption_spectrum(model, c.absorption_grid);
      grid_file("absorption.dat", std::move(g));
      return kExitOk;
    }
    case Task::Density: {
      c.light.validate();
      if (c.light.kind != LightKind::CwPair) {
        const DensityMatrix e2 = rho_e_second_order(model, c.light);
        out.write("rho_e2.dat", [&](std::ostream& o) { write_density_matrix(o, e2); });
      }
      const FourthOrderDensities d = fourth_order_densities(model, c.light);
      out.write("rho_e4.dat", [&](std::ostream& o) { write_density_matrix(o, d.e); });
      out.write("rho_f.dat", [&](std::ostream& o) { write_density_matrix(o, d.f); });
      if (c.light.kind == LightKind::Twin) {
        const DensityMatrix r = rho_e_raman_entangled(model, c.light);
        out.write("rho_e_raman.dat", [&](std::ostream& o) { write_density_matrix(o, r); });
      }
      return kExitOk;
    }
    case Task::Sweep2d: {
      SpectrumGrid g = sweep_2d(model, c.light, *c.wp_grid, c.emission, c.threads);
      tag(g, c);
      out.write("sweep2d.dat", [&](std::ostream& o) { write_grid(o, g); });
      out.write("sweep2d_long.dat", [&](std::ostream& o) { write_grid_long(o, g); });
      return kExitOk;
    }
    case Task::Action:
      grid_file("action.dat", action_spectrum(model, c.light, *c.wp_grid, c.emission, c.threads));
      return kExitOk;
    case Task::Populations:
      grid_file("populations.dat",
                population_sweep(model, c.light, *c.wp_grid, *c.w2_grid, c.population_target, c.threads));
      return kExitOk;
    case Task::Distribution: {
      const std::string name =
          std::string("distribution_") + (c.distribution_manifold == Manifold::E ? "e" : "f") + ".dat";
      grid_file(name, state_distribution(model, c.light, *c.wp_grid, c.distribution_manifold, c.threads));
      return kExitOk;
    }
    case Task::Verify: {
      const VerificationReport r = verify(model, c.light, c.verify, c.threads);
      out.write("verify_report.tsv", [&](std::ostream& o) { write_report(o, r); });
      return r.passed() ? kExitOk : kExitVerification;
    }
  }
  throw UsageError("unknown task");
}

}  // namespace

int run(const RunConfig& c, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(c.output_dir, ec);
  if (ec) {
    err << "twinex: cannot create output directory '" << c.output_dir << "': " << ec.message() << '\n';
    return kExitConfig;
  }
  Artifacts out(c.output_dir);
  try {
    const ExcitonModel model = build_manifolds(load_model(c.model_path));
    const int status = execute(c, model, out);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto files = out.names();
    out.write("manifest", [&](std::ostream& o) {
      ojson m;
      m["config"] = c.config_path;
      m["config_sha256"] = c.hash;
      m["version"] = version();
      m["task"] = to_string(c.task);
      m["outputs"] = files;
      m["exit_code"] = status;
      m["wall_time_s"] = wall;
      o << m.dump(2) << '\n';
    });
    if (status == kExitVerification) err << "twinex: verification failed, see verify_report.tsv\n";
    return status;
  } catch (const ConfigError& e) {
    out.remove_all();
    err << "twinex: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    out.remove_all();
    err << "twinex: " << e.what() << '\n';
    return kExitComputation;
  }
}

int run_from_file(const std::string& config_path, const std::optional<std::string>& output_dir,
                  std::optional<unsigned> threads, std::ostream& err) {
  RunConfig c;
  try {
    c = load_run_config(config_path);
  } catch (const ConfigError& e) {
    err << "twinex: " << e.what() << '\n';
    return kExitConfig;
  }
  if (output_dir) c.output_dir = *output_dir;
  if (threads) c.threads = *threads;
  return run(c, err);
}

}  // namespace twinex
