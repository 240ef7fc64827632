#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "twinex/errors.hpp"
#include "twinex/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Entangled two-photon excitation of chromophore aggregates"};
  app.set_version_flag("--version", std::string(twinex::version()));

  std::string task;
  std::string config;
  std::string output_dir;
  unsigned threads = 0;
  app.add_option("task", task, "absorption | density | sweep2d | action | populations | distribution | verify")
      ->required();
  app.add_option("--config,-c", config, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
  auto* out_opt = app.add_option("--output-dir,-o", output_dir, "overrides output_dir from the config");
  auto* thr_opt = app.add_option("--threads,-j", threads, "worker threads")->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : twinex::kExitConfig;
  }

  twinex::RunConfig cfg;
  try {
    cfg = twinex::load_run_config(config);
    if (task != twinex::to_string(cfg.task)) {
      std::cerr << "twinex: task '" << task << "' does not match the config's task '" << twinex::to_string(cfg.task)
                << "'\n";
      return twinex::kExitConfig;
    }
  } catch (const twinex::Error& e) {
    std::cerr << "twinex: " << e.what() << '\n';
    return twinex::kExitConfig;
  }
  if (*out_opt) cfg.output_dir = output_dir;
  if (*thr_opt) cfg.threads = threads;
  return twinex::run(cfg, std::cerr);
}
