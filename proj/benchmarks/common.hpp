#pragma once

#include <string>

#include "twinex/exciton_model.hpp"
#include "twinex/model_io.hpp"

inline const twinex::ExcitonModel& bench_model(const std::string& name) {
  static const auto homodimer = twinex::build_manifolds(twinex::load_model(TWINEX_DATA_DIR "/models/homodimer.json"));
  static const auto trimer = twinex::build_manifolds(twinex::load_model(TWINEX_DATA_DIR "/models/heterotrimer.json"));
  static const auto rc = twinex::build_manifolds(twinex::load_model(TWINEX_DATA_DIR "/models/rc_like.json"));
  if (name == "homodimer") return homodimer;
  if (name == "heterotrimer") return trimer;
  return rc;
}

inline const char* kModels[] = {"homodimer", "heterotrimer", "rc_like"};
