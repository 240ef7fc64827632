#pragma once

#include <string>

#include "twinex/exciton_model.hpp"

namespace twinex {

/// Reads a JSON model file. Every physical field carries its unit as a name
/// suffix (_cm1, _angstrom, _debye). Schema violations throw ConfigError with
/// "file:line: field 'path': reason".
ManifoldSource load_model(const std::string& path);

/// Same, from text already in memory; `origin` names it in diagnostics.
ManifoldSource parse_model(const std::string& text, const std::string& origin);

}  // namespace twinex
