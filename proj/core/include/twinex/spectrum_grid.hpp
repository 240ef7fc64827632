#pragma once

#include <map>
#include <string>
#include <vector>

namespace twinex {

struct Axis {
  std::string name;
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double at(std::size_t i) const { return start + step * static_cast<double>(i); }
  std::vector<double> points() const;

  /// start, start+step, ... up to and including `stop` (within step/2).
  static Axis uniform(std::string name, double start, double stop, double step);
};

/// Real signal over one or two uniform cm^-1 axes. 2D grids are row-major
/// with axes[0] as rows.
struct SpectrumGrid {
  std::vector<Axis> axes;
  std::vector<double> values;
  std::map<std::string, std::string> meta;

  std::size_t rows() const { return axes.empty() ? 0 : axes[0].count; }
  std::size_t cols() const { return axes.size() < 2 ? 1 : axes[1].count; }
  double& at(std::size_t r, std::size_t c = 0) { return values[r * cols() + c]; }
  double at(std::size_t r, std::size_t c = 0) const { return values[r * cols() + c]; }

  static SpectrumGrid make_1d(Axis a);
  static SpectrumGrid make_2d(Axis rows, Axis cols);
};

}  // namespace twinex
