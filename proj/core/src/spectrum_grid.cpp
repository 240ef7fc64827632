#include "twinex/spectrum_grid.hpp"

#include <cmath>

#include "twinex/errors.hpp"

namespace twinex {

std::vector<double> Axis::points() const {
  std::vector<double> p(count);
  for (std::size_t i = 0; i < count; ++i) p[i] = at(i);
  return p;
}

Axis Axis::uniform(std::string name, double start, double stop, double step) {
  if (!(step > 0.0) || !(stop >= start)) {
    throw ConfigError("axis '" + name + "': need start <= stop and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 0.5)) + 1;
  return Axis{std::move(name), start, step, n};
}

SpectrumGrid SpectrumGrid::make_1d(Axis a) {
  SpectrumGrid g;
  g.values.assign(a.count, 0.0);
  g.axes.push_back(std::move(a));
  return g;
}

SpectrumGrid SpectrumGrid::make_2d(Axis rows, Axis cols) {
  SpectrumGrid g;
  g.values.assign(rows.count * cols.count, 0.0);
  g.axes.push_back(std::move(rows));
  g.axes.push_back(std::move(cols));
  return g;
}

}  // namespace twinex
