#pragma once

#include <iosfwd>
#include <string>

#include "twinex/density_matrix.hpp"
#include "twinex/spectrum_grid.hpp"

namespace twinex {

/// Plain-text density matrix:
///   # manifold F
///   # normalized 0
///   # labels f0 f1 ...
///   re,im re,im ...        (one line per row)
///   # trace <value>
///   # purity <value>       (of the unit-trace copy; nan for zero trace)
/// Numbers carry 17 significant digits, so reading back is exact.
void write_density_matrix(std::ostream& out, const DensityMatrix& rho);
DensityMatrix read_density_matrix(std::istream& in);

/// Header lines "# axis <name> <start> <step> <count> <unit>" and
/// "# meta key=value", then one line of space-separated values per row.
void write_grid(std::ostream& out, const SpectrumGrid& grid);
SpectrumGrid read_grid(std::istream& in);

/// Gnuplot long format: "x y value" per line, blank line between rows
/// ("x value" for 1D grids).
void write_grid_long(std::ostream& out, const SpectrumGrid& grid);

/// Reads the "# purity" footer of a serialized density matrix.
double footer_purity(std::istream& in);

std::string format_number(double v);

}  // namespace twinex
