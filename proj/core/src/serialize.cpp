#include "twinex/serialize.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "twinex/errors.hpp"

namespace twinex {
namespace {

double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ConfigError("bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string w; ss >> w;) out.push_back(w);
  return out;
}

const char* unit_of(const Axis& a) { return a.name == "state" ? "index" : "cm-1"; }

std::string clean(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void write_density_matrix(std::ostream& out, const DensityMatrix& rho) {
  out << "# manifold " << to_string(rho.manifold) << '\n';
  out << "# normalized " << (rho.normalized ? 1 : 0) << '\n';
  out << "# labels";
  for (const auto& l : state_labels(rho.manifold, rho.size())) out << ' ' << l;
  out << '\n';
  for (Eigen::Index r = 0; r < rho.data.rows(); ++r) {
    for (Eigen::Index c = 0; c < rho.data.cols(); ++c) {
      if (c) out << ' ';
      out << format_number(rho.data(r, c).real()) << ',' << format_number(rho.data(r, c).imag());
    }
    out << '\n';
  }
  const double tr = rho.trace();
  double p = std::numeric_limits<double>::quiet_NaN();
  if (tr != 0.0) p = purity(rho.normalized ? rho : rho.normalized_copy());
  out << "# trace " << format_number(tr) << '\n';
  out << "# purity " << format_number(p) << '\n';
}

DensityMatrix read_density_matrix(std::istream& in) {
  DensityMatrix rho;
  std::vector<std::vector<cplx>> rows;
  std::size_t n_labels = 0;
  bool seen_manifold = false;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto w = split(line);
    if (line[0] == '#') {
      if (w.size() >= 2 && w[1] == "manifold") {
        if (w.size() != 3 || (w[2] != "E" && w[2] != "F")) throw ConfigError("density matrix: bad manifold line");
        rho.manifold = w[2] == "E" ? Manifold::E : Manifold::F;
        seen_manifold = true;
      } else if (w.size() == 3 && w[1] == "normalized") {
        rho.normalized = w[2] == "1";
      } else if (w.size() >= 2 && w[1] == "labels") {
        n_labels = w.size() - 2;
      }
      continue;
    }
    std::vector<cplx> row;
    for (const auto& cell : w) {
      const auto comma = cell.find(',');
      if (comma == std::string::npos) throw ConfigError("density matrix: entry '" + cell + "' is not re,im");
      row.emplace_back(parse_number(cell.substr(0, comma)), parse_number(cell.substr(comma + 1)));
    }
    rows.push_back(std::move(row));
  }
  if (!seen_manifold) throw ConfigError("density matrix: missing manifold header");
  const auto n = rows.size();
  if (n != n_labels) throw ConfigError("density matrix: row count does not match labels");
  rho.data.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (rows[r].size() != n) throw ConfigError("density matrix: row " + std::to_string(r) + " has wrong length");
    for (std::size_t c = 0; c < n; ++c) rho.data(r, c) = rows[r][c];
  }
  return rho;
}

double footer_purity(std::istream& in) {
  for (std::string line; std::getline(in, line);) {
    const auto w = split(line);
    if (w.size() == 3 && w[0] == "#" && w[1] == "purity") return parse_number(w[2]);
  }
  throw ConfigError("density matrix: no purity footer");
}

void write_grid(std::ostream& out, const SpectrumGrid& g) {
  for (const auto& a : g.axes)
    out << "# axis " << a.name << ' ' << format_number(a.start) << ' ' << format_number(a.step) << ' ' << a.count
        << ' ' << unit_of(a) << '\n';
  for (const auto& [k, v] : g.meta) out << "# meta " << k << '=' << clean(v) << '\n';
  for (std::size_t r = 0; r < g.rows(); ++r) {
    for (std::size_t c = 0; c < g.cols(); ++c) {
      if (c) out << ' ';
      out << format_number(g.at(r, c));
    }
    out << '\n';
  }
}

SpectrumGrid read_grid(std::istream& in) {
  SpectrumGrid g;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    if (line.rfind("# axis ", 0) == 0) {
      const auto w = split(line);
      if (w.size() != 7) throw ConfigError("grid: bad axis line '" + line + "'");
      g.axes.push_back({w[2], parse_number(w[3]), parse_number(w[4]), static_cast<std::size_t>(std::stoull(w[5]))});
    } else if (line.rfind("# meta ", 0) == 0) {
      const std::string kv = line.substr(7);
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("grid: bad meta line '" + line + "'");
      g.meta[kv.substr(0, eq)] = kv.substr(eq + 1);
    } else if (line[0] != '#') {
      for (const auto& w : split(line)) g.values.push_back(parse_number(w));
    }
  }
  if (g.axes.empty() || g.axes.size() > 2) throw ConfigError("grid: expected one or two axes");
  if (g.values.size() != g.rows() * g.cols()) throw ConfigError("grid: value count does not match axes");
  return g;
}

void write_grid_long(std::ostream& out, const SpectrumGrid& g) {
  for (std::size_t r = 0; r < g.rows(); ++r) {
    if (g.axes.size() == 1) {
      out << format_number(g.axes[0].at(r)) << ' ' << format_number(g.at(r)) << '\n';
      continue;
    }
    for (std::size_t c = 0; c < g.cols(); ++c)
      out << format_number(g.axes[0].at(r)) << ' ' << format_number(g.axes[1].at(c)) << ' '
          << format_number(g.at(r, c)) << '\n';
    out << '\n';
  }
}

}  // namespace twinex
