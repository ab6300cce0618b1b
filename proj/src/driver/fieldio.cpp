#include "gradflow/driver/fieldio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gradflow::driver {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  return out;
}

struct Lattice {
  int nx, ny;
  double x0, y0, dx, dy;
  double x(int i) const { return x0 + i * dx; }
  double y(int j) const { return y0 + j * dy; }
};

Lattice make_lattice(const fem::UniformMesh& m, int nx, int ny) {
  if (nx < 2 || ny < 2)
    throw std::invalid_argument("plot lattice needs >= 2 points per direction");
  return {nx, ny, m.xmin, m.ymin, (m.xmax - m.xmin) / (nx - 1),
          (m.ymax - m.ymin) / (ny - 1)};
}

}  // namespace

void write_field_csv(const fem::Discretization& disc,
                     const std::vector<const fem::QuadField*>& fields,
                     const std::vector<std::string>& names, int lattice_nx,
                     int lattice_ny, const std::string& path) {
  const Lattice lat = make_lattice(disc.mesh(), lattice_nx, lattice_ny);
  auto out = open_or_throw(path);
  out << "x0,x1";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (int j = 0; j < lat.ny; ++j)
    for (int i = 0; i < lat.nx; ++i) {
      out << format_g17(lat.x(i)) << ',' << format_g17(lat.y(j));
      for (const auto* f : fields)
        out << ',' << format_g17(disc.eval(*f, lat.x(i), lat.y(j)));
      out << '\n';
    }
}

void write_field_vtk(const fem::Discretization& disc,
                     const std::vector<const fem::QuadField*>& fields,
                     const std::vector<std::string>& names, int lattice_nx,
                     int lattice_ny, const std::string& path) {
  const Lattice lat = make_lattice(disc.mesh(), lattice_nx, lattice_ny);
  auto out = open_or_throw(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "gradflow fields\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << lat.nx << ' ' << lat.ny << " 1\n";
  out << "ORIGIN " << format_g17(lat.x0) << ' ' << format_g17(lat.y0) << " 0\n";
  out << "SPACING " << format_g17(lat.dx) << ' ' << format_g17(lat.dy) << " 1\n";
  out << "POINT_DATA " << lat.nx * lat.ny << '\n';
  for (std::size_t f = 0; f < fields.size(); ++f) {
    out << "SCALARS " << names[f] << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (int j = 0; j < lat.ny; ++j)
      for (int i = 0; i < lat.nx; ++i)
        out << format_g17(disc.eval(*fields[f], lat.x(i), lat.y(j))) << '\n';
  }
}

void write_state_csv(const fem::Discretization& disc,
                     const std::vector<const fem::QuadField*>& fields,
                     const std::vector<std::string>& names,
                     const std::string& path) {
  auto out = open_or_throw(path);
  out << "x0,x1";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (int q = 0; q < disc.num_nodes(); ++q) {
    out << format_g17(disc.node_x()[q]) << ',' << format_g17(disc.node_y()[q]);
    for (const auto* f : fields) out << ',' << format_g17((*f)[q]);
    out << '\n';
  }
}

std::vector<fem::QuadField> read_state_csv(const fem::Discretization& disc,
                                           const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::string header;
  std::getline(in, header);
  int ncols = 1;
  for (char c : header)
    if (c == ',') ++ncols;
  const int nfields = ncols - 2;
  if (nfields < 1) throw std::runtime_error("state file has no field columns");
  std::vector<fem::QuadField> fields(nfields,
                                     fem::QuadField(disc.num_nodes()));
  std::string line;
  for (int q = 0; q < disc.num_nodes(); ++q) {
    if (!std::getline(in, line))
      throw std::runtime_error("state file truncated: " + path);
    std::istringstream ls(line);
    std::string tok;
    for (int c = 0; c < ncols; ++c) {
      if (!std::getline(ls, tok, ','))
        throw std::runtime_error("state file malformed: " + path);
      if (c >= 2) fields[c - 2][q] = std::stod(tok);
    }
  }
  return fields;
}

void write_monitors_csv(const std::vector<MonitorRow>& rows, int n_species,
                        const std::string& path) {
  auto out = open_or_throw(path);
  out << "step,time,energy";
  if (n_species > 1)
    for (int i = 0; i < n_species; ++i) out << ",mass_" << i + 1;
  out << ",mass_total,alg_residual,min_rho\n";
  for (const auto& r : rows) {
    out << r.step << ',' << format_g17(r.time) << ',' << format_g17(r.energy);
    if (n_species > 1)
      for (int i = 0; i < n_species; ++i) out << ',' << format_g17(r.mass[i]);
    out << ',' << format_g17(r.mass_total) << ','
        << format_g17(r.alg_residual) << ',' << format_g17(r.min_rho) << '\n';
  }
}

}  // namespace gradflow::driver
