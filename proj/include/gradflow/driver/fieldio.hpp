#pragma once

#include <string>
#include <vector>

#include "gradflow/fem/discretization.hpp"

namespace gradflow::driver {

/// Per-step monitor record. Wall times are kept out of this table so
/// that monitor files are bitwise reproducible; they go to a separate
/// timings file.
struct MonitorRow {
  int step = 0;
  double time = 0.0;
  double energy = 0.0;
  std::vector<double> mass;  // per species
  double mass_total = 0.0;
  double alg_residual = 0.0;
  double min_rho = 0.0;
};

/// Plot-lattice CSV with header "x0,x1,<name>[,<name>...]", sampling
/// each field's per-cell polynomial at an nx-by-ny uniform point lattice
/// spanning the domain (17 significant digits).
void write_field_csv(const fem::Discretization& disc,
                     const std::vector<const fem::QuadField*>& fields,
                     const std::vector<std::string>& names, int lattice_nx,
                     int lattice_ny, const std::string& path);

/// Legacy VTK STRUCTURED_POINTS file with one scalar per field, sampled
/// on the same lattice.
void write_field_vtk(const fem::Discretization& disc,
                     const std::vector<const fem::QuadField*>& fields,
                     const std::vector<std::string>& names, int lattice_nx,
                     int lattice_ny, const std::string& path);

/// Lossless nodal snapshot: one row per quadrature node with
/// coordinates and every field's value at 17 significant digits.
void write_state_csv(const fem::Discretization& disc,
                     const std::vector<const fem::QuadField*>& fields,
                     const std::vector<std::string>& names,
                     const std::string& path);

/// Reads back a nodal snapshot written by write_state_csv.
std::vector<fem::QuadField> read_state_csv(const fem::Discretization& disc,
                                           const std::string& path);

void write_monitors_csv(const std::vector<MonitorRow>& rows, int n_species,
                        const std::string& path);

std::string format_g17(double v);

}  // namespace gradflow::driver
