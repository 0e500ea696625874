#pragma once

#include <string>
#include <vector>

#include "surfnema/diagnostics.hpp"
#include "surfnema/geometry.hpp"

namespace surfnema {

/// Named view of field data to export; `data` is component-major with
/// grid.nodes() values per component (the in-memory field layout).
struct SnapshotField {
  std::string name;
  int ncomp = 1;
  const double* data = nullptr;
};

/// VTK legacy structured-grid ASCII snapshot (points from the chart).
void write_vtk(const std::string& path, const ChartGeometry& chart,
               const std::vector<SnapshotField>& fields);

/// Raw binary snapshot. Header: magic "SNEMA1", u32 n1, u32 n2, u32 nfields,
/// then per field u32 name length, name bytes, u32 ncomp. Payload: per field
/// ncomp * n1 * n2 doubles, row-major, node index fastest (component-major),
/// little-endian.
void write_snema(const std::string& path, const Grid& grid,
                 const std::vector<SnapshotField>& fields);

struct SnemaField {
  std::string name;
  int ncomp = 1;
  std::vector<double> data;
};
struct SnemaFile {
  int n1 = 0, n2 = 0;
  std::vector<SnemaField> fields;
};
SnemaFile read_snema(const std::string& path);

/// Energy CSV, fixed column order, 17 significant digits:
/// t,E_K,E_EL,E_TH,E_BE,E_tot,R_IM,R_NV,audit_residual,inext_residual
void write_energy_csv(const std::string& path, const TrajectoryRecord& rec);
TrajectoryRecord read_energy_csv(const std::string& path);

}  // namespace surfnema
