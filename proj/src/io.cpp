#include "surfnema/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace surfnema {

namespace {

struct File {
  std::FILE* f = nullptr;
  explicit File(const std::string& path, const char* mode) : f(std::fopen(path.c_str(), mode)) {
    if (!f) throw std::runtime_error("cannot open " + path);
  }
  ~File() {
    if (f) std::fclose(f);
  }
};

void put_u32(std::FILE* f, std::uint32_t v) { std::fwrite(&v, sizeof v, 1, f); }
std::uint32_t get_u32(std::FILE* f) {
  std::uint32_t v = 0;
  if (std::fread(&v, sizeof v, 1, f) != 1) throw std::runtime_error("truncated snapshot file");
  return v;
}

}  // namespace

void write_vtk(const std::string& path, const ChartGeometry& chart,
               const std::vector<SnapshotField>& fields) {
  File out(path, "w");
  const Grid& g = chart.grid;
  std::fprintf(out.f, "# vtk DataFile Version 3.0\n");
  std::fprintf(out.f, "surfnema snapshot\n");
  std::fprintf(out.f, "ASCII\n");
  std::fprintf(out.f, "DATASET STRUCTURED_GRID\n");
  std::fprintf(out.f, "DIMENSIONS %d %d 1\n", g.n2, g.n1);
  std::fprintf(out.f, "POINTS %zu double\n", g.nodes());
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      std::size_t n = g.idx(i, j);
      std::fprintf(out.f, "%.17g %.17g %.17g\n", chart.X.at(0, n), chart.X.at(1, n),
                   chart.X.at(2, n));
    }
  std::fprintf(out.f, "POINT_DATA %zu\n", g.nodes());
  std::fprintf(out.f, "FIELD snapshot %zu\n", fields.size());
  for (const auto& fl : fields) {
    std::fprintf(out.f, "%s %d %zu double\n", fl.name.c_str(), fl.ncomp, g.nodes());
    for (std::size_t n = 0; n < g.nodes(); ++n) {
      for (int c = 0; c < fl.ncomp; ++c) {
        std::fprintf(out.f, "%.17g%c", fl.data[std::size_t(c) * g.nodes() + n],
                     c + 1 == fl.ncomp ? '\n' : ' ');
      }
    }
  }
}

void write_snema(const std::string& path, const Grid& grid,
                 const std::vector<SnapshotField>& fields) {
  File out(path, "wb");
  std::fwrite("SNEMA1", 1, 6, out.f);
  put_u32(out.f, std::uint32_t(grid.n1));
  put_u32(out.f, std::uint32_t(grid.n2));
  put_u32(out.f, std::uint32_t(fields.size()));
  for (const auto& fl : fields) {
    put_u32(out.f, std::uint32_t(fl.name.size()));
    std::fwrite(fl.name.data(), 1, fl.name.size(), out.f);
    put_u32(out.f, std::uint32_t(fl.ncomp));
  }
  for (const auto& fl : fields)
    std::fwrite(fl.data, sizeof(double), std::size_t(fl.ncomp) * grid.nodes(), out.f);
}

SnemaFile read_snema(const std::string& path) {
  File in(path, "rb");
  char magic[6];
  if (std::fread(magic, 1, 6, in.f) != 6 || std::memcmp(magic, "SNEMA1", 6) != 0)
    throw std::runtime_error(path + ": not a SNEMA1 snapshot");
  SnemaFile out;
  out.n1 = int(get_u32(in.f));
  out.n2 = int(get_u32(in.f));
  std::uint32_t nf = get_u32(in.f);
  out.fields.resize(nf);
  for (auto& fl : out.fields) {
    std::uint32_t len = get_u32(in.f);
    fl.name.resize(len);
    if (std::fread(fl.name.data(), 1, len, in.f) != len)
      throw std::runtime_error("truncated snapshot file");
    fl.ncomp = int(get_u32(in.f));
  }
  const std::size_t nn = std::size_t(out.n1) * out.n2;
  for (auto& fl : out.fields) {
    fl.data.resize(std::size_t(fl.ncomp) * nn);
    if (std::fread(fl.data.data(), sizeof(double), fl.data.size(), in.f) != fl.data.size())
      throw std::runtime_error("truncated snapshot payload");
  }
  return out;
}

void write_energy_csv(const std::string& path, const TrajectoryRecord& rec) {
  File out(path, "w");
  std::fprintf(out.f,
               "t,E_K,E_EL,E_TH,E_BE,E_tot,R_IM,R_NV,audit_residual,inext_residual\n");
  for (const auto& s : rec.samples) {
    std::fprintf(out.f,
                 "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t,
                 s.E_K, s.E_EL, s.E_TH, s.E_BE, s.E_tot, s.R_IM, s.R_NV, s.audit_residual,
                 s.inext_residual);
  }
}

TrajectoryRecord read_energy_csv(const std::string& path) {
  File in(path, "r");
  TrajectoryRecord rec;
  char line[4096];
  bool header = true;
  while (std::fgets(line, sizeof line, in.f)) {
    if (header) {
      header = false;
      continue;
    }
    EnergyReport s;
    if (std::sscanf(line, "%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf", &s.t, &s.E_K, &s.E_EL,
                    &s.E_TH, &s.E_BE, &s.E_tot, &s.R_IM, &s.R_NV, &s.audit_residual,
                    &s.inext_residual) >= 8)
      rec.samples.push_back(s);
  }
  return rec;
}

}  // namespace surfnema
