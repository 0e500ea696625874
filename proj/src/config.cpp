#include "surfnema/config.hpp"

#include <sys/stat.h>

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "surfnema/io.hpp"
#include "surfnema/qtensor.hpp"

namespace surfnema {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

struct KeyVal {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, KeyVal>;

struct RawConfig {
  std::map<std::string, Section> sections;

  bool has(const std::string& sec, const std::string& key) const {
    auto s = sections.find(sec);
    return s != sections.end() && s->second.count(key) > 0;
  }
  std::string take(const std::string& sec, const std::string& key, const std::string& dflt) {
    auto s = sections.find(sec);
    if (s == sections.end()) return dflt;
    auto k = s->second.find(key);
    if (k == s->second.end()) return dflt;
    k->second.used = true;
    return k->second.value;
  }
};

double to_double(const std::string& sec, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing junk");
    return d;
  } catch (const std::exception&) {
    throw ValidationError("[" + sec + "] " + key + ": not a number: '" + v + "'");
  }
}

int to_int(const std::string& sec, const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    int d = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing junk");
    return d;
  } catch (const std::exception&) {
    throw ValidationError("[" + sec + "] " + key + ": not an integer: '" + v + "'");
  }
}

bool to_bool(const std::string& sec, const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("[" + sec + "] " + key + ": not a boolean: '" + v + "'");
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open config file");
  RawConfig raw;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw ParseError(path + ":" + std::to_string(lineno) + ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      raw.sections[section];
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    if (section.empty())
      throw ParseError(path + ":" + std::to_string(lineno) + ": key outside any [section]");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty key or value");
    if (raw.sections[section].count(key))
      throw ParseError(path + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    raw.sections[section][key] = KeyVal{val, lineno, false};
  }

  static const std::set<std::string> known_sections = {"surface", "model", "solver", "init",
                                                       "output"};
  for (const auto& [sec, _] : raw.sections)
    if (!known_sections.count(sec)) throw ValidationError("unknown section [" + sec + "]");

  RunConfig cfg;

  // surface
  std::string kind = raw.take("surface", "kind", "flat_torus");
  if (kind == "flat_torus") {
    double p1 = to_double("surface", "p1", raw.take("surface", "p1", "6.283185307179586"));
    double p2 = to_double("surface", "p2", raw.take("surface", "p2", "6.283185307179586"));
    cfg.surface = SurfaceKind::flat_torus(p1, p2);
  } else if (kind == "embedded_torus") {
    double R = to_double("surface", "major_radius", raw.take("surface", "major_radius", "2"));
    double r = to_double("surface", "minor_radius", raw.take("surface", "minor_radius", "1"));
    cfg.surface = SurfaceKind::embedded_torus(R, r);
  } else {
    throw ValidationError("[surface] kind: unknown surface '" + kind + "'");
  }
  cfg.n1 = to_int("surface", "n1", raw.take("surface", "n1", "64"));
  cfg.n2 = to_int("surface", "n2", raw.take("surface", "n2", "64"));
  std::string scheme = raw.take("surface", "scheme", "spectral");
  if (scheme == "spectral")
    cfg.scheme = DerivScheme::Spectral;
  else if (scheme == "fd4")
    cfg.scheme = DerivScheme::Fd4;
  else
    throw ValidationError("[surface] scheme: unknown scheme '" + scheme + "'");

  // model
  cfg.strict = to_bool("model", "strict", raw.take("model", "strict", "false"));
  ModelParams& m = cfg.model;
  m.L = to_double("model", "L", raw.take("model", "L", "0"));
  m.a = to_double("model", "a", raw.take("model", "a", "0"));
  m.b = to_double("model", "b", raw.take("model", "b", "0"));
  m.c = to_double("model", "c", raw.take("model", "c", "1"));
  m.kappa = to_double("model", "kappa", raw.take("model", "kappa", "0"));
  m.H0 = to_double("model", "H0", raw.take("model", "H0", "0"));
  m.M = to_double("model", "M", raw.take("model", "M", "0"));
  m.upsilon = to_double("model", "upsilon", raw.take("model", "upsilon", "0"));
  m.xi = to_double("model", "xi", raw.take("model", "xi", "0"));
  m.rho = to_double("model", "rho", raw.take("model", "rho", "1"));
  std::string phi = raw.take("model", "phi", "jaumann");
  if (phi == "jaumann")
    m.phi = Flavor::Jaumann;
  else if (phi == "material")
    m.phi = Flavor::Material;
  else
    throw ValidationError("[model] phi: must be 'jaumann' or 'material'");
  // multi-constant elasticity slots are reserved but not implemented
  for (const char* slot : {"L2", "L3", "L4", "L6"}) {
    if (raw.has("model", slot)) {
      double v = to_double("model", slot, raw.take("model", slot, "0"));
      if (v != 0.0)
        throw ValidationError(std::string("[model] ") + slot +
                              ": multi-constant elasticity is not implemented; only L (= L1) "
                              "may be nonzero");
    }
  }
  cfg.warning = m.validate(cfg.strict);

  // solver
  std::string type = raw.take("solver", "type", "");
  if (type.empty()) throw ValidationError("[solver] type is required");
  if (type == "flat_be2d")
    cfg.solver = SolverType::FlatBe2d;
  else if (type == "gradient_flow")
    cfg.solver = SolverType::GradientFlow;
  else if (type == "stationary_nemato")
    cfg.solver = SolverType::StationaryNemato;
  else
    throw ValidationError("[solver] type: unknown solver '" + type + "'");
  cfg.dt = to_double("solver", "dt", raw.take("solver", "dt", "0.001"));
  cfg.n_steps = to_int("solver", "n_steps", raw.take("solver", "n_steps", "1000"));
  cfg.sample_every = to_int("solver", "sample_every", raw.take("solver", "sample_every", "10"));
  cfg.snapshot_every =
      to_int("solver", "snapshot_every", raw.take("solver", "snapshot_every", "0"));
  std::string fm = raw.take("solver", "mode", "full");
  if (fm == "full")
    cfg.flat_mode = FlatMode::Full;
  else if (fm == "linear_jaumann")
    cfg.flat_mode = FlatMode::LinearJaumann;
  else if (fm == "isotropic")
    cfg.flat_mode = FlatMode::Isotropic;
  else
    throw ValidationError("[solver] mode: unknown flat mode '" + fm + "'");
  std::string bm = raw.take("solver", "beta_mode", "fixed");
  if (bm == "fixed")
    cfg.beta_mode = BetaMode::Fixed;
  else if (bm == "free")
    cfg.beta_mode = BetaMode::Free;
  else
    throw ValidationError("[solver] beta_mode: 'fixed' or 'free'");
  std::string b0 = raw.take("solver", "beta0", "0");
  if (b0 == "auto") {
    cfg.beta0_auto = true;
  } else {
    cfg.beta0 = to_double("solver", "beta0", b0);
  }

  // init
  std::string vel = raw.take("init", "velocity", "zero");
  if (vel == "zero")
    cfg.init_velocity = InitVelocity::Zero;
  else if (vel == "taylor_green")
    cfg.init_velocity = InitVelocity::TaylorGreen;
  else
    throw ValidationError("[init] velocity: unknown generator '" + vel + "'");
  std::string qi = raw.take("init", "q", "zero");
  if (qi == "zero")
    cfg.init_q = InitQ::Zero;
  else if (qi == "random_bandlimited")
    cfg.init_q = InitQ::RandomBandlimited;
  else if (qi == "uniform_uniaxial")
    cfg.init_q = InitQ::UniformUniaxial;
  else
    throw ValidationError("[init] q: unknown generator '" + qi + "'");
  cfg.init_amplitude =
      to_double("init", "amplitude", raw.take("init", "amplitude", "0.1"));
  cfg.init_kmax = to_int("init", "kmax", raw.take("init", "kmax", "4"));
  cfg.init_seed =
      (unsigned long)to_int("init", "seed", raw.take("init", "seed", "0"));
  cfg.init_s = to_double("init", "s", raw.take("init", "s", "1"));
  cfg.init_angle =
      to_double("init", "director_angle", raw.take("init", "director_angle", "0"));

  cfg.output_dir = raw.take("output", "directory", "out");

  // unknown keys are hard errors
  for (const auto& [sec, kvs] : raw.sections)
    for (const auto& [key, kv] : kvs)
      if (!kv.used)
        throw ValidationError("[" + sec + "] unknown key '" + key + "' (line " +
                              std::to_string(kv.line) + ")");

  // cross-field validation
  bool flat_surface = cfg.surface.kind == SurfaceKind::Kind::FlatTorus;
  if (cfg.solver == SolverType::FlatBe2d && !flat_surface)
    throw ValidationError("[solver] type = flat_be2d requires a flat_torus surface");
  if (cfg.solver == SolverType::StationaryNemato && flat_surface)
    throw ValidationError("[solver] type = stationary_nemato requires an embedded_torus");
  if (cfg.solver == SolverType::StationaryNemato && cfg.model.xi != 0.0)
    throw ValidationError("[solver] stationary_nemato is defined for xi = 0");
  if (!(cfg.dt > 0.0)) throw ValidationError("[solver] dt must be > 0");
  if (cfg.n_steps < 0) throw ValidationError("[solver] n_steps must be >= 0");
  if (cfg.beta0_auto) {
    if (!thermotropic_roots(m.a, m.b, m.c))
      throw ValidationError("[solver] beta0 = auto needs b^2 - 24 a c >= 0");
  }
  return cfg;
}

double resolve_beta0(const RunConfig& cfg) {
  if (!cfg.beta0_auto) return cfg.beta0;
  auto r = thermotropic_roots(cfg.model.a, cfg.model.b, cfg.model.c);
  return r->beta0_stable;
}

ChartGeometry build_chart(const RunConfig& cfg) {
  return build_chart(cfg.surface, cfg.n1, cfg.n2, cfg.scheme);
}

SimState build_initial_state(const RunConfig& cfg, const ChartGeometry& chart) {
  SimState st(chart.grid);
  switch (cfg.init_q) {
    case InitQ::Zero:
      break;
    case InitQ::RandomBandlimited:
      st = init_random_q(chart, cfg.init_amplitude, cfg.init_kmax, cfg.init_seed);
      break;
    case InitQ::UniformUniaxial:
      st = init_uniform_uniaxial(chart, cfg.init_s, cfg.init_angle);
      break;
  }
  if (cfg.init_velocity == InitVelocity::TaylorGreen) {
    SimState tg = init_taylor_green(chart, cfg.init_amplitude);
    st.v = tg.v;
  }
  if (cfg.solver == SolverType::GradientFlow && cfg.beta_mode == BetaMode::Free &&
      cfg.init_q != InitQ::UniformUniaxial) {
    st.beta.fill(resolve_beta0(cfg));
  }
  return st;
}

namespace {

void ensure_dir(const std::string& path) {
  ::mkdir(path.c_str(), 0775);  // EEXIST is fine
}

void write_snapshots(const RunConfig& cfg, const ChartGeometry& chart, const SimState& s,
                     int step) {
  std::vector<SnapshotField> fields;
  fields.push_back({"v", 2, s.v.data.data()});
  fields.push_back({"p", 1, s.p.data.data()});
  fields.push_back({"q", 4, s.q.data.data()});
  fields.push_back({"beta", 1, s.beta.data.data()});
  char name[64];
  std::snprintf(name, sizeof name, "snapshot_%06d", step);
  write_vtk(cfg.output_dir + "/" + name + ".vtk", chart, fields);
  write_snema(cfg.output_dir + "/" + name + ".snema", chart.grid, fields);
}

}  // namespace

TrajectoryRecord run_simulation(const RunConfig& cfg, const ChartGeometry& chart) {
  ensure_dir(cfg.output_dir);
  SimState init = build_initial_state(cfg, chart);
  SolverOptions opt;
  opt.dt = cfg.dt;
  opt.n_steps = cfg.n_steps;
  opt.sample_every = cfg.sample_every;
  opt.snapshot_every = cfg.snapshot_every;
  if (cfg.snapshot_every > 0)
    opt.snapshot_hook = [&](const SimState& s, int step) {
      write_snapshots(cfg, chart, s, step);
    };
  TrajectoryRecord rec;
  switch (cfg.solver) {
    case SolverType::FlatBe2d:
      rec = run_flat_be2d(chart, cfg.model, std::move(init), opt, cfg.flat_mode);
      break;
    case SolverType::GradientFlow:
      rec = run_gradient_flow(chart, cfg.model, std::move(init), opt, cfg.beta_mode,
                              resolve_beta0(cfg));
      break;
    case SolverType::StationaryNemato:
      rec = run_stationary_nemato(chart, cfg.model, std::move(init), opt, resolve_beta0(cfg));
      break;
  }
  if (rec.samples.size() >= 3) dissipation_audit(rec);
  write_energy_csv(cfg.output_dir + "/energy.csv", rec);
  return rec;
}

}  // namespace surfnema
