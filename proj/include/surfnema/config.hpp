#pragma once

#include <string>

#include "surfnema/solvers.hpp"

namespace surfnema {

enum class SolverType { FlatBe2d, GradientFlow, StationaryNemato };
enum class InitVelocity { Zero, TaylorGreen };
enum class InitQ { Zero, RandomBandlimited, UniformUniaxial };

/// Fully validated run description parsed from a `[section] key = value` file.
struct RunConfig {
  SurfaceKind surface = SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI);
  int n1 = 64, n2 = 64;
  DerivScheme scheme = DerivScheme::Spectral;

  ModelParams model;
  bool strict = false;
  std::string warning;  // non-fatal validation notes (lax mode)

  SolverType solver = SolverType::FlatBe2d;
  double dt = 1e-3;
  int n_steps = 1000;
  int sample_every = 10;
  int snapshot_every = 0;
  FlatMode flat_mode = FlatMode::Full;
  BetaMode beta_mode = BetaMode::Fixed;
  double beta0 = 0.0;
  bool beta0_auto = false;  // beta0 = -S*_TH / 3 from the thermotropic roots

  InitVelocity init_velocity = InitVelocity::Zero;
  InitQ init_q = InitQ::Zero;
  double init_amplitude = 0.1;
  int init_kmax = 4;
  unsigned long init_seed = 0;
  double init_s = 1.0;
  double init_angle = 0.0;

  std::string output_dir = "out";
};

RunConfig parse_config(const std::string& path);

/// Resolved beta0 (applies the auto rule).
double resolve_beta0(const RunConfig& cfg);

ChartGeometry build_chart(const RunConfig& cfg);
SimState build_initial_state(const RunConfig& cfg, const ChartGeometry& chart);

/// Runs the configured solver, writes energy.csv plus snapshot files into
/// cfg.output_dir, and returns the trajectory (audit residuals filled).
TrajectoryRecord run_simulation(const RunConfig& cfg, const ChartGeometry& chart);

}  // namespace surfnema
