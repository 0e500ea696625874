#pragma once

#include <functional>

#include "surfnema/diagnostics.hpp"

namespace surfnema {

/// State advanced by the special-case solvers. The flat solver keeps
/// beta = 0 throughout; the gradient flow keeps v = 0.
struct SimState {
  double t = 0;
  TangentVectorField v;
  ScalarField p;
  TangentTensor2Field q;
  ScalarField beta;

  explicit SimState(const Grid& g) : v(g), p(g), q(g), beta(g) {}
  SimState() = default;
};

struct SolverOptions {
  double dt = 1e-3;
  int n_steps = 1000;
  int sample_every = 10;
  int snapshot_every = 0;  // 0: never
  double blowup_factor = 1e6;
  std::function<void(const SimState&, int)> snapshot_hook;
  /// Use the material-form representation of the viscous stress rows even
  /// for the Jaumann model; both representations describe the same tensors.
  bool material_form_rows = false;
};

enum class FlatMode { Full, LinearJaumann, Isotropic };
enum class BetaMode { Free, Fixed };

/// Flat 2D Beris-Edwards on a flat periodic chart (beta = 0, Eulerian
/// observer). IMEX: elastic/viscous diffusion implicit in Fourier space,
/// couplings and advection explicit, exact spectral Leray projection.
TrajectoryRecord run_flat_be2d(const ChartGeometry& chart, const ModelParams& params,
                               SimState init, const SolverOptions& opt,
                               FlatMode mode = FlatMode::Full);

/// L2 gradient flow of the surface Landau-de Gennes energy under no flow.
/// Fixed mode freezes beta at beta0 and drops the beta equation.
TrajectoryRecord run_gradient_flow(const ChartGeometry& chart, const ModelParams& params,
                                   SimState init, const SolverOptions& opt, BetaMode mode,
                                   double beta0);

/// Nematodynamics on a geometrically stationary curved chart (CB with beta0,
/// no normal flow, xi = 0). Iterative variable-coefficient Leray projection.
TrajectoryRecord run_stationary_nemato(const ChartGeometry& chart, const ModelParams& params,
                                       SimState init, const SolverOptions& opt, double beta0);

/// Residual ||h_EL + h_TH||_{L2} (+ omega part in free-beta mode) of the
/// gradient-flow right-hand side; the equilibrium criterion.
double gradient_flow_residual(const ChartGeometry& chart, const ModelParams& params,
                              const TangentTensor2Field& q, const ScalarField& beta,
                              BetaMode mode);

// Initial-condition library (the model source specifies none).
SimState init_taylor_green(const ChartGeometry& chart, double amplitude);
SimState init_random_q(const ChartGeometry& chart, double amplitude, int kmax,
                       unsigned long seed);
SimState init_uniform_uniaxial(const ChartGeometry& chart, double s, double angle);

}  // namespace surfnema
