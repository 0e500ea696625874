#include "surfnema/krylov.hpp"
#include "surfnema/solvers.hpp"

namespace surfnema {

namespace {

/// Metric-weighted inner product for tangential 2-tensor dof vectors
/// (4 comps per node, component-major like TangentTensor2Field).
DotFn tensor_dot(const ChartGeometry& c) {
  return [&c](const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t nn = c.grid.nodes();
    double s = 0;
    const double w = c.grid.h1() * c.grid.h2();
    for (std::size_t n = 0; n < nn; ++n) {
      Mat2 g = c.g_at(n);
      Mat2 a{{x[n], x[nn + n], x[2 * nn + n], x[3 * nn + n]}};
      Mat2 b{{y[n], y[nn + n], y[2 * nn + n], y[3 * nn + n]}};
      Mat2 low = mul(g, mul(a, g));
      s += ddot(low, b) * c.area_form[n] * w;
    }
    return s;
  };
}

DotFn scalar_dot(const ChartGeometry& c) {
  return [&c](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    const double w = c.grid.h1() * c.grid.h2();
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) s += x[n] * y[n] * c.area_form[n] * w;
    return s;
  };
}

/// (a - b lap_Bochner) acting on a tangential 2-tensor dof vector.
LinOp tensor_helmholtz(const ChartGeometry& c, double a, double b) {
  return [&c, a, b](const std::vector<double>& x, std::vector<double>& y) {
    TangentTensor2Field q(c.grid);
    q.data = x;
    TangentTensor2Field lap = laplace_tensor2(c, q);
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] - b * lap.data[i];
  };
}

LinOp scalar_helmholtz(const ChartGeometry& c, double a, double b) {
  return [&c, a, b](const std::vector<double>& x, std::vector<double>& y) {
    ScalarField f(c.grid);
    f.data = x;
    ScalarField lap = laplace_scalar(c, f);
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] - b * lap.data[i];
  };
}

/// h_EL without its Laplacian part plus h_TH; the explicit piece of the flow.
TangentTensor2Field explicit_h(const ChartGeometry& c, const ModelParams& p,
                               const TangentTensor2Field& q, const ScalarField& beta) {
  TangentTensor2Field out(c.grid);
  ScalarField trq2 = local_inner(c, q, q);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    double H = c.mean_curv[n], K = c.gauss_curv[n], be = beta[n];
    Mat2 gi = c.ginv_at(n);
    Mat2 Bup = mul(gi, mul(c.II_at(n), gi));
    Mat2 piB = Bup - (0.5 * H) * gi;
    Mat2 el = (-p.L * (H * H - 2.0 * K)) * q.get(n) + (3.0 * p.L * be * H) * piB;
    double coef = 2.0 * p.a - 2.0 * p.b * be + 3.0 * p.c * be * be + 2.0 * p.c * trq2[n];
    out.set(n, el + (-coef) * q.get(n));
  }
  return out;
}

ScalarField explicit_omega(const ChartGeometry& c, const ModelParams& p,
                           const TangentTensor2Field& q, const ScalarField& beta) {
  ScalarField out(c.grid);
  ScalarField trq2 = local_inner(c, q, q);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    double H = c.mean_curv[n], K = c.gauss_curv[n], be = beta[n];
    double Bq = ddot(c.II_at(n), q.get(n));
    double el = p.L * (2.0 * H * Bq - 3.0 * be * (H * H - 2.0 * K));
    double th = -(2.0 * p.a + p.b * be + 3.0 * p.c * be * be + 2.0 * p.c * trq2[n]) * be +
                (2.0 / 3.0) * p.b * trq2[n];
    out[n] = el + th;
  }
  return out;
}

}  // namespace

double gradient_flow_residual(const ChartGeometry& c, const ModelParams& p,
                              const TangentTensor2Field& q, const ScalarField& beta,
                              BetaMode mode) {
  TangentTensor2Field h = explicit_h(c, p, q, beta);
  TangentTensor2Field lap = laplace_tensor2(c, q);
  for (std::size_t i = 0; i < h.data.size(); ++i) h.data[i] += p.L * lap.data[i];
  double r2 = l2_inner(c, h, h);
  if (mode == BetaMode::Free) {
    ScalarField w = explicit_omega(c, p, q, beta);
    ScalarField lapb = laplace_scalar(c, beta);
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) w[n] += p.L * lapb[n];
    r2 += l2_inner(c, w, w);
  }
  return std::sqrt(r2);
}

TrajectoryRecord run_gradient_flow(const ChartGeometry& chart, const ModelParams& params,
                                   SimState init, const SolverOptions& opt, BetaMode mode,
                                   double beta0) {
  const Grid& g = chart.grid;
  const double dt = opt.dt;
  const double Mt = params.M_tilde();
  if (!(Mt > 0.0)) throw ValidationError("gradient flow needs M_tilde > 0");
  SimState st = std::move(init);
  if (mode == BetaMode::Fixed) st.beta.fill(beta0);
  st.v.fill(0.0);

  const double guard = opt.blowup_factor * (max_abs(st.q) + max_abs(st.beta) + 1.0);
  DotFn qdot_ip = tensor_dot(chart);
  DotFn sdot_ip = scalar_dot(chart);
  LinOp qop = tensor_helmholtz(chart, Mt, dt * params.L);
  LinOp sop = scalar_helmholtz(chart, Mt, dt * params.L);

  TrajectoryRecord rec;
  VelocityState vs(g);  // no flow

  auto record_sample = [&](const SimState& s) {
    // instantaneous rates from the flow equations
    TangentTensor2Field h = explicit_h(chart, params, s.q, s.beta);
    TangentTensor2Field lap = laplace_tensor2(chart, s.q);
    TangentTensor2Field qdot(g);
    for (std::size_t i = 0; i < h.data.size(); ++i)
      qdot.data[i] = (h.data[i] + params.L * lap.data[i]) / Mt;
    ScalarField betadot(g);
    if (mode == BetaMode::Free) {
      ScalarField w = explicit_omega(chart, params, s.q, s.beta);
      ScalarField lapb = laplace_scalar(chart, s.beta);
      for (std::size_t n = 0; n < g.nodes(); ++n)
        betadot[n] = (w[n] + params.L * lapb[n]) / Mt;
    }
    EnergyReport er = energies_conforming(chart, params, vs, s.q, s.beta, qdot, betadot);
    er.t = s.t;
    rec.samples.push_back(er);
  };

  record_sample(st);
  if (opt.snapshot_hook && opt.snapshot_every > 0) opt.snapshot_hook(st, 0);

  std::vector<double> x = st.q.data;
  std::vector<double> xb = st.beta.data;
  for (int step = 1; step <= opt.n_steps; ++step) {
    TangentTensor2Field h = explicit_h(chart, params, st.q, st.beta);
    std::vector<double> rhs(st.q.data.size());
    for (std::size_t i = 0; i < rhs.size(); ++i)
      rhs[i] = Mt * st.q.data[i] + dt * h.data[i];
    KrylovResult kr = conjugate_gradient(qop, qdot_ip, rhs, x, 1e-11, 400);
    if (!kr.converged) {
      kr = bicgstab(qop, qdot_ip, rhs, x, 1e-11, 400);
      if (!kr.converged)
        throw ProjectionNonConvergence("implicit q-diffusion solve stalled");
    }
    if (mode == BetaMode::Free) {
      ScalarField w = explicit_omega(chart, params, st.q, st.beta);
      std::vector<double> rhsb(xb.size());
      for (std::size_t i = 0; i < rhsb.size(); ++i)
        rhsb[i] = Mt * st.beta.data[i] + dt * w.data[i];
      KrylovResult kb = conjugate_gradient(sop, sdot_ip, rhsb, xb, 1e-11, 400);
      if (!kb.converged) throw ProjectionNonConvergence("implicit beta solve stalled");
      st.beta.data = xb;
    }
    st.q.data = x;
    st.q = tt_project_q(chart, st.q);  // kill round-off drift out of the Q-subspace
    x = st.q.data;
    st.t += dt;
    if (max_abs(st.q) + max_abs(st.beta) > guard)
      throw BlowUp("gradient flow exceeded the blow-up guard at t = " + std::to_string(st.t));
    if (opt.sample_every > 0 && step % opt.sample_every == 0) record_sample(st);
    if (opt.snapshot_hook && opt.snapshot_every > 0 && step % opt.snapshot_every == 0)
      opt.snapshot_hook(st, step);
  }
  return rec;
}

}  // namespace surfnema
