#include "surfnema/krylov.hpp"
#include "surfnema/solvers.hpp"

namespace surfnema {

namespace {

DotFn tensor_dot(const ChartGeometry& c) {
  return [&c](const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t nn = c.grid.nodes();
    double s = 0;
    const double w = c.grid.h1() * c.grid.h2();
    for (std::size_t n = 0; n < nn; ++n) {
      Mat2 g = c.g_at(n);
      Mat2 a{{x[n], x[nn + n], x[2 * nn + n], x[3 * nn + n]}};
      Mat2 b{{y[n], y[nn + n], y[2 * nn + n], y[3 * nn + n]}};
      s += ddot(mul(g, mul(a, g)), b) * c.area_form[n] * w;
    }
    return s;
  };
}

DotFn vector_dot(const ChartGeometry& c) {
  return [&c](const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t nn = c.grid.nodes();
    double s = 0;
    const double w = c.grid.h1() * c.grid.h2();
    for (std::size_t n = 0; n < nn; ++n) {
      Mat2 g = c.g_at(n);
      s += (g(0, 0) * x[n] * y[n] + g(0, 1) * (x[n] * y[nn + n] + x[nn + n] * y[n]) +
            g(1, 1) * x[nn + n] * y[nn + n]) *
           c.area_form[n] * w;
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

}  // namespace

TrajectoryRecord run_stationary_nemato(const ChartGeometry& chart, const ModelParams& params,
                                       SimState init, const SolverOptions& opt, double beta0) {
  if (params.xi != 0.0)
    throw ValidationError("the stationary-surface solver is defined for xi = 0");
  const Grid& g = chart.grid;
  const std::size_t nn = g.nodes();
  const double dt = opt.dt;
  const ModelParams& p = params;
  if (!(p.M > 0.0)) throw ValidationError("stationary solver needs M > 0");

  SimState st = std::move(init);
  st.beta.fill(beta0);
  ScalarField beta(g);
  beta.fill(beta0);

  const bool jmodel = (p.phi == Flavor::Jaumann);
  const double guard = opt.blowup_factor * (max_abs(st.v) + max_abs(st.q) + 1.0);

  DotFn qip = tensor_dot(chart);
  DotFn vip = vector_dot(chart);
  DotFn sip = scalar_dot(chart);
  LinOp qop = [&](const std::vector<double>& x, std::vector<double>& y) {
    TangentTensor2Field q(g);
    q.data = x;
    TangentTensor2Field lap = laplace_tensor2(chart, q);
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = p.M * x[i] - dt * p.L * lap.data[i];
  };
  LinOp vop = [&](const std::vector<double>& x, std::vector<double>& y) {
    TangentVectorField v(g);
    v.data = x;
    TangentVectorField lap = laplace_vector(chart, v);
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      y[i] = p.rho * x[i] - dt * p.upsilon * lap.data[i];
  };
  // Projection solve in mu-scaled divergence form: the operator
  // x -> -d_i(mu g^{ij} d_j x) is exactly symmetric in the plain l2 product
  // (spectral differentiation is skew), which admits the flat spectral
  // preconditioner below.
  LinOp pop = [&](const std::vector<double>& x, std::vector<double>& y) {
    ScalarField f(g);
    f.data = x;
    ScalarGradField df = grad_scalar(chart, f);
    ScalarField f1(g), f2(g);
    for (std::size_t n = 0; n < nn; ++n) {
      Mat2 gi = chart.ginv_at(n);
      double mu = chart.area_form[n];
      f1[n] = mu * (gi(0, 0) * df.at(0, n) + gi(0, 1) * df.at(1, n));
      f2[n] = mu * (gi(1, 0) * df.at(0, n) + gi(1, 1) * df.at(1, n));
    }
    ScalarField t1(g), t2(g);
    chart.deriv->d1(f1.comp(0), t1.comp(0));
    chart.deriv->d2(f2.comp(0), t2.comp(0));
    y.resize(x.size());
    for (std::size_t n = 0; n < nn; ++n) y[n] = -(t1[n] + t2[n]);
  };
  // Mean-coefficient spectral preconditioner for the projection solve.
  std::shared_ptr<const DerivEngine> pde = chart.deriv;
  if (chart.scheme != DerivScheme::Spectral && g.n1 % 2 == 0 && g.n2 % 2 == 0)
    pde = std::make_shared<DerivEngine>(g, DerivScheme::Spectral);
  double c11 = 0, c22 = 0;
  for (std::size_t n = 0; n < nn; ++n) {
    Mat2 gi = chart.ginv_at(n);
    c11 += gi(0, 0) * chart.area_form[n];
    c22 += gi(1, 1) * chart.area_form[n];
  }
  c11 /= double(nn);
  c22 /= double(nn);
  const bool spectral_pc = (pde->scheme() == DerivScheme::Spectral);
  // The operator annihilates the k = 0 and Nyquist modes (spectral first
  // derivatives zero them), so the preconditioner and the right-hand side
  // must live in the complementary resolvable subspace.
  LinOp pinv = [&, c11, c22, pde](const std::vector<double>& r, std::vector<double>& z) {
    z = r;
    if (!spectral_pc) return;
    std::vector<std::complex<double>> spec(pde->spec_size());
    pde->forward(r.data(), spec.data());
    const int nc = g.n2 / 2 + 1;
    for (int i = 0; i < g.n1; ++i) {
      double k1 = pde->k1d(i);
      for (int j = 0; j < nc; ++j) {
        double k2 = pde->k2d(j);
        double sym = c11 * k1 * k1 + c22 * k2 * k2;
        std::size_t m = std::size_t(i) * nc + j;
        spec[m] = (sym > 0) ? spec[m] / sym : 0.0;
      }
    }
    z.resize(r.size());
    pde->backward(spec.data(), z.data());
  };
  LinOp range_filter = [&, pde](const std::vector<double>& r, std::vector<double>& z) {
    z = r;
    if (!spectral_pc) return;
    std::vector<std::complex<double>> spec(pde->spec_size());
    pde->forward(r.data(), spec.data());
    const int nc = g.n2 / 2 + 1;
    for (int i = 0; i < g.n1; ++i) {
      double k1 = pde->k1d(i);
      for (int j = 0; j < nc; ++j) {
        double k2 = pde->k2d(j);
        if (k1 * k1 + k2 * k2 == 0.0) spec[std::size_t(i) * nc + j] = 0.0;
      }
    }
    pde->backward(spec.data(), z.data());
  };
  DotFn plain_dot = [](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
  };

  VelocityState vstate(g);

  // explicit h part (curvature + thermotropic) reused from the flow equation
  auto explicit_h = [&](const TangentTensor2Field& q) {
    TangentTensor2Field out(g);
    ScalarField trq2 = local_inner(chart, q, q);
    for (std::size_t n = 0; n < nn; ++n) {
      double H = chart.mean_curv[n], K = chart.gauss_curv[n];
      Mat2 gi = chart.ginv_at(n);
      Mat2 Bup = mul(gi, mul(chart.II_at(n), gi));
      Mat2 piB = Bup - (0.5 * H) * gi;
      Mat2 el = (-p.L * (H * H - 2.0 * K)) * q.get(n) + (3.0 * p.L * beta0 * H) * piB;
      double coef =
          2.0 * p.a - 2.0 * p.b * beta0 + 3.0 * p.c * beta0 * beta0 + 2.0 * p.c * trq2[n];
      out.set(n, el + (-coef) * q.get(n));
    }
    return out;
  };

  TrajectoryRecord rec;
  auto record_sample = [&](const SimState& s) {
    vstate.v = s.v;
    // instantaneous tangential material rate from the q-equation
    TangentTensor2Field h = explicit_h(s.q);
    TangentTensor2Field lap = laplace_tensor2(chart, s.q);
    TangentTensor2Field rate(g);
    for (std::size_t i = 0; i < rate.data.size(); ++i)
      rate.data[i] = (h.data[i] + p.L * lap.data[i]) / p.M;
    TangentTensor2Field qdot(g);
    if (jmodel) {
      // qdot = Jq + A q - q A
      DeformationGradients dg = deformation_gradients(chart, vstate);
      TangentTensor2Field Aq = tt_mul(dg.A, chart, s.q);
      TangentTensor2Field qA = tt_mul(s.q, chart, dg.A);
      for (std::size_t n = 0; n < nn; ++n)
        qdot.set(n, rate.get(n) + Aq.get(n) - qA.get(n));
    } else {
      qdot = rate;
    }
    ScalarField betadot(g);
    EnergyReport er = energies_conforming(chart, p, vstate, s.q, beta, qdot, betadot);
    er.t = s.t;
    rec.samples.push_back(er);
  };

  std::vector<double> xq = st.q.data, xv = st.v.data, xphi(nn, 0.0);

  // Make the initial velocity admissible (divergence-free) before sampling.
  auto project_velocity = [&](TangentVectorField& v) {
    ScalarField divv = div_vector(chart, v);
    double mean = 0, tot = 0;
    for (std::size_t n = 0; n < nn; ++n) {
      mean += divv[n] * chart.area_form[n];
      tot += chart.area_form[n];
    }
    mean /= tot;
    for (std::size_t n = 0; n < nn; ++n) divv[n] -= mean;
    std::vector<double> rhs(nn);
    for (std::size_t n = 0; n < nn; ++n) rhs[n] = -chart.area_form[n] * divv[n];
    range_filter(rhs, rhs);
    KrylovResult kp = pcg(pop, pinv, plain_dot, rhs, xphi, 1e-10, 500);
    if (!kp.converged)
      throw ProjectionNonConvergence("initial Leray projection did not converge");
    ScalarField phi(g);
    phi.data = xphi;
    ScalarGradField dphi = grad_scalar(chart, phi);
    for (std::size_t n = 0; n < nn; ++n) {
      Mat2 gi = chart.ginv_at(n);
      for (int i = 0; i < 2; ++i)
        v.at(i, n) -= gi(i, 0) * dphi.at(0, n) + gi(i, 1) * dphi.at(1, n);
    }
  };
  project_velocity(st.v);
  xv = st.v.data;

  record_sample(st);
  if (opt.snapshot_hook && opt.snapshot_every > 0) opt.snapshot_hook(st, 0);
  for (int step = 1; step <= opt.n_steps; ++step) {
    vstate.v = st.v;
    DeformationGradients dg = deformation_gradients(chart, vstate);

    // --- q step ---------------------------------------------------------
    TangentTensor2Field adv = advect_tensor2(chart, st.q, st.v);
    TangentTensor2Field corot(g);
    if (jmodel) {
      TangentTensor2Field Aq = tt_mul(dg.A, chart, st.q);
      TangentTensor2Field qA = tt_mul(st.q, chart, dg.A);
      for (std::size_t n = 0; n < nn; ++n) corot.set(n, (-1.0) * Aq.get(n) + qA.get(n));
    }
    TangentTensor2Field h = explicit_h(st.q);
    std::vector<double> rhs(xq.size());
    for (std::size_t i = 0; i < rhs.size(); ++i)
      rhs[i] = p.M * st.q.data[i] + dt * (h.data[i] - p.M * (adv.data[i] + corot.data[i]));
    KrylovResult kr = conjugate_gradient(qop, qip, rhs, xq, 1e-11, 400);
    if (!kr.converged) {
      kr = bicgstab(qop, qip, rhs, xq, 1e-11, 400);
      if (!kr.converged) throw ProjectionNonConvergence("stationary q solve stalled");
    }
    TangentTensor2Field qnew(g);
    qnew.data = xq;
    qnew = tt_project_q(chart, qnew);

    // step rates (tangential): D_phi q then the pieces the stress needs
    TangentTensor2Field rate(g), qdotm(g), Jq(g);
    for (std::size_t n = 0; n < nn; ++n) {
      Mat2 r = (1.0 / dt) * (qnew.get(n) - st.q.get(n)) + adv.get(n) + corot.get(n);
      rate.set(n, r);
    }
    if (jmodel) {
      TangentTensor2Field Aq = tt_mul(dg.A, chart, st.q);
      TangentTensor2Field qA = tt_mul(st.q, chart, dg.A);
      Jq = rate;
      for (std::size_t n = 0; n < nn; ++n)
        qdotm.set(n, rate.get(n) + Aq.get(n) - qA.get(n));
    } else {
      qdotm = rate;
      TangentTensor2Field Aq = tt_mul(dg.A, chart, st.q);
      TangentTensor2Field qA = tt_mul(st.q, chart, dg.A);
      for (std::size_t n = 0; n < nn; ++n)
        Jq.set(n, rate.get(n) - Aq.get(n) + qA.get(n));
    }
    st.q = qnew;

    // --- momentum step ----------------------------------------------------
    ModelParams pe = p;  // evaluators need matching flavor
    TermBundle el = elastic_conforming(chart, pe, st.q, beta);
    ScalarField pth = thermotropic_pressure_conforming(chart, pe, st.q, beta);
    ScalarField bd(g);
    TermBundle im = immobility_conforming(chart, pe, st.q, beta, vstate,
                                          jmodel ? Jq : qdotm, bd, pe.phi);
    // sigma = sigma_EL + sigma_IM (viscous handled implicitly + remainder)
    TangentTensor2Field sigma = *el.conforming.sigma;
    for (std::size_t i = 0; i < sigma.data.size(); ++i)
      sigma.data[i] += im.conforming.sigma->data[i];
    TangentVectorField divs = div_tensor2(chart, sigma);
    // viscous remainder div(2 upsilon S) - upsilon lap_B v
    TangentTensor2Field twoS(g);
    for (std::size_t n = 0; n < nn; ++n) twoS.set(n, 2.0 * dg.S.get(n));
    TangentVectorField div2S = div_tensor2(chart, twoS);
    TangentVectorField lapv = laplace_vector(chart, st.v);
    // curvature coupling (2 B q - 3 beta0 B)(zeta_EL + zeta_IM)
    TangentVectorField zeta = *el.conforming.zeta;
    for (std::size_t i = 0; i < zeta.data.size(); ++i)
      zeta.data[i] += im.conforming.zeta->data[i];
    TangentVectorField curv(g);
    for (std::size_t n = 0; n < nn; ++n) {
      Mat2 gi = chart.ginv_at(n);
      Mat2 gg = chart.g_at(n);
      Mat2 Bup = mul(gi, mul(chart.II_at(n), gi));
      Mat2 Bq = mul(Bup, mul(gg, st.q.get(n)));
      Mat2 Mop = 2.0 * Bq - 3.0 * beta0 * Bup;
      curv.set(n, mul(Mop, mul(gg, zeta.get(n))));
    }
    // pressure gradient of p_TH (tangential, contravariant)
    ScalarGradField dpth = grad_scalar(chart, pth);
    TangentVectorField adv_v = advect_vector(chart, st.v, st.v);
    std::vector<double> rhsv(xv.size());
    for (std::size_t n = 0; n < nn; ++n) {
      Mat2 gi = chart.ginv_at(n);
      for (int i = 0; i < 2; ++i) {
        double grad_pth = gi(i, 0) * dpth.at(0, n) + gi(i, 1) * dpth.at(1, n);
        double f = -p.rho * adv_v.at(i, n) + grad_pth + divs.at(i, n) +
                   p.upsilon * (div2S.at(i, n) - lapv.at(i, n)) + curv.at(i, n);
        rhsv[i * nn + n] = p.rho * st.v.at(i, n) + dt * f;
      }
    }
    KrylovResult kv = conjugate_gradient(vop, vip, rhsv, xv, 1e-11, 400);
    if (!kv.converged) {
      kv = bicgstab(vop, vip, rhsv, xv, 1e-11, 400);
      if (!kv.converged) throw ProjectionNonConvergence("stationary v solve stalled");
    }
    TangentVectorField vstar(g);
    vstar.data = xv;

    // --- Leray projection -------------------------------------------------
    ScalarField divv = div_vector(chart, vstar);
    {
      // solvability: remove the weighted mean
      double mean = 0, tot = 0;
      for (std::size_t n = 0; n < nn; ++n) {
        mean += divv[n] * chart.area_form[n];
        tot += chart.area_form[n];
      }
      mean /= tot;
      for (std::size_t n = 0; n < nn; ++n) divv[n] -= mean;
    }
    std::vector<double> negdiv(nn);
    for (std::size_t n = 0; n < nn; ++n) negdiv[n] = -chart.area_form[n] * divv[n];
    range_filter(negdiv, negdiv);
    KrylovResult kp = pcg(pop, pinv, plain_dot, negdiv, xphi, 1e-10, 500);
#ifdef SURFNEMA_DEBUG_PROJ
    std::fprintf(stderr, "step %d: kq=%d kv=%d kp=%d resid=%.3e maxv=%.3e\n", step, kr.iters, kv.iters, kp.iters, kp.residual, max_abs(vstar));
#endif
    if (!kp.converged)
      throw ProjectionNonConvergence("variable-coefficient Leray projection did not reach "
                                     "1e-10 in 500 iterations");
    ScalarField phi(g);
    phi.data = xphi;
    {
      double mean = 0;
      for (std::size_t n = 0; n < nn; ++n) mean += phi[n];
      mean /= nn;
      for (std::size_t n = 0; n < nn; ++n) phi[n] -= mean;
      xphi = phi.data;
    }
    ScalarGradField dphi = grad_scalar(chart, phi);
    for (std::size_t n = 0; n < nn; ++n) {
      Mat2 gi = chart.ginv_at(n);
      for (int i = 0; i < 2; ++i)
        st.v.at(i, n) =
            vstar.at(i, n) - (gi(i, 0) * dphi.at(0, n) + gi(i, 1) * dphi.at(1, n));
    }
    for (std::size_t n = 0; n < nn; ++n) st.p[n] = (p.rho / dt) * phi[n];
    xv = st.v.data;

    st.t += dt;
    if (max_abs(st.v) + max_abs(st.q) > guard)
      throw BlowUp("stationary solver exceeded the blow-up guard at t = " +
                   std::to_string(st.t));
    if (opt.sample_every > 0 && step % opt.sample_every == 0) record_sample(st);
    if (opt.snapshot_hook && opt.snapshot_every > 0 && step % opt.snapshot_every == 0)
      opt.snapshot_hook(st, step);
  }
  return rec;
}

}  // namespace surfnema
