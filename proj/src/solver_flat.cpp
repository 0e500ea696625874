#include <complex>
#include <random>

#include "surfnema/solvers.hpp"

namespace surfnema {

namespace {

using Cplx = std::complex<double>;

/// Spectral helpers for the flat periodic chart (identity metric).
struct FlatSpectral {
  const DerivEngine& de;
  int n1, n2, nc;

  explicit FlatSpectral(const DerivEngine& d)
      : de(d), n1(d.grid().n1), n2(d.grid().n2), nc(d.grid().n2 / 2 + 1) {}

  /// out = (a - b lap)^{-1} rhs.
  void helmholtz(double a, double b, const double* rhs, double* out) const {
    std::vector<Cplx> spec(de.spec_size());
    de.forward(rhs, spec.data());
    for (int i = 0; i < n1; ++i) {
      double k1 = de.k1(i);
      for (int j = 0; j < nc; ++j) {
        double k2 = de.k2(j);
        spec[std::size_t(i) * nc + j] /= (a + b * (k1 * k1 + k2 * k2));
      }
    }
    de.backward(spec.data(), out);
  }

  /// Remove the gradient part of (v1, v2); writes the projection potential
  /// scaled by `p_scale` into p (p = p_scale * phi with v* = v + grad phi).
  void leray(double* v1, double* v2, double* p, double p_scale) const {
    std::vector<Cplx> s1(de.spec_size()), s2(de.spec_size()), sp(de.spec_size());
    de.forward(v1, s1.data());
    de.forward(v2, s2.data());
    for (int i = 0; i < n1; ++i) {
      double k1 = de.k1d(i);
      for (int j = 0; j < nc; ++j) {
        double k2 = de.k2d(j);
        double kk = k1 * k1 + k2 * k2;
        std::size_t m = std::size_t(i) * nc + j;
        if (kk == 0.0) {
          sp[m] = 0.0;
          continue;
        }
        Cplx div = Cplx(0, 1) * (k1 * s1[m] + k2 * s2[m]);
        Cplx phi = div / (-kk);  // lap phi = div v*
        s1[m] -= Cplx(0, 1) * k1 * phi;
        s2[m] -= Cplx(0, 1) * k2 * phi;
        sp[m] = p_scale * phi;
      }
    }
    de.backward(s1.data(), v1);
    de.backward(s2.data(), v2);
    if (p) de.backward(sp.data(), p);
  }
};

inline Mat2 qmat(double q1, double q2) { return Mat2{{q1, q2, q2, -q1}}; }

}  // namespace

SimState init_taylor_green(const ChartGeometry& chart, double amplitude) {
  SimState s(chart.grid);
  const Grid& g = chart.grid;
  const double k1 = 2.0 * M_PI / g.p1, k2 = 2.0 * M_PI / g.p2;
  for (int i = 0; i < g.n1; ++i)
    for (int j = 0; j < g.n2; ++j) {
      std::size_t n = g.idx(i, j);
      double x = g.coord1(i), y = g.coord2(j);
      s.v.at(0, n) = amplitude * std::sin(k1 * x) * std::cos(k2 * y);
      s.v.at(1, n) = -amplitude * (k1 / k2) * std::cos(k1 * x) * std::sin(k2 * y);
    }
  return s;
}

SimState init_random_q(const ChartGeometry& chart, double amplitude, int kmax,
                       unsigned long seed) {
  SimState s(chart.grid);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> Ph(0.0, 2.0 * M_PI);
  TangentTensor2Field raw(chart.grid);
  for (int c = 0; c < 4; ++c) {
    for (int m1 = 0; m1 <= kmax; ++m1)
      for (int m2 = -kmax; m2 <= kmax; ++m2) {
        if (m1 == 0 && m2 < 0) continue;
        double a = U(rng) / (1.0 + m1 * m1 + m2 * m2);
        double ph = Ph(rng);
        for (int i = 0; i < chart.grid.n1; ++i) {
          double t1 = 2.0 * M_PI * m1 * i / chart.grid.n1;
          for (int j = 0; j < chart.grid.n2; ++j) {
            double t2 = 2.0 * M_PI * m2 * j / chart.grid.n2;
            raw.at(c, chart.grid.idx(i, j)) += a * std::cos(t1 + t2 + ph);
          }
        }
      }
  }
  s.q = tt_project_q(chart, raw);
  double m = max_abs(s.q);
  if (m > 0)
    for (auto& v : s.q.data) v *= amplitude / m;
  return s;
}

SimState init_uniform_uniaxial(const ChartGeometry& chart, double sval, double angle) {
  SimState s(chart.grid);
  for (std::size_t n = 0; n < chart.grid.nodes(); ++n) {
    Vec3 t1 = chart.t1_at(n);
    Vec3 e1 = (1.0 / norm(t1)) * t1;
    Vec3 e2 = cross(chart.nu_at(n), e1);
    Vec3 d = std::cos(angle) * e1 + std::sin(angle) * e2;
    Mat3 Q = sval * (outer(d, d) - (1.0 / 3.0) * Mat3::identity());
    // restrict to the tangential-Q part; beta = -s/3 held separately
    Mat2 gi = chart.ginv_at(n);
    Vec3 tt1 = chart.t1_at(n), tt2 = chart.t2_at(n);
    Vec3 tau[2] = {gi(0, 0) * tt1 + gi(0, 1) * tt2, gi(1, 0) * tt1 + gi(1, 1) * tt2};
    Mat2 q;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) q(i, j) = dot(tau[i], mul(Q, tau[j]));
    // subtract the isotropic surface part contributed by beta
    double beta = -sval / 3.0;
    Mat2 qq = q + (0.5 * beta) * gi;
    s.q.set(n, qq);
    s.beta[n] = beta;
  }
  return s;
}

TrajectoryRecord run_flat_be2d(const ChartGeometry& chart, const ModelParams& params,
                               SimState init, const SolverOptions& opt, FlatMode mode) {
  if (!chart.flat) throw ValidationError("flat_be2d requires a flat chart");
  if (chart.scheme != DerivScheme::Spectral)
    throw ValidationError("flat_be2d uses the spectral scheme");
  ModelParams p = params;
  if (mode == FlatMode::Isotropic) p.xi = 0.0;
  if (mode != FlatMode::Full && p.M <= 0.0)
    throw ValidationError("linearized modes need M > 0");
  const Grid& g = chart.grid;
  const DerivEngine& de = *chart.deriv;
  FlatSpectral fs(de);
  const std::size_t nn = g.nodes();
  const double dt = opt.dt;
  const double Mt = (mode == FlatMode::Full) ? p.M_tilde() : p.M;
  const bool jrows = (p.phi == Flavor::Jaumann);
  const bool jrows_stress = jrows && !opt.material_form_rows;

  SimState st = std::move(init);
  st.beta.fill(0.0);  // flat-degenerate states only

  const double guard =
      opt.blowup_factor * (max_abs(st.v) + max_abs(st.q) + 1.0);

  TrajectoryRecord rec;
  ScalarField q1n(g), q2n(g);

  auto record_sample = [&](const SimState& s) {
    // Instantaneous D_phi q from the PDE right-hand side, converted to the
    // material tangential rate the energy bookkeeping expects.
    ScalarField l1(g), l2(g);
    {
      std::vector<Cplx> spec(de.spec_size());
      for (int c = 0; c < 2; ++c) {
        de.forward(s.q.comp(c), spec.data());
        for (int i = 0; i < g.n1; ++i)
          for (int j = 0; j < g.n2 / 2 + 1; ++j) {
            double k1 = de.k1(i), k2 = de.k2(j);
            spec[std::size_t(i) * (g.n2 / 2 + 1) + j] *= -(k1 * k1 + k2 * k2);
          }
        de.backward(spec.data(), (c == 0 ? l1 : l2).comp(0));
      }
    }
    ScalarField dv11(g), dv12(g), dv21(g), dv22(g);
    de.d1(s.v.comp(0), dv11.comp(0));
    de.d2(s.v.comp(0), dv12.comp(0));
    de.d1(s.v.comp(1), dv21.comp(0));
    de.d2(s.v.comp(1), dv22.comp(0));
    TangentTensor2Field qdot(g);
    for (std::size_t n = 0; n < nn; ++n) {
      double q1 = s.q.at(0, n), q2 = s.q.at(1, n);
      double trq2 = 2.0 * (q1 * q1 + q2 * q2);
      double d11 = dv11[n], d12 = dv12[n], d21 = dv21[n], d22 = dv22[n];
      double a = 0.5 * (d21 - d12);  // A = a Z
      double S11 = d11, S22 = d22, S12 = 0.5 * (d12 + d21);
      double qdv = q1 * (d11 - d22) + q2 * (d12 + d21);  // q : grad v
      double F1, F2;
      if (mode == FlatMode::Full) {
        Mat2 q = qmat(q1, q2);
        Mat2 TwoS{{2 * S11, 2 * S12, 2 * S12, 2 * S22}};
        Mat2 grad{{d11, d12, d21, d22}};
        Mat2 h2m;
        if (jrows) {
          h2m = (-p.upsilon / 4.0) * (mul(q, TwoS) + mul(TwoS, q));
        } else {
          h2m = (-p.upsilon / 2.0) * (mul(q, grad) + mul(transpose(grad), q));
        }
        h2m(0, 0) += 0.5 * p.upsilon * qdv;
        h2m(1, 1) += 0.5 * p.upsilon * qdv;
        double ht1 = 0.5 * (h2m(0, 0) - h2m(1, 1));
        double ht2 = 0.5 * (h2m(0, 1) + h2m(1, 0));
        F1 = p.L * l1[n] - 2.0 * (p.a + p.c * trq2) * q1 +
             0.5 * p.upsilon * p.xi * (S11 - S22) + p.xi * p.xi * ht1;
        F2 = p.L * l2[n] - 2.0 * (p.a + p.c * trq2) * q2 + p.upsilon * p.xi * S12 +
             p.xi * p.xi * ht2;
      } else {
        F1 = p.L * l1[n] - 2.0 * (p.a + p.c * trq2) * q1 +
             0.5 * p.upsilon * p.xi * (S11 - S22);
        F2 = p.L * l2[n] - 2.0 * (p.a + p.c * trq2) * q2 + p.upsilon * p.xi * S12;
      }
      double r1 = F1 / Mt, r2 = F2 / Mt;
      if (jrows || mode != FlatMode::Full) {
        // qdot = Jq + A q - q A
        r1 = r1 - 2.0 * a * q2;
        r2 = r2 + 2.0 * a * q1;
      }
      qdot.at(0, n) = r1;
      qdot.at(1, n) = r2;
      qdot.at(2, n) = r2;
      qdot.at(3, n) = -r1;
    }
    VelocityState vs(g);
    vs.v = s.v;
    ScalarField betadot(g);
    EnergyReport er = energies_conforming(chart, p, vs, s.q, s.beta, qdot, betadot);
    er.t = s.t;
    rec.samples.push_back(er);
  };

  // Make the initial velocity admissible before the first sample.
  fs.leray(st.v.comp(0), st.v.comp(1), nullptr, 0.0);

  record_sample(st);
  if (opt.snapshot_hook && opt.snapshot_every > 0) opt.snapshot_hook(st, 0);

  for (int step = 1; step <= opt.n_steps; ++step) {
    // velocity gradient at step start
    ScalarField dv11(g), dv12(g), dv21(g), dv22(g);
    de.d1(st.v.comp(0), dv11.comp(0));
    de.d2(st.v.comp(0), dv12.comp(0));
    de.d1(st.v.comp(1), dv21.comp(0));
    de.d2(st.v.comp(1), dv22.comp(0));
    // advection of q
    ScalarField a1(g), a2(g);
    {
      ScalarField t1(g), t2(g);
      de.d1(st.q.comp(0), t1.comp(0));
      de.d2(st.q.comp(0), t2.comp(0));
      for (std::size_t n = 0; n < nn; ++n)
        a1[n] = st.v.at(0, n) * t1[n] + st.v.at(1, n) * t2[n];
      de.d1(st.q.comp(1), t1.comp(0));
      de.d2(st.q.comp(1), t2.comp(0));
      for (std::size_t n = 0; n < nn; ++n)
        a2[n] = st.v.at(0, n) * t1[n] + st.v.at(1, n) * t2[n];
    }

    // explicit q RHS
    ScalarField rhs1(g), rhs2(g);
    for (std::size_t n = 0; n < nn; ++n) {
      double q1 = st.q.at(0, n), q2 = st.q.at(1, n);
      double trq2 = 2.0 * (q1 * q1 + q2 * q2);
      double d11 = dv11[n], d12 = dv12[n], d21 = dv21[n], d22 = dv22[n];
      double aa = 0.5 * (d21 - d12);
      double S11 = d11, S22 = d22, S12 = 0.5 * (d12 + d21);
      double qdv = q1 * (d11 - d22) + q2 * (d12 + d21);
      double N1 = a1[n], N2 = a2[n];
      const bool corot = jrows || mode != FlatMode::Full;
      if (corot) {
        N1 += 2.0 * aa * q2;
        N2 += -2.0 * aa * q1;
      }
      double F1, F2;
      if (mode == FlatMode::Full) {
        Mat2 q = qmat(q1, q2);
        Mat2 TwoS{{2 * S11, 2 * S12, 2 * S12, 2 * S22}};
        Mat2 grad{{d11, d12, d21, d22}};
        Mat2 h2m;
        if (jrows) {
          h2m = (-p.upsilon / 4.0) * (mul(q, TwoS) + mul(TwoS, q));
          h2m(0, 0) += 0.5 * p.upsilon * qdv;
          h2m(1, 1) += 0.5 * p.upsilon * qdv;
        } else {
          h2m = (-p.upsilon / 2.0) * (mul(q, grad) + mul(transpose(grad), q));
          h2m(0, 0) += 0.5 * p.upsilon * qdv;
          h2m(1, 1) += 0.5 * p.upsilon * qdv;
        }
        double ht1 = 0.5 * (h2m(0, 0) - h2m(1, 1));
        double ht2 = 0.5 * (h2m(0, 1) + h2m(1, 0));
        F1 = -2.0 * (p.a + p.c * trq2) * q1 + 0.5 * p.upsilon * p.xi * (S11 - S22) +
             p.xi * p.xi * ht1;
        F2 = -2.0 * (p.a + p.c * trq2) * q2 + p.upsilon * p.xi * S12 + p.xi * p.xi * ht2;
      } else {
        F1 = -2.0 * (p.a + p.c * trq2) * q1 + 0.5 * p.upsilon * p.xi * (S11 - S22);
        F2 = -2.0 * (p.a + p.c * trq2) * q2 + p.upsilon * p.xi * S12;
      }
      rhs1[n] = Mt * st.q.at(0, n) + dt * (F1 - Mt * N1);
      rhs2[n] = Mt * st.q.at(1, n) + dt * (F2 - Mt * N2);
    }
    fs.helmholtz(Mt, dt * p.L, rhs1.comp(0), q1n.comp(0));
    fs.helmholtz(Mt, dt * p.L, rhs2.comp(0), q2n.comp(0));

    // step rate D_phi q (and the material rate)
    ScalarField r1(g), r2(g), qd1(g), qd2(g);
    for (std::size_t n = 0; n < nn; ++n) {
      double aa = 0.5 * (dv21[n] - dv12[n]);
      double N1 = a1[n], N2 = a2[n];
      const bool corot = jrows || mode != FlatMode::Full;
      double q1old = st.q.at(0, n), q2old = st.q.at(1, n);
      if (corot) {
        N1 += 2.0 * aa * q2old;
        N2 += -2.0 * aa * q1old;
      }
      r1[n] = (q1n[n] - q1old) / dt + N1;
      r2[n] = (q2n[n] - q2old) / dt + N2;
      // material rate (for material-form stress rows)
      if (corot) {
        qd1[n] = r1[n] - 2.0 * aa * q2old;
        qd2[n] = r2[n] + 2.0 * aa * q1old;
      } else {
        qd1[n] = r1[n];
        qd2[n] = r2[n];
      }
    }

    // advance q
    for (std::size_t n = 0; n < nn; ++n) {
      st.q.at(0, n) = q1n[n];
      st.q.at(1, n) = q2n[n];
      st.q.at(2, n) = q2n[n];
      st.q.at(3, n) = -q1n[n];
    }

    // q gradients for the elastic stress (updated q)
    ScalarField dq11(g), dq21(g), dq12(g), dq22(g);
    de.d1(st.q.comp(0), dq11.comp(0));
    de.d2(st.q.comp(0), dq21.comp(0));
    de.d1(st.q.comp(1), dq12.comp(0));
    de.d2(st.q.comp(1), dq22.comp(0));

    // assemble coupling stress sigma (excluding the isotropic viscous part)
    TangentTensor2Field sigma(g);
    ScalarField pth(g);
    ScalarField hu1(g), hu2(g);  // h_U for the linearized modes
    if (mode != FlatMode::Full) {
      std::vector<Cplx> spec(de.spec_size());
      ScalarField l1(g), l2(g);
      for (int c = 0; c < 2; ++c) {
        de.forward(st.q.comp(c), spec.data());
        for (int i = 0; i < g.n1; ++i)
          for (int j = 0; j < g.n2 / 2 + 1; ++j) {
            double k1 = de.k1(i), k2 = de.k2(j);
            spec[std::size_t(i) * (g.n2 / 2 + 1) + j] *= -(k1 * k1 + k2 * k2);
          }
        de.backward(spec.data(), (c == 0 ? l1 : l2).comp(0));
      }
      for (std::size_t n = 0; n < nn; ++n) {
        double q1 = st.q.at(0, n), q2 = st.q.at(1, n);
        double trq2 = 2.0 * (q1 * q1 + q2 * q2);
        hu1[n] = p.L * l1[n] - 2.0 * (p.a + p.c * trq2) * q1;
        hu2[n] = p.L * l2[n] - 2.0 * (p.a + p.c * trq2) * q2;
      }
    }
    for (std::size_t n = 0; n < nn; ++n) {
      double q1 = st.q.at(0, n), q2 = st.q.at(1, n);
      double trq2 = 2.0 * (q1 * q1 + q2 * q2);
      pth[n] = p.a * trq2 + 0.5 * p.c * trq2 * trq2;
      // elastic distortion stress (Table sign: -L(...))
      double g11 = 2.0 * (dq11[n] * dq11[n] + dq12[n] * dq12[n]);
      double g12 = 2.0 * (dq11[n] * dq21[n] + dq12[n] * dq22[n]);
      double g22 = 2.0 * (dq21[n] * dq21[n] + dq22[n] * dq22[n]);
      double half = 0.5 * (g11 + g22);
      Mat2 sig{{-p.L * (g11 - half), -p.L * g12, -p.L * g12, -p.L * (g22 - half)}};
      double d11 = dv11[n], d12 = dv12[n], d21 = dv21[n], d22 = dv22[n];
      Mat2 q = qmat(q1, q2);
      Mat2 TwoS{{2 * d11, d12 + d21, d12 + d21, 2 * d22}};
      Mat2 grad{{d11, d12, d21, d22}};
      if (mode == FlatMode::Full) {
        Mat2 qdot = qmat(qd1[n], qd2[n]);
        double aa = 0.5 * (d21 - d12);
        Mat2 Jq = qmat(qd1[n] + 2.0 * aa * q2, qd2[n] - 2.0 * aa * q1);
        // immobility stress (Jaumann model only):
        // q Jq - (Jq) q = -2 (q1 r2 - q2 r1) Z for Z = [[0,-1],[1,0]]
        if (p.phi == Flavor::Jaumann) {
          double comm = q1 * Jq(0, 1) - q2 * Jq(0, 0);  // q1 r2 - q2 r1
          Mat2 Z{{0, -1, 1, 0}};
          sig = sig - (2.0 * p.M * comm) * Z;
        }
        // nematic viscous orders; the two row representations are equal tensors
        Mat2 s1, s2;
        if (jrows_stress) {
          s1 = (-p.upsilon) * (Jq + 1.5 * mul(q, TwoS) + 0.5 * mul(TwoS, q));
          s2 = p.upsilon *
               (mul(q, Jq) + 0.5 * mul(q, mul(TwoS, q)) + (trq2 / 4.0) * TwoS);
        } else {
          s1 = (-p.upsilon) * (qdot + mul(q, 2.0 * grad + transpose(grad)) +
                               mul(transpose(grad), q));
          s2 = p.upsilon * (mul(q, qdot) + mul(q, mul(transpose(grad), q)) +
                            (trq2 / 2.0) * grad);
        }
        sig = sig + p.xi * s1 + (p.xi * p.xi) * s2;
      } else {
        // linearized Jaumann momentum coupling
        Mat2 hu = qmat(hu1[n], hu2[n]);
        Mat2 comm = mul(q, hu) - mul(hu, q);
        Mat2 tild = mul(q, TwoS) + mul(TwoS, q);
        sig = sig + comm - (p.upsilon * p.xi / p.M) * hu - (p.upsilon * p.xi) * tild;
      }
      sigma.set(n, sig);
    }

    // momentum: explicit force
    ScalarField f1(g), f2(g);
    {
      // div sigma: [div s]^i = d_j s^{ij}
      ScalarField t(g), s(g);
      ScalarField c11(g), c12(g), c21(g), c22(g);
      for (std::size_t n = 0; n < nn; ++n) {
        c11[n] = sigma.at(0, n);
        c12[n] = sigma.at(1, n);
        c21[n] = sigma.at(2, n);
        c22[n] = sigma.at(3, n);
      }
      de.d1(c11.comp(0), t.comp(0));
      de.d2(c12.comp(0), s.comp(0));
      for (std::size_t n = 0; n < nn; ++n) f1[n] = t[n] + s[n];
      de.d1(c21.comp(0), t.comp(0));
      de.d2(c22.comp(0), s.comp(0));
      for (std::size_t n = 0; n < nn; ++n) f2[n] = t[n] + s[n];
      // + grad p_TH
      de.d1(pth.comp(0), t.comp(0));
      de.d2(pth.comp(0), s.comp(0));
      for (std::size_t n = 0; n < nn; ++n) {
        f1[n] += t[n];
        f2[n] += s[n];
      }
      // - rho (v . grad) v
      de.d1(st.v.comp(0), t.comp(0));
      de.d2(st.v.comp(0), s.comp(0));
      for (std::size_t n = 0; n < nn; ++n)
        f1[n] -= p.rho * (st.v.at(0, n) * t[n] + st.v.at(1, n) * s[n]);
      de.d1(st.v.comp(1), t.comp(0));
      de.d2(st.v.comp(1), s.comp(0));
      for (std::size_t n = 0; n < nn; ++n)
        f2[n] -= p.rho * (st.v.at(0, n) * t[n] + st.v.at(1, n) * s[n]);
    }
    ScalarField v1s(g), v2s(g);
    for (std::size_t n = 0; n < nn; ++n) {
      v1s[n] = p.rho * st.v.at(0, n) + dt * f1[n];
      v2s[n] = p.rho * st.v.at(1, n) + dt * f2[n];
    }
    ScalarField v1n(g), v2n(g);
    fs.helmholtz(p.rho, dt * p.upsilon, v1s.comp(0), v1n.comp(0));
    fs.helmholtz(p.rho, dt * p.upsilon, v2s.comp(0), v2n.comp(0));
    fs.leray(v1n.comp(0), v2n.comp(0), st.p.comp(0), p.rho / dt);
    for (std::size_t n = 0; n < nn; ++n) {
      st.v.at(0, n) = v1n[n];
      st.v.at(1, n) = v2n[n];
    }

    st.t += dt;
    if (max_abs(st.v) + max_abs(st.q) > guard)
      throw BlowUp("field max-norm exceeded the blow-up guard at t = " +
                   std::to_string(st.t));
    if (opt.sample_every > 0 && step % opt.sample_every == 0) record_sample(st);
    if (opt.snapshot_hook && opt.snapshot_every > 0 && step % opt.snapshot_every == 0)
      opt.snapshot_hook(st, step);
  }
  return rec;
}

}  // namespace surfnema
