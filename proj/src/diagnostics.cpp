#include "surfnema/diagnostics.hpp"

#include <cmath>
#include <random>

namespace surfnema {

EnergyReport energies_conforming(const ChartGeometry& c, const ModelParams& p,
                                 const VelocityState& state, const TangentTensor2Field& q,
                                 const ScalarField& beta, const TangentTensor2Field& qdot,
                                 const ScalarField& betadot) {
  EnergyReport r;
  ScalarField v2 = local_inner(c, state.v, state.v);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    v2[n] = 0.5 * p.rho * (v2[n] + state.v_perp[n] * state.v_perp[n]);
  r.E_K = area_integral(c, v2);

  EmbTensor2Field Q = conforming_compose(c, q, beta);
  r.E_EL = 0.5 * p.L * area_integral(c, compd_norm2_tensor2(c, Q));
  r.E_TH = area_integral(c, thermotropic_pressure_conforming(c, p, q, beta));
  ScalarField bend(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    double d = c.mean_curv[n] - p.H0;
    bend[n] = 0.5 * p.kappa * d * d;
  }
  r.E_BE = area_integral(c, bend);
  r.E_tot = r.E_K + r.E_EL + r.E_TH + r.E_BE;

  EmbTensor2Field DmQ = conforming_material_rate(c, q, beta, qdot, betadot, state);
  EmbTensor2Field DjQ = jaumann_from_material(c, DmQ, state, Q);
  const EmbTensor2Field& DQ = (p.phi == Flavor::Material) ? DmQ : DjQ;
  ScalarField im = local_inner(DQ, DQ);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) im[n] *= 0.5 * p.M;
  r.R_IM = area_integral(c, im);

  DeformationGradients dg = deformation_gradients(c, state);
  EmbTensor2Field Se = embed_tensor2(c, dg.S);
  ScalarField nv(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat3 Ixi = Mat3::identity() - p.xi * Q.get(n);
    Mat3 S = Se.get(n);
    Mat3 T = mul(S, Ixi) + mul(Ixi, S) - p.xi * DjQ.get(n);
    nv[n] = 0.25 * p.upsilon * ddot(T, T);
  }
  r.R_NV = area_integral(c, nv);

  ScalarField divv = div_vector(c, state.v);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    divv[n] -= c.mean_curv[n] * state.v_perp[n];
  r.inext_residual = l2_norm(c, divv);
  return r;
}

AuditSummary dissipation_audit(TrajectoryRecord& record) {
  auto& s = record.samples;
  if (s.size() < 3) throw TooFewSamples("dissipation audit needs at least 3 samples");
  AuditSummary out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    double dEdt = (s[i + 1].E_tot - s[i - 1].E_tot) / (s[i + 1].t - s[i - 1].t);
    double flux = -2.0 * (s[i].R_IM + s[i].R_NV);
    double res = dEdt - flux;
    s[i].audit_residual = res;
    out.residuals.push_back(res);
    out.max_residual = std::fmax(out.max_residual, std::fabs(res));
  }
  return out;
}

LeslieCoefficients leslie_coefficients(double upsilon, double s, double xi,
                                       double with_immobility_M) {
  LeslieCoefficients r;
  const double u = upsilon, sx = s * xi;
  r.alpha[0] = u * s * s * xi * xi;
  r.alpha[1] = -u * sx * (1.0 + sx / 3.0);
  r.alpha[2] = -u * sx * (1.0 - 2.0 * sx / 3.0);
  r.alpha[3] = 2.0 * u * (1.0 + sx / 3.0) * (1.0 + sx / 3.0);
  r.alpha[4] = -u * sx * (1.0 + sx / 3.0);
  r.alpha[5] = -3.0 * u * sx;
  const double a1 = r.alpha[0], a2 = r.alpha[1], a3 = r.alpha[2], a4 = r.alpha[3],
               a5 = r.alpha[4], a6 = r.alpha[5];
  r.parodi_residual = (a2 + a3) - (a6 - a5);
  r.det_residual = (a3 - a2) * (2.0 * a4 + a5 + a6) - (a6 - a5) * (a6 - a5);
  const double M = with_immobility_M;
  r.amended_det =
      (a3 - a2 + 2.0 * M * s * s) * (2.0 * a4 + a5 + a6) - (a6 - a5) * (a6 - a5);
  r.amended_det_expected = 2.0 * M * u * s * s * (2.0 - sx / 3.0) * (2.0 - sx / 3.0);
  r.leslie_values[0] = a3 - a2;
  r.leslie_values[1] = 2.0 * a4 + a5 + a6;
  r.leslie_values[2] = a4;
  r.leslie_values[3] = a1 + a4 + a5 + a6;
  for (int i = 0; i < 4; ++i) r.leslie_ok[i] = r.leslie_values[i] >= -1e-14;
  return r;
}

namespace {

using Rng = std::mt19937_64;

Mat3 random_q_mat(Rng& rng, double amp = 1.0) {
  std::uniform_real_distribution<double> U(-amp, amp);
  Mat3 m;
  for (int i = 0; i < 9; ++i) m.a[i] = U(rng);
  return project_qtensor(m);
}

ScalarField smooth_scalar(const Grid& g, Rng& rng, int kmax) {
  ScalarField f(g);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_real_distribution<double> Ph(0.0, 2.0 * M_PI);
  for (int k1 = 0; k1 <= kmax; ++k1)
    for (int k2 = -kmax; k2 <= kmax; ++k2) {
      if (k1 == 0 && k2 < 0) continue;
      double a = U(rng) / (1.0 + k1 * k1 + k2 * k2);
      double ph = Ph(rng);
      for (int i = 0; i < g.n1; ++i) {
        double t1 = 2.0 * M_PI * k1 * i / g.n1;
        for (int j = 0; j < g.n2; ++j)
          f[g.idx(i, j)] += a * std::cos(t1 + 2.0 * M_PI * k2 * j / g.n2 + ph);
      }
    }
  return f;
}

template <int NC>
FieldBase<NC> smooth_field(const Grid& g, Rng& rng, int kmax) {
  FieldBase<NC> f(g);
  for (int c = 0; c < NC; ++c) {
    ScalarField s = smooth_scalar(g, rng, kmax);
    for (std::size_t n = 0; n < g.nodes(); ++n) f.at(c, n) = s[n];
  }
  return f;
}

TangentVectorField smooth_tvec(const Grid& g, Rng& rng, int kmax) {
  TangentVectorField f(g);
  FieldBase<2> raw = smooth_field<2>(g, rng, kmax);
  f.data = raw.data;
  return f;
}

EmbTensor2Field smooth_emb2(const Grid& g, Rng& rng, int kmax) {
  EmbTensor2Field f(g);
  FieldBase<9> raw = smooth_field<9>(g, rng, kmax);
  f.data = raw.data;
  return f;
}

EmbVectorField smooth_emb1(const Grid& g, Rng& rng, int kmax) {
  EmbVectorField f(g);
  FieldBase<3> raw = smooth_field<3>(g, rng, kmax);
  f.data = raw.data;
  return f;
}

TangentTensor2Field smooth_tt(const Grid& g, Rng& rng, int kmax) {
  TangentTensor2Field f(g);
  FieldBase<4> raw = smooth_field<4>(g, rng, kmax);
  f.data = raw.data;
  return f;
}

LemmaResult check(const std::string& name, double residual, double tol,
                  const std::string& note = {}) {
  return LemmaResult{name, true, residual, tol, residual < tol, note};
}

}  // namespace

VerifyReport verify_lemmas(unsigned long seed, int n_samples) {
  VerifyReport rep;
  Rng rng(seed);

  {
    double r = 0;
    for (int t = 0; t < n_samples; ++t) {
      Mat3 Q = random_q_mat(rng);
      Mat3 Q2 = mul(Q, Q);
      Mat3 Q4 = mul(Q2, Q2);
      double t2 = trace(Q2), t3 = ddot(Q2, Q);
      double s = std::fmax(1e-300, t2 * t2);
      r = std::fmax(r, std::fabs(trace(Q4) - 0.5 * t2 * t2) / s);
      r = std::fmax(r, std::fabs(ddot(Q4, Q2) - (0.25 * t2 * t2 * t2 + t3 * t3 / 3.0)) /
                           std::fmax(1e-300, std::fabs(t2 * t2 * t2)));
      r = std::fmax(r, std::fabs(trace(mul(Q4, Q4)) -
                                 (0.125 * t2 * t2 * t2 * t2 + (4.0 / 9.0) * t2 * t3 * t3)) /
                           std::fmax(1e-300, t2 * t2 * t2 * t2));
    }
    rep.results.push_back(check("trace-power-identities", r, 1e-12));
  }

  {
    double r = 0;
    for (int t = 0; t < n_samples; ++t) {
      Mat3 Q = random_q_mat(rng);
      Mat3 Q2 = mul(Q, Q);
      double t2 = trace(Q2), t3 = ddot(Q2, Q);
      Mat3 B = mul(Q2, Q2) - (5.0 / 6.0 * t2) * Q2 + (t2 * t2 / 9.0) * Mat3::identity();
      double lhs = ddot(B, B);
      double rhs = t2 / 54.0 * (t2 * t2 * t2 - 6.0 * t3 * t3);
      r = std::fmax(r, std::fabs(lhs - rhs) / std::fmax(1e-300, std::fabs(rhs)));
    }
    rep.results.push_back(check("biaxiality-polynomial-norm", r, 1e-12));
  }

  auto chart = build_chart(SurfaceKind::embedded_torus(2.0, 1.0), 32, 32);
  const Grid& g = chart.grid;

  {
    double r = 0;
    TangentTensor2Field tt = smooth_tt(g, rng, 3);
    EmbTensor2Field Rt = embed_tensor2(chart, tt);
    EmbTensor2Field lhs = project(chart, Rt, Subspace::QTensor);
    TangentTensor2Field piq = tt_project_q(chart, tt);
    ScalarField tr = tt_trace(chart, tt);
    for (std::size_t n = 0; n < g.nodes(); ++n) tr[n] = -tr[n] / 3.0;
    EmbTensor2Field rhs = conforming_compose(chart, piq, tr);
    for (std::size_t i = 0; i < lhs.data.size(); ++i)
      r = std::fmax(r, std::fabs(lhs.data[i] - rhs.data[i]));
    rep.results.push_back(check("qtensor-part-of-tangential-is-conforming", r, 1e-13));
  }

  {
    EmbTensor2Field R = smooth_emb2(g, rng, 3);
    EmbVectorField a = divC_adj_tensor2(chart, R);
    EmbVectorField b = divC_tensor2(chart, R);
    double r = 0;
    for (std::size_t n = 0; n < g.nodes(); ++n) {
      Vec3 corr = chart.mean_curv[n] * mul(R.get(n), chart.nu_at(n));
      r = std::fmax(r, norm(a.get(n) - b.get(n) - corr));
    }
    rep.results.push_back(check("adjoint-vs-trace-divergence", r, 1e-12));
  }

  {
    auto flat = build_chart(SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI), 64, 64);
    ScalarField f = smooth_scalar(flat.grid, rng, 4);
    EmbVectorField W = smooth_emb1(flat.grid, rng, 4);
    double lhs = l2_inner(flat, gradC_scalar(flat, f), W);
    double rhs = -l2_inner(flat, f, divC_vector(flat, W));
    double r = std::fabs(lhs - rhs) / (l2_norm(flat, f) * l2_norm(flat, W) + 1e-30);
    rep.results.push_back(check("integration-by-parts-flat", r, 1e-10));
  }

  {
    EmbTensor2Field R = smooth_emb2(g, rng, 3);
    VelocityState W(g);
    W.v = smooth_tvec(g, rng, 3);
    W.v_perp = smooth_scalar(g, rng, 3);
    DeformationGradients dg = deformation_gradients(chart, W);
    EmbVectorField We = embed_vector(chart, W.v);
    for (std::size_t n = 0; n < g.nodes(); ++n)
      We.set(n, We.get(n) + W.v_perp[n] * chart.nu_at(n));
    EmbVectorCovDField dW = compd_vector(chart, We);
    double r_sym = 0, r_skew = 0;
    for (std::size_t n = 0; n < g.nodes(); ++n) {
      Mat2 gi = chart.ginv_at(n);
      Vec3 t1 = chart.t1_at(n), t2 = chart.t2_at(n);
      Vec3 tau[2] = {gi(0, 0) * t1 + gi(0, 1) * t2, gi(1, 0) * t1 + gi(1, 1) * t2};
      Mat3 nab{};
      for (int A = 0; A < 3; ++A)
        for (int k = 0; k < 2; ++k)
          for (int B = 0; B < 3; ++B) nab(A, B) += dW.get(n, A, k) * tau[k][B];
      Mat3 Rm = R.get(n);
      Vec3 nu = chart.nu_at(n);
      Mat3 P = chart.idS_at(n);
      {
        double lhs = ddot(Rm, dg.Gcal.get(n));
        Mat3 arg = mul(Rm, P) - outer(nu, mul(P, mul(Rm, nu)));
        r_sym = std::fmax(r_sym, std::fabs(lhs - ddot(arg, nab)));
      }
      {
        double lhs = ddot(Rm, dg.Acal.get(n));
        Mat3 Inn = Mat3::identity() + outer(nu, nu);
        Mat3 arg = mul(Inn, mul(skew(Rm), P));
        r_skew = std::fmax(r_skew, std::fabs(lhs - ddot(arg, nab)));
      }
    }
    rep.results.push_back(check("weak-deformation-pairing", r_sym, 1e-6,
                                "pointwise; residual is discretization error"));
    rep.results.push_back(check("skew-deformation-pairing", r_skew, 1e-6,
                                "pointwise; residual is discretization error"));
  }

  {
    EmbTensor2Field R = smooth_emb2(g, rng, 2);
    VelocityState W(g);
    W.v = smooth_tvec(g, rng, 2);
    W.v_perp = smooth_scalar(g, rng, 2);
    EmbVectorField We = embed_vector(chart, W.v);
    for (std::size_t n = 0; n < g.nodes(); ++n)
      We.set(n, We.get(n) + W.v_perp[n] * chart.nu_at(n));
    DeformationGradients dg = deformation_gradients(chart, W);
    const double eps = 1e-5;
    auto grad_on = [&](double sgn) {
      EmbVectorField X = chart.X;
      for (std::size_t n = 0; n < g.nodes(); ++n)
        X.set(n, X.get(n) + (sgn * eps) * We.get(n));
      ChartGeometry cp = build_chart_from_positions(g, X, DerivScheme::Spectral);
      EmbTensor2CovDField d = compd_tensor2(cp, R);
      std::vector<double> flatout(27 * g.nodes());
      for (std::size_t n = 0; n < g.nodes(); ++n) {
        Mat2 gi = cp.ginv_at(n);
        Vec3 t1 = cp.t1_at(n), t2 = cp.t2_at(n);
        Vec3 tau[2] = {gi(0, 0) * t1 + gi(0, 1) * t2, gi(1, 0) * t1 + gi(1, 1) * t2};
        for (int A = 0; A < 3; ++A)
          for (int B = 0; B < 3; ++B)
            for (int C = 0; C < 3; ++C) {
              double s = 0;
              for (int k = 0; k < 2; ++k) s += d.get(n, A, B, k) * tau[k][C];
              flatout[((A * 3 + B) * 3 + C) * g.nodes() + n] = s;
            }
      }
      return flatout;
    };
    auto plus = grad_on(1.0), minus = grad_on(-1.0);
    EmbTensor2CovDField d0 = compd_tensor2(chart, R);
    double r = 0, scale = 0;
    for (std::size_t n = 0; n < g.nodes(); ++n) {
      Mat2 gi = chart.ginv_at(n);
      Vec3 t1 = chart.t1_at(n), t2 = chart.t2_at(n);
      Vec3 tau[2] = {gi(0, 0) * t1 + gi(0, 1) * t2, gi(1, 0) * t1 + gi(1, 1) * t2};
      Mat3 G = dg.Gcal.get(n);
      for (int A = 0; A < 3; ++A)
        for (int B = 0; B < 3; ++B) {
          Vec3 e{};
          for (int k = 0; k < 2; ++k)
            for (int C = 0; C < 3; ++C) e[C] += d0.get(n, A, B, k) * tau[k][C];
          for (int C = 0; C < 3; ++C) {
            std::size_t idx = ((A * 3 + B) * 3 + C) * g.nodes() + n;
            double fd = (plus[idx] - minus[idx]) / (2.0 * eps);
            double want = 0;
            for (int D = 0; D < 3; ++D) want -= e[D] * G(D, C);
            r = std::fmax(r, std::fabs(fd - want));
            scale = std::fmax(scale, std::fabs(want));
          }
        }
    }
    rep.results.push_back(check("deformation-gradient-commutator", r / std::fmax(1.0, scale),
                                1e-4, "linear-perturbation FD on the discrete chart"));
  }

  rep.results.push_back(LemmaResult{"thin-film-gradient", false, 0, 0, true,
                                    "modeling assumption; no finite-dimensional shadow"});
  rep.results.push_back(LemmaResult{"variational-rate-independence", false, 0, 0, true,
                                    "structural property of the rate family; documented"});
  return rep;
}

}  // namespace surfnema
