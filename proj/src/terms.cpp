#include "surfnema/terms.hpp"

#include <cmath>
#include <sstream>

#include "surfnema/kernels.hpp"
#include "surfnema/parallel.hpp"

namespace surfnema {

std::string ModelParams::validate(bool strict) const {
  if (!(c > 0.0)) throw ValidationError("thermotropic coefficient c must be > 0");
  if (!(rho > 0.0)) throw ValidationError("mass density rho must be > 0");
  if (L < 0.0) throw ValidationError("elastic constant L must be >= 0");
  if (kappa < 0.0) throw ValidationError("bending stiffness kappa must be >= 0");
  if (M < 0.0) throw ValidationError("immobility coefficient M must be >= 0");
  if (upsilon < 0.0) throw ValidationError("viscosity upsilon must be >= 0");
  if (std::fabs(xi) >= 1.5) {
    std::ostringstream os;
    os << "xi = " << xi << " is outside (-3/2, 3/2): the anisotropic metric "
       << "Id - xi Q loses positive definiteness for physical Q";
    if (strict) throw ValidationError(os.str());
    return os.str();
  }
  return {};
}

namespace {

void check_flavor(const ModelParams& p, Flavor f) {
  if (p.phi != f)
    throw RateFlavorMismatch(std::string("rate flavor ") + flavor_name(f) +
                             " does not match params.phi = " + flavor_name(p.phi));
}

/// Pi_QS of a contravariant tangential 2-tensor at one node.
Mat2 node_project_q(const Mat2& t, const Mat2& g, const Mat2& gi) {
  Mat2 s = sym(t);
  double tr = ddot(g, s);
  return s - (0.5 * tr) * gi;
}

}  // namespace

// --- elastic -----------------------------------------------------------------

TermBundle elastic_general(const ChartGeometry& c, const ModelParams& p,
                           const EmbTensor2Field& Q) {
  require_same_grid(c.area_form, Q, "elastic_general");
  TermBundle out;
  out.name = "EL";
  ScalarField n2 = compd_norm2_tensor2(c, Q);
  out.energy = 0.5 * p.L * area_integral(c, n2);
  EmbTensor2Field gram = compd_gram_tensor2(c, Q);
  EmbTensor2Field Sigma(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    Sigma.set(n, (-p.L) * (gram.get(n) - (0.5 * n2[n]) * c.idS_at(n)));
  out.F = divC_tensor2(c, Sigma);
  out.Sigma = std::move(Sigma);
  EmbTensor2Field H = laplaceC_tensor2(c, Q);
  for (auto& v : H.data) v *= p.L;
  out.H = std::move(H);
  return out;
}

namespace {

/// zeta_EL = L (2 (grad q) : B + q grad H - 3 B grad beta - 3/2 beta grad H).
TangentVectorField zeta_elastic(const ChartGeometry& c, const ModelParams& p,
                                const TangentTensor2Field& q, const ScalarField& beta) {
  Tensor2CovDField dq = covd_tensor2(c, q);
  ScalarGradField dH = grad_scalar(c, c.mean_curv);
  ScalarGradField db = grad_scalar(c, beta);
  TangentVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 gi = c.ginv_at(n);
    Mat2 II = c.II_at(n);
    for (int i = 0; i < 2; ++i) {
      double t1 = 0;  // q^{ij}_{|k} II_j^k
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) t1 += dq.get(n, i, j, k) * gi(k, l) * II(j, l);
      double t2 = 0;  // q^{ij} d_j H
      for (int j = 0; j < 2; ++j) t2 += q.at(i * 2 + j, n) * dH.at(j, n);
      double t3 = 0;  // (B grad beta)^i
      for (int m = 0; m < 2; ++m)
        for (int j = 0; j < 2; ++j)
          for (int l = 0; l < 2; ++l) t3 += gi(i, m) * II(m, j) * gi(j, l) * db.at(l, n);
      double t4 = 0;  // (grad H)^i
      for (int l = 0; l < 2; ++l) t4 += gi(i, l) * dH.at(l, n);
      out.at(i, n) = p.L * (2.0 * t1 + t2 - 3.0 * t3 - 1.5 * beta[n] * t4);
    }
  }
  return out;
}

}  // namespace

TermBundle elastic_conforming(const ChartGeometry& c, const ModelParams& p,
                              const TangentTensor2Field& q, const ScalarField& beta) {
  require_same_grid(q, beta, "elastic_conforming");
  TermBundle out;
  out.name = "EL";
  TangentTensor2Field lap = laplace_tensor2(c, q);
  TangentTensor2Field h(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 gi = c.ginv_at(n);
    double H = c.mean_curv[n], K = c.gauss_curv[n];
    Mat2 Bup = mul(gi, mul(c.II_at(n), gi));
    Mat2 piB = Bup - (0.5 * H) * gi;
    Mat2 v = lap.get(n) - (H * H - 2.0 * K) * q.get(n) + (3.0 * beta[n] * H) * piB;
    h.set(n, p.L * v);
  }
  ScalarField lapb = laplace_scalar(c, beta);
  ScalarField omega(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    double H = c.mean_curv[n], K = c.gauss_curv[n];
    double Bq = ddot(c.II_at(n), q.get(n));
    omega[n] = p.L * (lapb[n] + 2.0 * H * Bq - 3.0 * beta[n] * (H * H - 2.0 * K));
  }
  Tensor2CovDField dq = covd_tensor2(c, q);
  ScalarGradField db = grad_scalar(c, beta);
  TangentTensor2Field sigma(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 g = c.g_at(n);
    Mat2 gi = c.ginv_at(n);
    double H = c.mean_curv[n], K = c.gauss_curv[n];
    Mat2 A{};  // A_{kl} = q^{ij}_{|k} q_{ij|l}
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        double s = 0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            for (int m = 0; m < 2; ++m)
              for (int o = 0; o < 2; ++o)
                s += dq.get(n, i, j, k) * g(i, m) * g(j, o) * dq.get(n, m, o, l);
        A(k, l) = s;
      }
    Mat2 Aup = mul(gi, mul(A, gi));
    Vec2 gb{gi(0, 0) * db.at(0, n) + gi(0, 1) * db.at(1, n),
            gi(1, 0) * db.at(0, n) + gi(1, 1) * db.at(1, n)};
    Mat2 bb = outer(gb, gb);
    Mat2 qlow = mul(g, mul(q.get(n), g));
    double trq2 = ddot(qlow, q.get(n));
    double qB = ddot(c.II_at(n), q.get(n));
    Mat2 Bup = mul(gi, mul(c.II_at(n), gi));
    Mat2 piB = Bup - (0.5 * H) * gi;
    Mat2 v = node_project_q(Aup, g, gi) + 1.5 * node_project_q(bb, g, gi) -
             (6.0 * K * beta[n]) * q.get(n) +
             0.5 * (2.0 * H * trq2 - 12.0 * beta[n] * qB + 9.0 * H * beta[n] * beta[n]) * piB;
    sigma.set(n, (-p.L) * v);
  }
  out.conforming.h = std::move(h);
  out.conforming.omega = std::move(omega);
  out.conforming.sigma = std::move(sigma);
  out.conforming.zeta = zeta_elastic(c, p, q, beta);
  EmbTensor2Field Q = conforming_compose(c, q, beta);
  out.energy = 0.5 * p.L * area_integral(c, compd_norm2_tensor2(c, Q));
  return out;
}

// --- thermotropic ------------------------------------------------------------

ScalarField thermotropic_pressure_general(const ChartGeometry& c, const ModelParams& p,
                                          const EmbTensor2Field& Q) {
  ScalarField t2(c.grid), t3(c.grid);
  kernels::ops().trace_powers(Q.nodes(), Q.data.data(), t2.comp(0), t3.comp(0));
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    out[n] = p.a * t2[n] + (2.0 * p.b / 3.0) * t3[n] + 0.5 * p.c * t2[n] * t2[n];
  return out;
}

ScalarField thermotropic_pressure_conforming(const ChartGeometry& c, const ModelParams& p,
                                             const TangentTensor2Field& q,
                                             const ScalarField& beta) {
  ScalarField trq2 = local_inner(c, q, q);
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    double b = beta[n], t = trq2[n];
    out[n] = (2.0 * p.a - 2.0 * p.b * b + p.c * (t + 3.0 * b * b)) * 0.5 * t +
             (12.0 * p.a + 4.0 * p.b * b + 9.0 * p.c * b * b) * b * b / 8.0;
  }
  return out;
}

TermBundle thermotropic_general(const ChartGeometry& c, const ModelParams& p,
                                const EmbTensor2Field& Q) {
  require_same_grid(c.area_form, Q, "thermotropic_general");
  TermBundle out;
  out.name = "TH";
  ScalarField pth = thermotropic_pressure_general(c, p, Q);
  out.energy = area_integral(c, pth);
  out.F = gradC_scalar(c, pth);
  EmbTensor2Field Sigma(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) Sigma.set(n, pth[n] * c.idS_at(n));
  out.Sigma = std::move(Sigma);
  EmbTensor2Field H(c.grid);
  kernels::ops().thermotropic_field(Q.nodes(), Q.data.data(), p.a, p.b, p.c, H.data.data());
  out.H = std::move(H);
  return out;
}

TermBundle thermotropic_conforming(const ChartGeometry& c, const ModelParams& p,
                                   const TangentTensor2Field& q, const ScalarField& beta) {
  require_same_grid(q, beta, "thermotropic_conforming");
  TermBundle out;
  out.name = "TH";
  ScalarField trq2 = local_inner(c, q, q);
  TangentTensor2Field h(c.grid);
  ScalarField omega(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    double b = beta[n], t = trq2[n];
    double coef = 2.0 * p.a - 2.0 * p.b * b + 3.0 * p.c * b * b + 2.0 * p.c * t;
    h.set(n, (-coef) * q.get(n));
    omega[n] = -(2.0 * p.a + p.b * b + 3.0 * p.c * b * b + 2.0 * p.c * t) * b +
               (2.0 / 3.0) * p.b * t;
  }
  out.conforming.h = std::move(h);
  out.conforming.omega = std::move(omega);
  ScalarField pth = thermotropic_pressure_conforming(c, p, q, beta);
  out.energy = area_integral(c, pth);
  TangentTensor2Field sigma(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) sigma.set(n, pth[n] * c.ginv_at(n));
  out.conforming.sigma = std::move(sigma);
  return out;
}

// --- bending -----------------------------------------------------------------

double bending_fperp_pointwise(double H, double K, double lapH, double kappa, double H0) {
  return -kappa * (lapH + (H - H0) * (0.5 * H * (H + H0) - 2.0 * K));
}

TermBundle bending(const ChartGeometry& c, const ModelParams& p) {
  TermBundle out;
  out.name = "BE";
  ScalarField lapH = laplace_scalar(c, c.mean_curv);
  ScalarField fperp(c.grid);
  ScalarField dens(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    fperp[n] =
        bending_fperp_pointwise(c.mean_curv[n], c.gauss_curv[n], lapH[n], p.kappa, p.H0);
    double d = c.mean_curv[n] - p.H0;
    dens[n] = 0.5 * p.kappa * d * d;
  }
  out.energy = area_integral(c, dens);
  EmbVectorField F(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) F.set(n, fperp[n] * c.nu_at(n));
  out.F = std::move(F);
  out.conforming.f_perp = std::move(fperp);
  ScalarGradField dH = grad_scalar(c, c.mean_curv);
  EmbTensor2Field Sigma(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 gi = c.ginv_at(n);
    Vec3 t1 = c.t1_at(n), t2 = c.t2_at(n);
    Vec3 tau0 = gi(0, 0) * t1 + gi(0, 1) * t2;
    Vec3 tau1 = gi(1, 0) * t1 + gi(1, 1) * t2;
    Vec3 gradH = dH.at(0, n) * tau0 + dH.at(1, n) * tau1;
    Mat3 P = c.idS_at(n);
    Mat3 Bq = c.shape_emb_at(n) - (0.5 * c.mean_curv[n]) * P;
    double d = c.mean_curv[n] - p.H0;
    Mat3 m = (-p.kappa) * (d * Bq + outer(c.nu_at(n), gradH)) -
             (0.5 * p.kappa * p.H0 * d) * P;
    Sigma.set(n, m);
  }
  out.Sigma = std::move(Sigma);
  return out;
}

// --- immobility ----------------------------------------------------------------

TermBundle immobility_general(const ChartGeometry& c, const ModelParams& p,
                              const EmbTensor2Field& Q, const EmbTensor2Field& rateQ,
                              Flavor flavor) {
  require_same_grid(Q, rateQ, "immobility_general");
  check_flavor(p, flavor);
  TermBundle out;
  out.name = "IM";
  EmbTensor2Field H(c.grid);
  for (std::size_t i = 0; i < H.data.size(); ++i) H.data[i] = -p.M * rateQ.data[i];
  out.H = std::move(H);
  EmbTensor2Field Sigma(c.grid);
  if (flavor == Flavor::Jaumann) {
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Mat3 q = Q.get(n), r = rateQ.get(n);
      Mat3 comm = mul(q, r) - mul(r, q);
      Mat3 Inn = Mat3::identity() + outer(c.nu_at(n), c.nu_at(n));
      Sigma.set(n, p.M * mul(Inn, mul(comm, c.idS_at(n))));
    }
  }
  out.F = divC_tensor2(c, Sigma);
  out.Sigma = std::move(Sigma);
  return out;
}

TermBundle immobility_conforming(const ChartGeometry& c, const ModelParams& p,
                                 const TangentTensor2Field& q, const ScalarField& beta,
                                 const VelocityState& state, const TangentTensor2Field& rate_q,
                                 const ScalarField& betadot, Flavor flavor) {
  check_flavor(p, flavor);
  TermBundle out;
  out.name = "IM";
  TangentTensor2Field h(c.grid);
  for (std::size_t i = 0; i < h.data.size(); ++i) h.data[i] = -p.M * rate_q.data[i];
  out.conforming.h = std::move(h);
  ScalarField omega(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) omega[n] = -p.M * betadot[n];
  out.conforming.omega = std::move(omega);

  TangentVectorField zeta(c.grid);
  if (flavor == Flavor::Material) {
    DeformationGradients dg = deformation_gradients(c, state);
    TangentVectorField qb = tt_apply(c, q, dg.b);
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      zeta.at(0, n) = -p.M * (qb.at(0, n) - 1.5 * beta[n] * dg.b.at(0, n));
      zeta.at(1, n) = -p.M * (qb.at(1, n) - 1.5 * beta[n] * dg.b.at(1, n));
    }
  }
  out.conforming.zeta = std::move(zeta);

  TangentTensor2Field sigma(c.grid);
  if (flavor == Flavor::Jaumann) {
    TangentTensor2Field qr = tt_mul(q, c, rate_q);
    TangentTensor2Field rq = tt_mul(rate_q, c, q);
    for (std::size_t n = 0; n < c.grid.nodes(); ++n)
      sigma.set(n, p.M * (qr.get(n) - rq.get(n)));
  }
  out.conforming.sigma = std::move(sigma);
  return out;
}

// --- nematic viscosity ----------------------------------------------------------

NematicViscousGeneral nematic_viscous_general(const ChartGeometry& c, const ModelParams& p,
                                              const EmbTensor2Field& Q,
                                              const EmbTensor2Field& DmQ,
                                              const EmbTensor2Field& DjQ,
                                              const DeformationGradients& dg, Flavor rows) {
  NematicViscousGeneral out{EmbTensor2Field(c.grid), EmbTensor2Field(c.grid),
                            EmbTensor2Field(c.grid), EmbTensor2Field(c.grid),
                            EmbTensor2Field(c.grid), EmbTensor2Field(c.grid),
                            EmbTensor2Field(c.grid)};
  EmbTensor2Field Se = embed_tensor2(c, dg.S);
  EmbVectorField be = embed_vector(c, dg.b);
  const double u = p.upsilon, xi = p.xi;
  parallel_for(c.grid.nodes(), [&](std::size_t nb, std::size_t ne) {
  for (std::size_t n = nb; n < ne; ++n) {
    Mat3 P = c.idS_at(n);
    Vec3 nu = c.nu_at(n);
    Mat3 S = Se.get(n);
    Mat3 q = Q.get(n);
    Mat3 s0 = (2.0 * u) * S;
    Mat3 s1, s2, h2;
    if (rows == Flavor::Jaumann) {
      Mat3 R = DjQ.get(n);
      s1 = (-u) * (mul(P, mul(R, P)) + mul(3.0 * P + 2.0 * outer(nu, nu), mul(q, S)) +
                   mul(S, mul(q, P)));
      Vec3 w = mul(P, mul(q, mul(R, nu)));
      s2 = u * (mul(q, mul(R, P)) - outer(nu, w) + mul(P, mul(q, mul(S, mul(q, P)))) +
                mul(q, mul(q, S)));
      h2 = (-0.5 * u) * (mul(q, S) + mul(S, q) - (ddot(q, S) / 3.0) * Mat3::identity());
    } else {
      Mat3 R = DmQ.get(n);
      Mat3 Gc = dg.Gcal.get(n);
      Mat3 Ac = dg.Acal.get(n);
      Mat3 nabV = S + mul(Ac, P);
      Vec3 w = mul(R, nu) - 2.0 * mul(Ac, mul(q, nu)) - mul(q, be.get(n));
      s1 = (-u) * (mul(P, mul(R, P)) + mul(P, mul(q, nabV)) + 2.0 * mul(q, S) +
                   mul(transpose(nabV), mul(q, P)));
      s2 = u * (mul(q, mul(R, P)) - outer(nu, mul(P, mul(q, w))) +
                mul(P, mul(q, mul(transpose(Gc), mul(q, P)))) + mul(q, mul(q, nabV)));
      h2 = (-0.5 * u) *
           (mul(q, Gc) + mul(transpose(Gc), q) - (ddot(q, S) / 3.0) * Mat3::identity());
    }
    out.Sigma0.set(n, s0);
    out.Sigma1.set(n, s1);
    out.Sigma2.set(n, s2);
    out.Sigma.set(n, s0 + xi * s1 + (xi * xi) * s2);
    out.H1.set(n, u * S);
    out.H2tilde.set(n, h2);
    Mat3 Ixi = Mat3::identity() - xi * q;
    Mat3 H;
    if (rows == Flavor::Jaumann) {
      H = (-u * xi) * (0.5 * xi * DjQ.get(n) - project_qtensor(mul(S, Ixi)));
    } else {
      H = (-u * xi) * (0.5 * xi * DmQ.get(n) - project_qtensor(mul(Ixi, dg.Gcal.get(n))));
    }
    out.H.set(n, H);
  }
  });
  return out;
}

NematicViscousConforming nematic_viscous_conforming(
    const ChartGeometry& c, const ModelParams& p, const TangentTensor2Field& q,
    const ScalarField& beta, const TangentTensor2Field& qdot, const ScalarField& betadot,
    const TangentTensor2Field& Jq, const VelocityState& state, Flavor rows) {
  NematicViscousConforming out{TangentTensor2Field(c.grid), TangentTensor2Field(c.grid),
                               TangentTensor2Field(c.grid), TangentTensor2Field(c.grid),
                               TangentTensor2Field(c.grid), TangentTensor2Field(c.grid),
                               TangentTensor2Field(c.grid), ScalarField(c.grid),
                               ScalarField(c.grid)};
  DeformationGradients dg = deformation_gradients(c, state);
  const double u = p.upsilon, xi = p.xi;
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 g = c.g_at(n), gi = c.ginv_at(n);
    Mat2 S = dg.S.get(n), G = dg.G.get(n);
    Mat2 qm = q.get(n);
    double b = betadot[n], be = beta[n];
    Mat2 qlow = mul(g, mul(qm, g));
    double trq2 = ddot(qlow, qm);
    double qG = ddot(qlow, G);  // q : G = q : S
    double trG = ddot(g, G);
    auto m2 = [&](const Mat2& A, const Mat2& B) { return mul(A, mul(g, B)); };
    Mat2 s0 = (2.0 * u) * S;
    Mat2 s1, s2, h2;
    if (rows == Flavor::Jaumann) {
      Mat2 R = Jq.get(n);
      s1 = (-u) * (R - (0.5 * b) * gi + 3.0 * m2(qm, S) + m2(S, qm) - (2.0 * be) * S);
      s2 = u * (m2(qm, R) - 0.5 * (be * R + b * qm) + (0.25 * be * b) * gi +
                m2(qm, m2(S, qm)) - (0.5 * be) * (3.0 * m2(qm, S) + m2(S, qm)) +
                0.5 * (trq2 + be * be) * S);
      h2 = (-0.5 * u) * (m2(qm, S) + m2(S, qm) - qG * gi - be * S);
    } else {
      Mat2 R = qdot.get(n);
      Mat2 Gt = transpose(G);
      Mat2 G2 = 2.0 * G + Gt;
      s1 = (-u) * (R - (0.5 * b) * gi + m2(qm, G2) + m2(Gt, qm) - (2.0 * be) * S);
      s2 = u * (m2(qm, R) - 0.5 * (be * R + b * qm) + (0.25 * be * b) * gi +
                m2(qm, m2(Gt, qm)) - (0.5 * be) * (m2(qm, G2) + m2(Gt, qm)) +
                (0.5 * trq2) * G + (0.5 * be * be) * S);
      h2 = (-0.5 * u) * (m2(qm, G) + m2(Gt, qm) - qG * gi - be * S);
    }
    out.sigma0.set(n, s0);
    out.sigma1.set(n, s1);
    out.sigma2.set(n, s2);
    out.sigma.set(n, s0 + xi * s1 + (xi * xi) * s2);
    out.h1.set(n, u * S);
    out.h2tilde.set(n, h2);
    Mat2 piS = node_project_q(S, g, gi);
    Mat2 h;
    if (rows == Flavor::Jaumann) {
      h = (-u * xi) * (0.5 * xi * Jq.get(n) + xi * node_project_q(m2(S, qm), g, gi) -
                       (1.0 + 0.5 * xi * be) * piS);
    } else {
      h = (-u * xi) * (0.5 * xi * qdot.get(n) + xi * node_project_q(m2(qm, G), g, gi) -
                       (1.0 + 0.5 * xi * be) * piS);
    }
    out.h.set(n, h);
    double Sq = ddot(mul(g, mul(S, g)), qm);
    out.omega2tilde[n] = -(u / 6.0) * (3.0 * b - 2.0 * qG);
    out.omega[n] =
        -u * xi * (0.5 * xi * b - (xi / 3.0) * Sq + (1.0 / 3.0) * (1.0 + 0.5 * xi * be) * trG);
  }
  return out;
}

AnisotropicMetric anisotropic_metric(const EmbTensor2Field& Q, double xi) {
  AnisotropicMetric out{EmbTensor2Field(Q.grid), ScalarField(Q.grid)};
  for (std::size_t n = 0; n < Q.nodes(); ++n) {
    Mat3 I = Mat3::identity() - xi * Q.get(n);
    out.I_xi.set(n, I);
    out.min_eig[n] = sym3_eigenvalues(sym(I))[0];
  }
  return out;
}

// --- inextensibility -------------------------------------------------------------

TermBundle inextensibility(const ChartGeometry& c, const ScalarField& p) {
  require_same_grid(c.area_form, p, "inextensibility");
  TermBundle out;
  out.name = "IC";
  EmbTensor2Field Sigma(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) Sigma.set(n, (-p[n]) * c.idS_at(n));
  out.Sigma = std::move(Sigma);
  EmbVectorField F = gradC_scalar(c, p);
  for (auto& v : F.data) v = -v;
  out.F = std::move(F);
  return out;
}

EmbVectorField jaumann_gauge_force_correction(const ChartGeometry& c, const EmbTensor2Field& Q,
                                              const EmbTensor2Field& H_alpha) {
  require_same_grid(Q, H_alpha, "jaumann_gauge_force_correction");
  EmbTensor2Field arg(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat3 q = Q.get(n), h = H_alpha.get(n);
    Mat3 comm = mul(q, h) - mul(h, q);
    Mat3 Inn = Mat3::identity() + outer(c.nu_at(n), c.nu_at(n));
    arg.set(n, mul(Inn, mul(comm, c.idS_at(n))));
  }
  return divC_tensor2(c, arg);
}

// --- constraint terms --------------------------------------------------------------

ConstraintTerm constraint_general(ConstraintTag gamma, const ChartGeometry& c,
                                  const EmbTensor2Field& Q, const VelocityState& state,
                                  const ConstraintMultiplier& lambda) {
  ConstraintTerm out;
  out.gamma = gamma;
  const std::size_t nn = c.grid.nodes();
  switch (gamma) {
    case ConstraintTag::SC: {
      if (!lambda.vec) throw ShapeMismatch("SC needs a tangential vector multiplier");
      EmbVectorField le = embed_vector(c, *lambda.vec);
      EmbTensor2Field arg(c.grid);
      EmbTensor2Field H(c.grid);
      for (std::size_t n = 0; n < nn; ++n) {
        Vec3 nu = c.nu_at(n);
        Mat3 q = Q.get(n);
        Vec3 l = le.get(n);
        double qnn = dot(nu, mul(q, nu));
        Vec3 idql = mul(c.idS_at(n), mul(q, l));
        arg.set(n, qnn * outer(nu, l) - outer(nu, idql));
        H.set(n, -0.5 * (outer(l, nu) + outer(nu, l)));
      }
      EmbVectorField Cemb(c.grid);
      for (std::size_t n = 0; n < nn; ++n)
        Cemb.set(n, mul(c.idS_at(n), mul(Q.get(n), c.nu_at(n))));
      out.F = divC_tensor2(c, arg);
      out.H = std::move(H);
      out.C_vec = restrict_vector(c, Cemb);
      return out;
    }
    case ConstraintTag::CB: {
      if (!lambda.scalar) throw ShapeMismatch("CB needs a scalar multiplier");
      EmbTensor2Field H(c.grid);
      ScalarField C(c.grid);
      for (std::size_t n = 0; n < nn; ++n) {
        Vec3 nu = c.nu_at(n);
        H.set(n,
              (-(*lambda.scalar)[n]) * (outer(nu, nu) - (1.0 / 3.0) * Mat3::identity()));
        C[n] = dot(nu, mul(Q.get(n), nu)) - lambda.beta0;
      }
      out.H = std::move(H);
      out.C_scalar = std::move(C);
      return out;
    }
    case ConstraintTag::UN: {
      if (!lambda.qtensor) throw ShapeMismatch("UN needs a Q-tensor multiplier");
      EmbTensor2Field H(c.grid);
      for (std::size_t n = 0; n < nn; ++n) {
        Mat3 q = Q.get(n), L = lambda.qtensor->get(n);
        Mat3 q2 = mul(q, q);
        Mat3 q3 = mul(q2, q);
        double t2 = trace(q2);
        Mat3 v = 6.0 * project_qtensor(mul(L, q3) + mul(q, mul(L, q2))) -
                 5.0 * t2 * project_qtensor(mul(L, q)) - (5.0 * ddot(L, q2)) * q;
        H.set(n, v);
      }
      out.H = std::move(H);
      out.C_q = biaxiality_polynomial(Q);
      return out;
    }
    case ConstraintTag::IS: {
      if (!lambda.qtensor) throw ShapeMismatch("IS needs a Q-tensor multiplier");
      out.H = *lambda.qtensor;
      out.C_q = Q;
      return out;
    }
    case ConstraintTag::NN: {
      if (!lambda.scalar) throw ShapeMismatch("NN needs a scalar multiplier");
      EmbVectorField F(c.grid);
      for (std::size_t n = 0; n < nn; ++n) F.set(n, (*lambda.scalar)[n] * c.nu_at(n));
      out.F = std::move(F);
      out.C_scalar = state.v_perp;
      return out;
    }
    case ConstraintTag::NF: {
      if (!lambda.embvec) throw ShapeMismatch("NF needs an R^3 vector multiplier");
      out.F = *lambda.embvec;
      EmbVectorField V = embed_vector(c, state.v);
      for (std::size_t n = 0; n < nn; ++n)
        V.set(n, V.get(n) + state.v_perp[n] * c.nu_at(n));
      out.C_emb = std::move(V);
      return out;
    }
  }
  throw UnknownConstraint("unknown constraint tag");
}

ConformingConstraintTerm constraint_conforming(ConstraintTag gamma, const ChartGeometry& c,
                                               const TangentTensor2Field& q,
                                               const ScalarField& beta,
                                               const VelocityState& state,
                                               const TangentTensor2Field& lambda_q,
                                               const ScalarField& lambda_scalar, double beta0) {
  ConformingConstraintTerm out{gamma,
                               TangentVectorField(c.grid),
                               ScalarField(c.grid),
                               TangentTensor2Field(c.grid),
                               ScalarField(c.grid),
                               std::nullopt,
                               std::nullopt,
                               std::nullopt};
  const std::size_t nn = c.grid.nodes();
  switch (gamma) {
    case ConstraintTag::CB: {
      ScalarField C(c.grid);
      for (std::size_t n = 0; n < nn; ++n) {
        out.omega[n] = -(2.0 / 3.0) * lambda_scalar[n];
        C[n] = beta[n] - beta0;
      }
      out.C_scalar = std::move(C);
      return out;
    }
    case ConstraintTag::UN: {
      TangentTensor2Field Cq(c.grid);
      ScalarField Cs(c.grid);
      for (std::size_t n = 0; n < nn; ++n) {
        Mat2 g = c.g_at(n), gi = c.ginv_at(n);
        Mat2 qm = q.get(n), lm = lambda_q.get(n);
        double be = beta[n], lp = lambda_scalar[n];
        Mat2 qlow = mul(g, mul(qm, g));
        double t2 = ddot(qlow, qm);
        double lq = ddot(mul(g, mul(lm, g)), qm);
        auto m2 = [&](const Mat2& A, const Mat2& B) { return mul(A, mul(g, B)); };
        Mat2 h = (-6.0 * be) * m2(qm, m2(lm, qm)) +
                 (4.0 / 3.0) * t2 * node_project_q(m2(lm, qm), g, gi) +
                 (5.0 * be * lq + lp * t2) * qm -
                 (0.25 * be) * (14.0 * t2 - 9.0 * be * be) * lm;
        out.h.set(n, h);
        out.omega[n] = (1.0 / 3.0) * t2 * (2.0 * lq - 9.0 * lp * be);
        Cq.set(n, ((2.0 * t2 - 9.0 * be * be) * be) * qm);
        Cs[n] = (2.0 * t2 - 9.0 * be * be) * t2;
      }
      out.C_q = std::move(Cq);
      out.C_scalar = std::move(Cs);
      return out;
    }
    case ConstraintTag::NN: {
      for (std::size_t n = 0; n < nn; ++n) out.f_perp[n] = lambda_scalar[n];
      out.C_scalar = state.v_perp;
      return out;
    }
    case ConstraintTag::NF: {
      out.C_vec = state.v;
      out.C_scalar = state.v_perp;
      return out;
    }
    default:
      throw UnknownConstraint("constraint has no conforming Table row (SC is eliminated)");
  }
}

ScStress sc_constraint_stress(const ChartGeometry& c, const ModelParams& p,
                              const TangentTensor2Field& q, const ScalarField& beta,
                              const VelocityState& state, Flavor flavor) {
  ScStress out{TangentVectorField(c.grid), EmbTensor2Field(c.grid), TangentVectorField(c.grid)};
  TangentVectorField zeta = zeta_elastic(c, p, q, beta);
  if (flavor == Flavor::Material && p.M > 0.0) {
    DeformationGradients dg = deformation_gradients(c, state);
    TangentVectorField qb = tt_apply(c, q, dg.b);
    for (std::size_t n = 0; n < c.grid.nodes(); ++n)
      for (int i = 0; i < 2; ++i)
        zeta.at(i, n) += -p.M * (qb.at(i, n) - 1.5 * beta[n] * dg.b.at(i, n));
  }
  TangentVectorField qz = tt_apply(c, q, zeta);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    for (int i = 0; i < 2; ++i) {
      out.lambda_sc.at(i, n) = 2.0 * zeta.at(i, n);
      out.varsigma.at(i, n) = -2.0 * (qz.at(i, n) - 1.5 * beta[n] * zeta.at(i, n));
    }
  }
  EmbVectorField ve = embed_vector(c, out.varsigma);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    out.Sigma.set(n, outer(c.nu_at(n), ve.get(n)));
  return out;
}

}  // namespace surfnema
