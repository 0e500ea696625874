#include "surfnema/qtensor.hpp"

#include <cmath>

#include "surfnema/kernels.hpp"

namespace surfnema {

namespace {

void check_qtensor(const EmbTensor2Field& Q) {
  double scale = std::fmax(1.0, max_abs(Q));
  for (std::size_t n = 0; n < Q.nodes(); ++n) {
    Mat3 m = Q.get(n);
    double asym = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) asym = std::fmax(asym, std::fabs(m(i, j) - m(j, i)));
    if (asym > 1e-10 * scale || std::fabs(trace(m)) > 1e-10 * scale)
      throw NotAQTensor("field violates symmetry/trace beyond 1e-10");
  }
}

}  // namespace

QDecomposition decompose(const ChartGeometry& c, const EmbTensor2Field& Q) {
  require_same_grid(c.area_form, Q, "decompose");
  check_qtensor(Q);
  QDecomposition d;
  d.q = TangentTensor2Field(c.grid);
  d.eta = TangentVectorField(c.grid);
  d.beta = ScalarField(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat3 m = Q.get(n);
    Vec3 nu = c.nu_at(n);
    d.beta[n] = dot(nu, mul(m, nu));
    // eta = Id_S Q nu, restricted to contravariant components
    Vec3 qnu = mul(m, nu);
    Vec3 eta_emb = qnu - dot(nu, qnu) * nu;
    Mat2 gi = c.ginv_at(n);
    Vec3 t1 = c.t1_at(n), t2 = c.t2_at(n);
    double cov[2] = {dot(t1, eta_emb), dot(t2, eta_emb)};
    d.eta.at(0, n) = gi(0, 0) * cov[0] + gi(0, 1) * cov[1];
    d.eta.at(1, n) = gi(1, 0) * cov[0] + gi(1, 1) * cov[1];
  }
  // q = Pi_QS(Id_S Q Id_S)
  EmbTensor2Field tq = project(c, Q, Subspace::TangentialQ);
  d.q = restrict_tensor2(c, tq);
  return d;
}

EmbTensor2Field recompose(const ChartGeometry& c, const QDecomposition& d) {
  EmbTensor2Field out = embed_tensor2(c, d.q);
  EmbVectorField eta = embed_vector(c, d.eta);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 nu = c.nu_at(n);
    Vec3 e = eta.get(n);
    Mat3 m = out.get(n) + outer(e, nu) + outer(nu, e) +
             d.beta[n] * (outer(nu, nu) - 0.5 * c.idS_at(n));
    out.set(n, m);
  }
  return out;
}

EmbTensor2Field conforming_compose(const ChartGeometry& c, const TangentTensor2Field& q,
                                   const ScalarField& beta) {
  require_same_grid(q, beta, "conforming_compose");
  EmbTensor2Field out = embed_tensor2(c, q);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 nu = c.nu_at(n);
    out.set(n, out.get(n) + beta[n] * (outer(nu, nu) - 0.5 * c.idS_at(n)));
  }
  return out;
}

EmbTensor2Field biaxiality_polynomial(const EmbTensor2Field& Q) {
  EmbTensor2Field out(Q.grid);
  kernels::ops().biaxiality_poly(Q.nodes(), Q.data.data(), out.data.data());
  return out;
}

ScalarField biaxiality_measure(const EmbTensor2Field& Q) {
  ScalarField out(Q.grid);
  kernels::ops().biaxiality_measure(Q.nodes(), Q.data.data(), out.comp(0));
  return out;
}

Mat3 biaxiality_polynomial(const Mat3& Q) {
  Mat3 Q2 = mul(Q, Q);
  double t2 = trace(Q2);
  return mul(Q2, Q2) - (5.0 / 6.0 * t2) * Q2 + (t2 * t2 / 9.0) * Mat3::identity();
}

double biaxiality_measure(const Mat3& Q) {
  Mat3 Q2 = mul(Q, Q);
  double t2 = trace(Q2);
  double t3 = ddot(Q2, Q);
  return t2 * t2 * t2 - 6.0 * t3 * t3;
}

TracePowerReport trace_power_identities(const EmbTensor2Field& Q) {
  TracePowerReport rep;
  for (std::size_t n = 0; n < Q.nodes(); ++n) {
    Mat3 m = Q.get(n);
    Mat3 m2 = mul(m, m);
    Mat3 m4 = mul(m2, m2);
    double t2 = trace(m2);
    double t3 = ddot(m2, m);
    double t4 = trace(m4);
    double t6 = ddot(m4, m2);
    double t8 = trace(mul(m4, m4));
    double s = std::fmax(1e-300, t2 * t2);
    rep.r4 = std::fmax(rep.r4, std::fabs(t4 - 0.5 * t2 * t2) / s);
    double s6 = std::fmax(1e-300, std::fabs(t2 * t2 * t2));
    rep.r6 = std::fmax(rep.r6, std::fabs(t6 - (0.25 * t2 * t2 * t2 + t3 * t3 / 3.0)) / s6);
    double s8 = std::fmax(1e-300, t2 * t2 * t2 * t2);
    rep.r8 = std::fmax(
        rep.r8, std::fabs(t8 - (0.125 * t2 * t2 * t2 * t2 + (4.0 / 9.0) * t2 * t3 * t3)) / s8);
  }
  return rep;
}

EmbTensor2Field uniaxial(const ScalarField& s, const EmbVectorField& d) {
  require_same_grid(s, d, "uniaxial");
  EmbTensor2Field out(d.grid);
  for (std::size_t n = 0; n < d.nodes(); ++n) {
    Vec3 dir = d.get(n);
    if (std::fabs(dot(dir, dir) - 1.0) > 1e-8)
      throw NonUnitDirector("director field is not unit length");
    out.set(n, s[n] * (outer(dir, dir) - (1.0 / 3.0) * Mat3::identity()));
  }
  return out;
}

std::optional<ThermotropicRoots> thermotropic_roots(double a, double b, double c) {
  double disc = b * b - 24.0 * a * c;
  if (disc < 0.0) return std::nullopt;
  ThermotropicRoots r;
  r.S_star = (std::sqrt(disc) - b) / (4.0 * c);
  r.beta0_stable = (b - std::sqrt(disc)) / (12.0 * c);
  return r;
}

bool is_uniaxial(const Mat3& Q) {
  Mat3 B = biaxiality_polynomial(Q);
  double t2 = trace(mul(Q, Q));
  double denom = std::fmax(t2, 1e-30);
  return std::sqrt(ddot(B, B)) / (denom * denom) < 1e-8;
}

}  // namespace surfnema
