#include "surfnema/kinematics.hpp"

#include "surfnema/qtensor.hpp"

namespace surfnema {

namespace {

TangentTensor2Field tt_transpose(const TangentTensor2Field& t) {
  TangentTensor2Field out(t.grid);
  for (std::size_t n = 0; n < t.nodes(); ++n) out.set(n, transpose(t.get(n)));
  return out;
}


/// II^{ik} = g^{im} II_{ml} g^{lk} per node.
Mat2 shape_up(const ChartGeometry& c, std::size_t n) {
  Mat2 gi = c.ginv_at(n);
  return mul(gi, mul(c.II_at(n), gi));
}

/// G[W] = grad w - w_perp B for a velocity split (w, w_perp), contravariant.
TangentTensor2Field tangential_defgrad(const ChartGeometry& c, const TangentVectorField& w,
                                       const ScalarField& w_perp) {
  VectorCovDField d = covd_vector(c, w);
  TangentTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 gi = c.ginv_at(n);
    Mat2 G;
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        double v = 0;
        for (int l = 0; l < 2; ++l) v += gi(k, l) * d.at(i * 2 + l, n);
        G(i, k) = v;
      }
    out.set(n, G - w_perp[n] * shape_up(c, n));
  }
  return out;
}

TangentVectorField bvec(const ChartGeometry& c, const TangentVectorField& v,
                        const ScalarField& v_perp) {
  ScalarGradField dp = grad_scalar(c, v_perp);
  TangentVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 gi = c.ginv_at(n);
    Mat2 ii = c.II_at(n);
    for (int i = 0; i < 2; ++i) {
      double grad = gi(i, 0) * dp.at(0, n) + gi(i, 1) * dp.at(1, n);
      double bv = 0;
      for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j) bv += gi(i, k) * ii(k, j) * v.at(j, n);
      out.at(i, n) = grad + bv;
    }
  }
  return out;
}

}  // namespace

DeformationGradients deformation_gradients(const ChartGeometry& c, const VelocityState& W) {
  require_same_grid(c.area_form, W.v, "deformation_gradients");
  DeformationGradients d;
  d.G = tangential_defgrad(c, W.v, W.v_perp);
  d.b = bvec(c, W.v, W.v_perp);
  d.S = TangentTensor2Field(c.grid);
  d.A = TangentTensor2Field(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 G = d.G.get(n);
    d.S.set(n, 0.5 * (G + transpose(G)));
    d.A.set(n, 0.5 * (G - transpose(G)));
  }
  EmbTensor2Field Gt = embed_tensor2(c, d.G);
  EmbTensor2Field At = embed_tensor2(c, d.A);
  EmbVectorField be = embed_vector(c, d.b);
  d.Gcal = EmbTensor2Field(c.grid);
  d.Acal = EmbTensor2Field(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 nu = c.nu_at(n);
    Vec3 b = be.get(n);
    Mat3 nb = outer(nu, b) - outer(b, nu);
    d.Gcal.set(n, Gt.get(n) + nb);
    d.Acal.set(n, At.get(n) + nb);
  }
  return d;
}

ScalarField material_rate_scalar(const ChartGeometry& c, const ScalarField& dtf,
                                 const VelocityState& state, const ScalarField& f) {
  TangentVectorField u = state.relative();
  ScalarField adv = advect_scalar(c, f, u);
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) out[n] = dtf[n] + adv[n];
  return out;
}

EmbTensor2Field material_rate_Q(const ChartGeometry& c, const EmbTensor2Field& dtQ,
                                const VelocityState& state, const EmbTensor2Field& Q) {
  require_same_grid(dtQ, Q, "material_rate_Q");
  TangentVectorField u = state.relative();
  EmbTensor2Field adv = compd_advect(c, Q, u);
  EmbTensor2Field out(c.grid);
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] = dtQ.data[i] + adv.data[i];
  return out;
}

EmbTensor2Field jaumann_from_material(const ChartGeometry& c, const EmbTensor2Field& DmQ,
                                      const VelocityState& state, const EmbTensor2Field& Q) {
  DeformationGradients d = deformation_gradients(c, state);
  EmbTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat3 A = d.Acal.get(n);
    Mat3 q = Q.get(n);
    out.set(n, DmQ.get(n) - mul(A, q) + mul(q, A));
  }
  return out;
}

EmbTensor2Field jaumann_rate_Q(const ChartGeometry& c, const EmbTensor2Field& dtQ,
                               const VelocityState& state, const EmbTensor2Field& Q) {
  return jaumann_from_material(c, material_rate_Q(c, dtQ, state, Q), state, Q);
}

TangentTensor2Field material_rate_q(const ChartGeometry& c, const TangentTensor2Field& dtq,
                                    const VelocityState& state, const TangentTensor2Field& q) {
  require_same_grid(dtq, q, "material_rate_q");
  TangentVectorField u = state.relative();
  TangentTensor2Field adv = advect_tensor2(c, q, u);
  // G[V_o] = grad v_o - v_perp B
  TangentTensor2Field Go = tangential_defgrad(c, state.observer_v, state.v_perp);
  TangentTensor2Field Goq = tt_mul(Go, c, q);
  TangentTensor2Field qGoT = tt_mul(q, c, tt_transpose(Go));
  TangentTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    out.set(n, dtq.get(n) + adv.get(n) + Goq.get(n) + qGoT.get(n));
  return out;
}

TangentTensor2Field jaumann_from_material_q(const ChartGeometry& c,
                                            const TangentTensor2Field& qdot,
                                            const VelocityState& state,
                                            const TangentTensor2Field& q) {
  DeformationGradients d = deformation_gradients(c, state);
  TangentTensor2Field Aq = tt_mul(d.A, c, q);
  TangentTensor2Field qA = tt_mul(q, c, d.A);
  TangentTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    out.set(n, qdot.get(n) - Aq.get(n) + qA.get(n));
  return out;
}

TangentTensor2Field jaumann_rate_q(const ChartGeometry& c, const TangentTensor2Field& dtq,
                                   const VelocityState& state, const TangentTensor2Field& q) {
  return jaumann_from_material_q(c, material_rate_q(c, dtq, state, q), state, q);
}

TangentVectorField material_rate_eta(const ChartGeometry& c, const TangentVectorField& dteta,
                                     const VelocityState& state, const TangentVectorField& eta) {
  TangentVectorField u = state.relative();
  TangentVectorField adv = advect_vector(c, eta, u);
  TangentVectorField conv = advect_vector(c, state.observer_v, eta);  // nabla_eta v_o
  TangentVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 iu = shape_up(c, n);
    Mat2 g = c.g_at(n);
    Vec2 Beta = mul(iu, mul(g, eta.get(n)));  // B eta, contravariant
    out.set(n, dteta.get(n) + adv.get(n) + conv.get(n) - state.v_perp[n] * Beta);
  }
  return out;
}

Acceleration material_acceleration(const ChartGeometry& c, const TangentVectorField& dtv,
                                   const ScalarField& dtv_perp, const VelocityState& state) {
  TangentVectorField u = state.relative();
  TangentVectorField adv_u = advect_vector(c, state.v, u);        // nabla_u v
  TangentVectorField adv_vo = advect_vector(c, state.observer_v, state.v);  // nabla_v v_o
  ScalarGradField dp = grad_scalar(c, state.v_perp);
  Acceleration acc;
  acc.a = TangentVectorField(c.grid);
  acc.a_perp = ScalarField(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 gi = c.ginv_at(n);
    Mat2 ii = c.II_at(n);
    Mat2 g = c.g_at(n);
    Vec2 v = state.v.get(n);
    Vec2 gradp{gi(0, 0) * dp.at(0, n) + gi(0, 1) * dp.at(1, n),
               gi(1, 0) * dp.at(0, n) + gi(1, 1) * dp.at(1, n)};
    Mat2 iu = mul(gi, ii);
    Vec2 Bv = mul(mul(gi, ii), mul(g, Vec2{v[0], v[1]}));  // (B v)^i = g^{ik} II_{kj} v^j
    (void)iu;
    Vec2 a = dtv.get(n) + adv_u.get(n) + adv_vo.get(n) -
             state.v_perp[n] * (gradp + 2.0 * Bv);
    acc.a.set(n, a);
    double adv2 = (2.0 * v[0] - state.observer_v.at(0, n)) * dp.at(0, n) +
                  (2.0 * v[1] - state.observer_v.at(1, n)) * dp.at(1, n);
    double iivv = ii(0, 0) * v[0] * v[0] + 2.0 * ii(0, 1) * v[0] * v[1] + ii(1, 1) * v[1] * v[1];
    acc.a_perp[n] = dtv_perp[n] + adv2 + iivv;
  }
  return acc;
}

EmbTensor2Field conforming_material_rate(const ChartGeometry& c, const TangentTensor2Field& q,
                                         const ScalarField& beta,
                                         const TangentTensor2Field& qdot,
                                         const ScalarField& betadot, const VelocityState& state) {
  TangentVectorField b = bvec(c, state.v, state.v_perp);
  // eta-part = q b - (3/2) beta b
  TangentVectorField qb = tt_apply(c, q, b);
  QDecomposition d;
  d.q = qdot;
  d.beta = betadot;
  d.eta = TangentVectorField(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    d.eta.at(0, n) = qb.at(0, n) - 1.5 * beta[n] * b.at(0, n);
    d.eta.at(1, n) = qb.at(1, n) - 1.5 * beta[n] * b.at(1, n);
  }
  return recompose(c, d);
}

}  // namespace surfnema
