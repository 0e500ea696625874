#pragma once

#include "surfnema/calculus.hpp"

namespace surfnema {

/// Material velocity V = v + v_perp nu and observer velocity
/// V_o = observer_v + v_perp nu (normal parts agree for every observer).
struct VelocityState {
  TangentVectorField v;
  ScalarField v_perp;
  TangentVectorField observer_v;

  explicit VelocityState(const Grid& g) : v(g), v_perp(g), observer_v(g) {}
  VelocityState() = default;
  /// u = v - v_o, always tangential.
  TangentVectorField relative() const {
    TangentVectorField u = v;
    for (std::size_t n = 0; n < u.nodes(); ++n) {
      u.at(0, n) -= observer_v.at(0, n);
      u.at(1, n) -= observer_v.at(1, n);
    }
    return u;
  }
};

struct DeformationGradients {
  EmbTensor2Field Gcal;     // full surface deformation gradient
  TangentTensor2Field G;    // tangential part (contravariant)
  TangentTensor2Field S;    // symmetric part
  EmbTensor2Field Acal;     // skew part incl. normal block
  TangentTensor2Field A;    // tangential skew part
  TangentVectorField b;     // grad v_perp + B v = nu nabla_C V
};

DeformationGradients deformation_gradients(const ChartGeometry& c, const VelocityState& W);

// Observer-aware time derivatives. dt* arguments are the observer-frame
// partial time derivatives supplied by the caller (solver history); the
// operators never difference in time themselves.

ScalarField material_rate_scalar(const ChartGeometry& c, const ScalarField& dtf,
                                 const VelocityState& state, const ScalarField& f);

EmbTensor2Field material_rate_Q(const ChartGeometry& c, const EmbTensor2Field& dtQ,
                                const VelocityState& state, const EmbTensor2Field& Q);
EmbTensor2Field jaumann_rate_Q(const ChartGeometry& c, const EmbTensor2Field& dtQ,
                               const VelocityState& state, const EmbTensor2Field& Q);
/// D_J Q given a precomputed material rate (applies the commutator only).
EmbTensor2Field jaumann_from_material(const ChartGeometry& c, const EmbTensor2Field& DmQ,
                                      const VelocityState& state, const EmbTensor2Field& Q);

/// Tangential counterparts: qdot per the observer formula and the tangential
/// Jaumann rate Jq = qdot - A[V] q + q A[V].
TangentTensor2Field material_rate_q(const ChartGeometry& c, const TangentTensor2Field& dtq,
                                    const VelocityState& state, const TangentTensor2Field& q);
TangentTensor2Field jaumann_rate_q(const ChartGeometry& c, const TangentTensor2Field& dtq,
                                   const VelocityState& state, const TangentTensor2Field& q);
TangentTensor2Field jaumann_from_material_q(const ChartGeometry& c,
                                            const TangentTensor2Field& qdot,
                                            const VelocityState& state,
                                            const TangentTensor2Field& q);

TangentVectorField material_rate_eta(const ChartGeometry& c, const TangentVectorField& dteta,
                                     const VelocityState& state, const TangentVectorField& eta);

/// Material acceleration split (a, a_perp) = (Id_S D_m V, nu D_m V).
struct Acceleration {
  TangentVectorField a;
  ScalarField a_perp;
};
Acceleration material_acceleration(const ChartGeometry& c, const TangentVectorField& dtv,
                                   const ScalarField& dtv_perp, const VelocityState& state);

/// Material rate of a conforming state assembled from tangential data:
/// D_m Q = Q(qdot, q b - (3/2) beta b, betadot) with b = grad v_perp + B v.
EmbTensor2Field conforming_material_rate(const ChartGeometry& c, const TangentTensor2Field& q,
                                         const ScalarField& beta,
                                         const TangentTensor2Field& qdot,
                                         const ScalarField& betadot, const VelocityState& state);

}  // namespace surfnema
