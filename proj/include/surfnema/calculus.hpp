#pragma once

#include "surfnema/geometry.hpp"

namespace surfnema {

// --- covariant (tangential) calculus -------------------------------------

/// d_k f (covariant components).
ScalarGradField grad_scalar(const ChartGeometry& c, const ScalarField& f);
/// w^i_{|k} = d_k w^i + Gamma^i_{km} w^m.
VectorCovDField covd_vector(const ChartGeometry& c, const TangentVectorField& w);
/// t^{ij}_{|k}.
Tensor2CovDField covd_tensor2(const ChartGeometry& c, const TangentTensor2Field& t);

/// div w = w^k_{|k}.
ScalarField div_vector(const ChartGeometry& c, const TangentVectorField& w);
/// [div t]^i = t^{ik}_{|k}.
TangentVectorField div_tensor2(const ChartGeometry& c, const TangentTensor2Field& t);

/// Laplace-Beltrami on scalars, divergence form mu^-1 d_i(mu g^{ij} d_j f).
ScalarField laplace_scalar(const ChartGeometry& c, const ScalarField& f);
/// Bochner Laplacian on tangential vectors / 2-tensors.
TangentVectorField laplace_vector(const ChartGeometry& c, const TangentVectorField& w);
TangentTensor2Field laplace_tensor2(const ChartGeometry& c, const TangentTensor2Field& t);

/// rot w = -E : grad w.
ScalarField rot_vector(const ChartGeometry& c, const TangentVectorField& w);

// --- componentwise (Cartesian proxy) calculus -----------------------------

/// d_k R^{AB} (and vector/scalar variants).
EmbTensor2CovDField compd_tensor2(const ChartGeometry& c, const EmbTensor2Field& R);
EmbVectorCovDField compd_vector(const ChartGeometry& c, const EmbVectorField& W);

/// Trace componentwise divergence: [Div_C R]^A = g^{kj} (d_j R^{AB}) (d_k X)_B.
EmbVectorField divC_tensor2(const ChartGeometry& c, const EmbTensor2Field& R);
ScalarField divC_vector(const ChartGeometry& c, const EmbVectorField& W);

/// L2-adjoint componentwise divergence div_C R = Div_C R + H R nu.
EmbVectorField divC_adj_tensor2(const ChartGeometry& c, const EmbTensor2Field& R);
ScalarField divC_adj_vector(const ChartGeometry& c, const EmbVectorField& W);

/// Grad_C f = grad f + H f nu (embedded).
EmbVectorField gradC_scalar(const ChartGeometry& c, const ScalarField& f);

/// Componentwise Laplacian Delta_C = Div_C o nabla_C (per Cartesian component).
EmbTensor2Field laplaceC_tensor2(const ChartGeometry& c, const EmbTensor2Field& R);
EmbVectorField laplaceC_vector(const ChartGeometry& c, const EmbVectorField& W);

/// |nabla_C R|^2 = g^{kl} d_k R^{AB} d_l R_{AB} pointwise.
ScalarField compd_norm2_tensor2(const ChartGeometry& c, const EmbTensor2Field& R);
/// [ (nabla_C R)^T : nabla_C R ] embedded: M^{CD} = g^{ij} g^{kl} (d_j R : d_l R) dX_i^C dX_k^D.
EmbTensor2Field compd_gram_tensor2(const ChartGeometry& c, const EmbTensor2Field& R);
/// (nabla_C R) u: advection of Cartesian proxies along tangential u.
EmbTensor2Field compd_advect(const ChartGeometry& c, const EmbTensor2Field& R,
                             const TangentVectorField& u);
/// grad f . u (covariant pairing of a scalar gradient with tangential u).
ScalarField advect_scalar(const ChartGeometry& c, const ScalarField& f,
                          const TangentVectorField& u);
/// nabla_u w (covariant directional derivative of a tangential vector).
TangentVectorField advect_vector(const ChartGeometry& c, const TangentVectorField& w,
                                 const TangentVectorField& u);
/// nabla_u t.
TangentTensor2Field advect_tensor2(const ChartGeometry& c, const TangentTensor2Field& t,
                                   const TangentVectorField& u);

// --- subspace projections --------------------------------------------------

enum class Subspace { Sym, Skew, QTensor, Tangential, TangentialQ, ConformingQ, Iso };

EmbTensor2Field project(const ChartGeometry& c, const EmbTensor2Field& R, Subspace target);

// --- embeddings and restrictions -------------------------------------------

EmbVectorField embed_vector(const ChartGeometry& c, const TangentVectorField& w);
TangentVectorField restrict_vector(const ChartGeometry& c, const EmbVectorField& W);
EmbTensor2Field embed_tensor2(const ChartGeometry& c, const TangentTensor2Field& t);
TangentTensor2Field restrict_tensor2(const ChartGeometry& c, const EmbTensor2Field& R);
/// w_perp = W . nu.
ScalarField normal_part(const ChartGeometry& c, const EmbVectorField& W);

// --- local inner products / norms -------------------------------------------

/// g_{ik} g_{jl} s^{ij} t^{kl} pointwise.
ScalarField local_inner(const ChartGeometry& c, const TangentTensor2Field& s,
                        const TangentTensor2Field& t);
ScalarField local_inner(const ChartGeometry& c, const TangentVectorField& u,
                        const TangentVectorField& v);
ScalarField local_inner(const EmbTensor2Field& A, const EmbTensor2Field& B);
ScalarField local_inner(const EmbVectorField& A, const EmbVectorField& B);

double l2_inner(const ChartGeometry& c, const ScalarField& a, const ScalarField& b);
double l2_inner(const ChartGeometry& c, const TangentVectorField& a, const TangentVectorField& b);
double l2_inner(const ChartGeometry& c, const TangentTensor2Field& a,
                const TangentTensor2Field& b);
double l2_inner(const ChartGeometry& c, const EmbVectorField& a, const EmbVectorField& b);
double l2_inner(const ChartGeometry& c, const EmbTensor2Field& a, const EmbTensor2Field& b);
double l2_norm(const ChartGeometry& c, const ScalarField& a);
double l2_norm(const ChartGeometry& c, const TangentVectorField& a);
double l2_norm(const ChartGeometry& c, const TangentTensor2Field& a);
double l2_norm(const ChartGeometry& c, const EmbVectorField& a);
double l2_norm(const ChartGeometry& c, const EmbTensor2Field& a);

// tangential 2-tensor helpers
TangentTensor2Field tt_mul(const TangentTensor2Field& a, const ChartGeometry& c,
                           const TangentTensor2Field& b);  // a^{ik} g_{km} b^{mj}
TangentVectorField tt_apply(const ChartGeometry& c, const TangentTensor2Field& t,
                            const TangentVectorField& w);  // t^{ik} g_{km} w^m
ScalarField tt_ddot(const ChartGeometry& c, const TangentTensor2Field& a,
                    const TangentTensor2Field& b);
ScalarField tt_trace(const ChartGeometry& c, const TangentTensor2Field& t);  // g_{ij} t^{ij}
/// Pi_QS: symmetric, surface-traceless part of a tangential 2-tensor.
TangentTensor2Field tt_project_q(const ChartGeometry& c, const TangentTensor2Field& t);
TangentTensor2Field tt_sym(const TangentTensor2Field& t);
TangentTensor2Field tt_identity(const ChartGeometry& c);  // g^{ij} (contravariant Id_S)

}  // namespace surfnema
