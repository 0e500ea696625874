#pragma once

#include <memory>

#include "surfnema/fields.hpp"
#include "surfnema/spectral.hpp"

namespace surfnema {

/// Closed-form chart selection: a flat periodic square or a torus of
/// revolution X(theta,phi) = ((R + r cos th) cos ph, (R + r cos th) sin ph,
/// r sin th) with chart order (theta, phi).
struct SurfaceKind {
  enum class Kind { FlatTorus, EmbeddedTorus };
  Kind kind = Kind::FlatTorus;
  double p1 = 2.0 * M_PI, p2 = 2.0 * M_PI;  // flat side lengths
  double major_radius = 2.0, minor_radius = 1.0;

  static SurfaceKind flat_torus(double p1, double p2) {
    SurfaceKind k;
    k.kind = Kind::FlatTorus;
    k.p1 = p1;
    k.p2 = p2;
    return k;
  }
  static SurfaceKind embedded_torus(double R, double r) {
    SurfaceKind k;
    k.kind = Kind::EmbeddedTorus;
    k.major_radius = R;
    k.minor_radius = r;
    k.p1 = 2.0 * M_PI;
    k.p2 = 2.0 * M_PI;
    return k;
  }
};

/// Sampled parameterization with first/second fundamental forms.
/// christoffel comp index: k*4 + (i*2+j) for Gamma^k_{ij};
/// shape_op stores covariant II_{ij} (comps 11,12,21,22).
struct ChartGeometry {
  Grid grid;
  DerivScheme scheme = DerivScheme::Spectral;
  std::shared_ptr<const DerivEngine> deriv;

  EmbVectorField X;
  EmbVectorField tangent1, tangent2;  // d1 X, d2 X
  TangentTensor2Field g;              // covariant g_{ij}
  TangentTensor2Field g_inv;          // contravariant g^{ij}
  FieldBase<8> christoffel;
  EmbVectorField normal;
  TangentTensor2Field shape_op;  // covariant II_{ij}
  ScalarField mean_curv;
  ScalarField gauss_curv;
  ScalarField area_form;  // mu = sqrt(det g); also the covariant E_{12}

  bool flat = false;

  Mat2 g_at(std::size_t n) const { return g.get(n); }
  Mat2 ginv_at(std::size_t n) const { return g_inv.get(n); }
  Mat2 II_at(std::size_t n) const { return shape_op.get(n); }
  Vec3 nu_at(std::size_t n) const { return normal.get(n); }
  Vec3 t1_at(std::size_t n) const { return tangent1.get(n); }
  Vec3 t2_at(std::size_t n) const { return tangent2.get(n); }
  double gamma(std::size_t n, int k, int i, int j) const {
    return christoffel.at(k * 4 + i * 2 + j, n);
  }
  /// Tangential identity Id_S = Id - nu (x) nu.
  Mat3 idS_at(std::size_t n) const {
    Vec3 nu = nu_at(n);
    return Mat3::identity() - outer(nu, nu);
  }
  /// Shape operator embedded in Cartesian proxies: II^{ij} dX_i (x) dX_j.
  Mat3 shape_emb_at(std::size_t n) const {
    Mat2 gi = ginv_at(n);
    Mat2 iiu = mul(gi, mul(II_at(n), gi));  // II^{ij}
    Vec3 t[2] = {t1_at(n), t2_at(n)};
    Mat3 B{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) B = B + iiu(i, j) * outer(t[i], t[j]);
    return B;
  }
};

/// Build a chart from the closed-form parameterization; all geometric fields
/// come from analytic expressions for the two stock charts.
ChartGeometry build_chart(const SurfaceKind& kind, int n1, int n2,
                          DerivScheme scheme = DerivScheme::Spectral);

/// Build a chart from explicit node positions; every geometric quantity is
/// computed with discrete derivatives. Used by the perturbation oracles.
ChartGeometry build_chart_from_positions(const Grid& grid, const EmbVectorField& X,
                                         DerivScheme scheme);

/// int_S f dS = sum f * mu * h1 * h2 (trapezoid = exact periodic quadrature).
double area_integral(const ChartGeometry& chart, const ScalarField& f);
double surface_area(const ChartGeometry& chart);

}  // namespace surfnema
