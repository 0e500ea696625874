#include "surfnema/calculus.hpp"

#include <cmath>

#include "surfnema/kernels.hpp"
#include "surfnema/parallel.hpp"

namespace surfnema {

namespace {

struct CovD {
  // raw partials d_k of all components of a field
  template <int NC>
  static void partials(const ChartGeometry& c, const FieldBase<NC>& f, FieldBase<NC>& d1,
                       FieldBase<NC>& d2) {
    d1 = FieldBase<NC>(f.grid);
    d2 = FieldBase<NC>(f.grid);
    d1_all(*c.deriv, f, d1);
    d2_all(*c.deriv, f, d2);
  }
};

}  // namespace

ScalarGradField grad_scalar(const ChartGeometry& c, const ScalarField& f) {
  require_same_grid(c.area_form, f, "grad_scalar");
  ScalarGradField out(c.grid);
  c.deriv->d1(f.comp(0), out.comp(0));
  c.deriv->d2(f.comp(0), out.comp(1));
  return out;
}

VectorCovDField covd_vector(const ChartGeometry& c, const TangentVectorField& w) {
  require_same_grid(c.area_form, w, "covd_vector");
  FieldBase<2> dw1, dw2;
  CovD::partials(c, w, dw1, dw2);
  VectorCovDField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    double d[2][2] = {{dw1.at(0, n), dw2.at(0, n)}, {dw1.at(1, n), dw2.at(1, n)}};  // d[i][k]
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 2; ++k) {
        double v = d[i][k];
        for (int m = 0; m < 2; ++m) v += c.gamma(n, i, k, m) * w.at(m, n);
        out.at(i * 2 + k, n) = v;
      }
  }
  return out;
}

Tensor2CovDField covd_tensor2(const ChartGeometry& c, const TangentTensor2Field& t) {
  require_same_grid(c.area_form, t, "covd_tensor2");
  FieldBase<4> dt1, dt2;
  CovD::partials(c, t, dt1, dt2);
  Tensor2CovDField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          double v = (k == 0) ? dt1.at(i * 2 + j, n) : dt2.at(i * 2 + j, n);
          for (int m = 0; m < 2; ++m)
            v += c.gamma(n, i, k, m) * t.at(m * 2 + j, n) + c.gamma(n, j, k, m) * t.at(i * 2 + m, n);
          out.at((i * 2 + j) * 2 + k, n) = v;
        }
  }
  return out;
}

ScalarField div_vector(const ChartGeometry& c, const TangentVectorField& w) {
  VectorCovDField d = covd_vector(c, w);
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) out[n] = d.at(0, n) + d.at(3, n);
  return out;
}

TangentVectorField div_tensor2(const ChartGeometry& c, const TangentTensor2Field& t) {
  Tensor2CovDField d = covd_tensor2(c, t);
  TangentVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    for (int i = 0; i < 2; ++i)
      out.at(i, n) = d.get(n, i, 0, 0) + d.get(n, i, 1, 1);
  return out;
}

ScalarField laplace_scalar(const ChartGeometry& c, const ScalarField& f) {
  require_same_grid(c.area_form, f, "laplace_scalar");
  ScalarGradField df = grad_scalar(c, f);
  ScalarField f1(c.grid), f2(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 gi = c.ginv_at(n);
    double mu = c.area_form[n];
    f1[n] = mu * (gi(0, 0) * df.at(0, n) + gi(0, 1) * df.at(1, n));
    f2[n] = mu * (gi(1, 0) * df.at(0, n) + gi(1, 1) * df.at(1, n));
  }
  ScalarField t1(c.grid), t2(c.grid), out(c.grid);
  c.deriv->d1(f1.comp(0), t1.comp(0));
  c.deriv->d2(f2.comp(0), t2.comp(0));
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    out[n] = (t1[n] + t2[n]) / c.area_form[n];
  return out;
}

TangentVectorField laplace_vector(const ChartGeometry& c, const TangentVectorField& w) {
  VectorCovDField T = covd_vector(c, w);  // T^i_k
  FieldBase<4> dT1, dT2;
  CovD::partials(c, T, dT1, dT2);
  TangentVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 gi = c.ginv_at(n);
    for (int i = 0; i < 2; ++i) {
      double acc = 0;
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          double d = (l == 0) ? dT1.at(i * 2 + k, n) : dT2.at(i * 2 + k, n);
          for (int m = 0; m < 2; ++m)
            d += c.gamma(n, i, l, m) * T.at(m * 2 + k, n) -
                 c.gamma(n, m, l, k) * T.at(i * 2 + m, n);
          acc += gi(k, l) * d;
        }
      out.at(i, n) = acc;
    }
  }
  return out;
}

TangentTensor2Field laplace_tensor2(const ChartGeometry& c, const TangentTensor2Field& t) {
  Tensor2CovDField T = covd_tensor2(c, t);  // T^{ij}_k
  FieldBase<8> dT1, dT2;
  CovD::partials(c, T, dT1, dT2);
  TangentTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 gi = c.ginv_at(n);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        double acc = 0;
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            int ci = (i * 2 + j) * 2 + k;
            double d = (l == 0) ? dT1.at(ci, n) : dT2.at(ci, n);
            for (int m = 0; m < 2; ++m)
              d += c.gamma(n, i, l, m) * T.at((m * 2 + j) * 2 + k, n) +
                   c.gamma(n, j, l, m) * T.at((i * 2 + m) * 2 + k, n) -
                   c.gamma(n, m, l, k) * T.at((i * 2 + j) * 2 + m, n);
            acc += gi(k, l) * d;
          }
        out.at(i * 2 + j, n) = acc;
      }
  }
  return out;
}

ScalarField rot_vector(const ChartGeometry& c, const TangentVectorField& w) {
  VectorCovDField d = covd_vector(c, w);
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 g = c.g_at(n);
    double Eup = 1.0 / c.area_form[n];  // E^{12}
    // rot w = -E^{kl} g_{km} w^m_{|l}
    double cov10 = g(1, 0) * d.at(0, n) + g(1, 1) * d.at(2, n);  // (grad w)_{1 k=1}... see below
    double cov01 = g(0, 0) * d.at(1, n) + g(0, 1) * d.at(3, n);
    // (grad w)_{ik} = g_{im} w^m_{|k}; E^{12}(grad w)_{12} + E^{21}(grad w)_{21}
    out[n] = -Eup * (cov01 - cov10);
  }
  return out;
}

EmbTensor2CovDField compd_tensor2(const ChartGeometry& c, const EmbTensor2Field& R) {
  require_same_grid(c.area_form, R, "compd_tensor2");
  EmbTensor2CovDField out(c.grid);
  ScalarField tmp(c.grid);
  for (int comp = 0; comp < 9; ++comp) {
    c.deriv->d1(R.comp(comp), tmp.comp(0));
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) out.at(comp * 2 + 0, n) = tmp[n];
    c.deriv->d2(R.comp(comp), tmp.comp(0));
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) out.at(comp * 2 + 1, n) = tmp[n];
  }
  return out;
}

EmbVectorCovDField compd_vector(const ChartGeometry& c, const EmbVectorField& W) {
  require_same_grid(c.area_form, W, "compd_vector");
  EmbVectorCovDField out(c.grid);
  ScalarField tmp(c.grid);
  for (int comp = 0; comp < 3; ++comp) {
    c.deriv->d1(W.comp(comp), tmp.comp(0));
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) out.at(comp * 2 + 0, n) = tmp[n];
    c.deriv->d2(W.comp(comp), tmp.comp(0));
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) out.at(comp * 2 + 1, n) = tmp[n];
  }
  return out;
}

namespace {

/// Contravariant-raised tangents tau^{kA} = g^{kj} (d_j X)^A per node.
inline void raised_tangents(const ChartGeometry& c, std::size_t n, Vec3 tau[2]) {
  Mat2 gi = c.ginv_at(n);
  Vec3 t1 = c.t1_at(n), t2 = c.t2_at(n);
  tau[0] = gi(0, 0) * t1 + gi(0, 1) * t2;
  tau[1] = gi(1, 0) * t1 + gi(1, 1) * t2;
}

}  // namespace

EmbVectorField divC_tensor2(const ChartGeometry& c, const EmbTensor2Field& R) {
  EmbTensor2CovDField d = compd_tensor2(c, R);
  EmbVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 tau[2];
    raised_tangents(c, n, tau);
    for (int A = 0; A < 3; ++A) {
      double acc = 0;
      for (int B = 0; B < 3; ++B)
        for (int k = 0; k < 2; ++k) acc += d.get(n, A, B, k) * tau[k][B];
      out.at(A, n) = acc;
    }
  }
  return out;
}

ScalarField divC_vector(const ChartGeometry& c, const EmbVectorField& W) {
  EmbVectorCovDField d = compd_vector(c, W);
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 tau[2];
    raised_tangents(c, n, tau);
    double acc = 0;
    for (int A = 0; A < 3; ++A)
      for (int k = 0; k < 2; ++k) acc += d.get(n, A, k) * tau[k][A];
    out[n] = acc;
  }
  return out;
}

EmbVectorField divC_adj_tensor2(const ChartGeometry& c, const EmbTensor2Field& R) {
  EmbVectorField out = divC_tensor2(c, R);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 rnu = mul(R.get(n), c.nu_at(n));
    out.set(n, out.get(n) + c.mean_curv[n] * rnu);
  }
  return out;
}

ScalarField divC_adj_vector(const ChartGeometry& c, const EmbVectorField& W) {
  ScalarField out = divC_vector(c, W);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    out[n] += c.mean_curv[n] * dot(W.get(n), c.nu_at(n));
  return out;
}

EmbVectorField gradC_scalar(const ChartGeometry& c, const ScalarField& f) {
  ScalarGradField df = grad_scalar(c, f);
  EmbVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 tau[2];
    raised_tangents(c, n, tau);
    Vec3 v = df.at(0, n) * tau[0] + df.at(1, n) * tau[1] +
             (c.mean_curv[n] * f[n]) * c.nu_at(n);
    out.set(n, v);
  }
  return out;
}

EmbTensor2Field laplaceC_tensor2(const ChartGeometry& c, const EmbTensor2Field& R) {
  EmbTensor2CovDField d = compd_tensor2(c, R);
  EmbTensor2Field out(c.grid);
  EmbVectorField e(c.grid);
  for (int A = 0; A < 3; ++A) {
    for (int B = 0; B < 3; ++B) {
      for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
        Vec3 tau[2];
        raised_tangents(c, n, tau);
        Vec3 v = d.get(n, A, B, 0) * tau[0] + d.get(n, A, B, 1) * tau[1];
        e.set(n, v);
      }
      ScalarField lap = divC_vector(c, e);
      for (std::size_t n = 0; n < c.grid.nodes(); ++n) out.at(A * 3 + B, n) = lap[n];
    }
  }
  return out;
}

EmbVectorField laplaceC_vector(const ChartGeometry& c, const EmbVectorField& W) {
  EmbVectorCovDField d = compd_vector(c, W);
  EmbVectorField out(c.grid), e(c.grid);
  for (int A = 0; A < 3; ++A) {
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Vec3 tau[2];
      raised_tangents(c, n, tau);
      e.set(n, d.get(n, A, 0) * tau[0] + d.get(n, A, 1) * tau[1]);
    }
    ScalarField lap = divC_vector(c, e);
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) out.at(A, n) = lap[n];
  }
  return out;
}

ScalarField compd_norm2_tensor2(const ChartGeometry& c, const EmbTensor2Field& R) {
  EmbTensor2CovDField d = compd_tensor2(c, R);
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 gi = c.ginv_at(n);
    double s[2][2] = {{0, 0}, {0, 0}};
    for (int comp = 0; comp < 9; ++comp)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          s[k][l] += d.at(comp * 2 + k, n) * d.at(comp * 2 + l, n);
    double acc = 0;
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) acc += gi(k, l) * s[k][l];
    out[n] = acc;
  }
  return out;
}

EmbTensor2Field compd_gram_tensor2(const ChartGeometry& c, const EmbTensor2Field& R) {
  EmbTensor2CovDField d = compd_tensor2(c, R);
  EmbTensor2Field out(c.grid);
  parallel_for(c.grid.nodes(), [&](std::size_t nb, std::size_t ne) {
  for (std::size_t n = nb; n < ne; ++n) {
    double s[2][2] = {{0, 0}, {0, 0}};  // s_{jl} = d_j R : d_l R
    for (int comp = 0; comp < 9; ++comp)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          s[k][l] += d.at(comp * 2 + k, n) * d.at(comp * 2 + l, n);
    Vec3 tau[2];
    raised_tangents(c, n, tau);
    Mat3 m{};
    for (int j = 0; j < 2; ++j)
      for (int l = 0; l < 2; ++l) m = m + s[j][l] * outer(tau[j], tau[l]);
    out.set(n, m);
  }
  });
  return out;
}

EmbTensor2Field compd_advect(const ChartGeometry& c, const EmbTensor2Field& R,
                             const TangentVectorField& u) {
  require_same_grid(R, u, "compd_advect");
  EmbTensor2CovDField d = compd_tensor2(c, R);
  EmbTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    for (int comp = 0; comp < 9; ++comp)
      out.at(comp, n) = u.at(0, n) * d.at(comp * 2 + 0, n) + u.at(1, n) * d.at(comp * 2 + 1, n);
  return out;
}

ScalarField advect_scalar(const ChartGeometry& c, const ScalarField& f,
                          const TangentVectorField& u) {
  ScalarGradField df = grad_scalar(c, f);
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    out[n] = u.at(0, n) * df.at(0, n) + u.at(1, n) * df.at(1, n);
  return out;
}

TangentVectorField advect_vector(const ChartGeometry& c, const TangentVectorField& w,
                                 const TangentVectorField& u) {
  VectorCovDField d = covd_vector(c, w);
  TangentVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    for (int i = 0; i < 2; ++i)
      out.at(i, n) = u.at(0, n) * d.at(i * 2 + 0, n) + u.at(1, n) * d.at(i * 2 + 1, n);
  return out;
}

TangentTensor2Field advect_tensor2(const ChartGeometry& c, const TangentTensor2Field& t,
                                   const TangentVectorField& u) {
  Tensor2CovDField d = covd_tensor2(c, t);
  TangentTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    for (int comp = 0; comp < 4; ++comp)
      out.at(comp, n) = u.at(0, n) * d.at(comp * 2 + 0, n) + u.at(1, n) * d.at(comp * 2 + 1, n);
  return out;
}

EmbTensor2Field project(const ChartGeometry& c, const EmbTensor2Field& R, Subspace target) {
  require_same_grid(c.area_form, R, "project");
  EmbTensor2Field out(c.grid);
  const std::size_t nn = c.grid.nodes();
  switch (target) {
    case Subspace::Sym:
      for (std::size_t n = 0; n < nn; ++n) out.set(n, sym(R.get(n)));
      return out;
    case Subspace::Skew:
      for (std::size_t n = 0; n < nn; ++n) out.set(n, skew(R.get(n)));
      return out;
    case Subspace::QTensor:
      kernels::ops().project_qtensor(nn, R.data.data(), out.data.data());
      return out;
    case Subspace::Tangential:
      for (std::size_t n = 0; n < nn; ++n) {
        Mat3 P = c.idS_at(n);
        out.set(n, mul(P, mul(R.get(n), P)));
      }
      return out;
    case Subspace::TangentialQ:
      for (std::size_t n = 0; n < nn; ++n) {
        Mat3 P = c.idS_at(n);
        Mat3 t = mul(P, mul(sym(R.get(n)), P));
        double trs = trace(t);
        out.set(n, t - (0.5 * trs) * P);
      }
      return out;
    case Subspace::ConformingQ:
      for (std::size_t n = 0; n < nn; ++n) {
        Mat3 P = c.idS_at(n);
        Vec3 nu = c.nu_at(n);
        Mat3 S = sym(R.get(n));
        Mat3 t = mul(P, mul(S, P));
        double trs = trace(t);
        Mat3 qpart = t - (0.5 * trs) * P;
        Mat3 bdir = outer(nu, nu) - 0.5 * P;
        double beta = ddot(S, bdir) * (2.0 / 3.0);
        out.set(n, qpart + beta * bdir);
      }
      return out;
    case Subspace::Iso:
      for (std::size_t n = 0; n < nn; ++n) {
        double t = trace(R.get(n)) / 3.0;
        out.set(n, t * Mat3::identity());
      }
      return out;
  }
  throw UnknownSubspace("unknown projection target");
}

EmbVectorField embed_vector(const ChartGeometry& c, const TangentVectorField& w) {
  require_same_grid(c.area_form, w, "embed_vector");
  EmbVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n)
    out.set(n, w.at(0, n) * c.t1_at(n) + w.at(1, n) * c.t2_at(n));
  return out;
}

TangentVectorField restrict_vector(const ChartGeometry& c, const EmbVectorField& W) {
  require_same_grid(c.area_form, W, "restrict_vector");
  TangentVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 tau[2];
    raised_tangents(c, n, tau);
    out.at(0, n) = dot(tau[0], W.get(n));
    out.at(1, n) = dot(tau[1], W.get(n));
  }
  return out;
}

EmbTensor2Field embed_tensor2(const ChartGeometry& c, const TangentTensor2Field& t) {
  require_same_grid(c.area_form, t, "embed_tensor2");
  EmbTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 tv[2] = {c.t1_at(n), c.t2_at(n)};
    Mat3 m{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m = m + t.at(i * 2 + j, n) * outer(tv[i], tv[j]);
    out.set(n, m);
  }
  return out;
}

TangentTensor2Field restrict_tensor2(const ChartGeometry& c, const EmbTensor2Field& R) {
  require_same_grid(c.area_form, R, "restrict_tensor2");
  TangentTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 tau[2];
    raised_tangents(c, n, tau);
    Mat3 m = R.get(n);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.at(i * 2 + j, n) = dot(tau[i], mul(m, tau[j]));
  }
  return out;
}

ScalarField normal_part(const ChartGeometry& c, const EmbVectorField& W) {
  require_same_grid(c.area_form, W, "normal_part");
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) out[n] = dot(W.get(n), c.nu_at(n));
  return out;
}

ScalarField local_inner(const ChartGeometry& c, const TangentTensor2Field& s,
                        const TangentTensor2Field& t) {
  require_same_grid(s, t, "local_inner(tt)");
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 g = c.g_at(n);
    Mat2 low = mul(g, mul(s.get(n), g));  // s_{kl}
    out[n] = ddot(low, t.get(n));
  }
  return out;
}

ScalarField local_inner(const ChartGeometry& c, const TangentVectorField& u,
                        const TangentVectorField& v) {
  require_same_grid(u, v, "local_inner(tv)");
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 g = c.g_at(n);
    Vec2 a = u.get(n), b = v.get(n);
    out[n] = g(0, 0) * a[0] * b[0] + g(0, 1) * (a[0] * b[1] + a[1] * b[0]) + g(1, 1) * a[1] * b[1];
  }
  return out;
}

ScalarField local_inner(const EmbTensor2Field& A, const EmbTensor2Field& B) {
  require_same_grid(A, B, "local_inner(emb2)");
  ScalarField out(A.grid);
  kernels::ops().mat3_ddot(A.nodes(), A.data.data(), B.data.data(), out.comp(0));
  return out;
}

ScalarField local_inner(const EmbVectorField& A, const EmbVectorField& B) {
  require_same_grid(A, B, "local_inner(emb1)");
  ScalarField out(A.grid);
  for (std::size_t n = 0; n < A.nodes(); ++n) out[n] = dot(A.get(n), B.get(n));
  return out;
}

double l2_inner(const ChartGeometry& c, const ScalarField& a, const ScalarField& b) {
  ScalarField p(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) p[n] = a[n] * b[n];
  return area_integral(c, p);
}

double l2_inner(const ChartGeometry& c, const TangentVectorField& a,
                const TangentVectorField& b) {
  return area_integral(c, local_inner(c, a, b));
}
double l2_inner(const ChartGeometry& c, const TangentTensor2Field& a,
                const TangentTensor2Field& b) {
  return area_integral(c, local_inner(c, a, b));
}
double l2_inner(const ChartGeometry& c, const EmbVectorField& a, const EmbVectorField& b) {
  return area_integral(c, local_inner(a, b));
}
double l2_inner(const ChartGeometry& c, const EmbTensor2Field& a, const EmbTensor2Field& b) {
  return area_integral(c, local_inner(a, b));
}

double l2_norm(const ChartGeometry& c, const ScalarField& a) {
  return std::sqrt(l2_inner(c, a, a));
}
double l2_norm(const ChartGeometry& c, const TangentVectorField& a) {
  return std::sqrt(l2_inner(c, a, a));
}
double l2_norm(const ChartGeometry& c, const TangentTensor2Field& a) {
  return std::sqrt(l2_inner(c, a, a));
}
double l2_norm(const ChartGeometry& c, const EmbVectorField& a) {
  return std::sqrt(l2_inner(c, a, a));
}
double l2_norm(const ChartGeometry& c, const EmbTensor2Field& a) {
  return std::sqrt(l2_inner(c, a, a));
}

TangentTensor2Field tt_mul(const TangentTensor2Field& a, const ChartGeometry& c,
                           const TangentTensor2Field& b) {
  TangentTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 g = c.g_at(n);
    out.set(n, mul(a.get(n), mul(g, b.get(n))));
  }
  return out;
}

TangentVectorField tt_apply(const ChartGeometry& c, const TangentTensor2Field& t,
                            const TangentVectorField& w) {
  TangentVectorField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 g = c.g_at(n);
    out.set(n, mul(t.get(n), mul(g, w.get(n))));
  }
  return out;
}

ScalarField tt_ddot(const ChartGeometry& c, const TangentTensor2Field& a,
                    const TangentTensor2Field& b) {
  return local_inner(c, a, b);
}

ScalarField tt_trace(const ChartGeometry& c, const TangentTensor2Field& t) {
  ScalarField out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) out[n] = ddot(c.g_at(n), t.get(n));
  return out;
}

TangentTensor2Field tt_sym(const TangentTensor2Field& t) {
  TangentTensor2Field out(t.grid);
  for (std::size_t n = 0; n < t.nodes(); ++n) out.set(n, sym(t.get(n)));
  return out;
}

TangentTensor2Field tt_project_q(const ChartGeometry& c, const TangentTensor2Field& t) {
  TangentTensor2Field out(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 s = sym(t.get(n));
    double tr = ddot(c.g_at(n), s);
    out.set(n, s - (0.5 * tr) * c.ginv_at(n));
  }
  return out;
}

TangentTensor2Field tt_identity(const ChartGeometry& c) {
  TangentTensor2Field out(c.grid);
  out.data = c.g_inv.data;
  out.grid = c.grid;
  return out;
}

}  // namespace surfnema
