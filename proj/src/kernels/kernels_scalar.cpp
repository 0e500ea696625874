#include <cmath>
#include <cstddef>

#include "surfnema/kernels.hpp"

// Scalar reference kernels. These define the semantics; the SIMD variants
// must match them to rounding.

namespace surfnema::kernels {
namespace {

inline const double* pl(const double* base, std::size_t n, int c) { return base + c * n; }
inline double* pl(double* base, std::size_t n, int c) { return base + c * n; }

void mat3_mul_scalar(std::size_t n, const double* A, const double* B, double* C) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double* c = pl(C, n, i * 3 + j);
      const double* a0 = pl(A, n, i * 3 + 0);
      const double* a1 = pl(A, n, i * 3 + 1);
      const double* a2 = pl(A, n, i * 3 + 2);
      const double* b0 = pl(B, n, 0 * 3 + j);
      const double* b1 = pl(B, n, 1 * 3 + j);
      const double* b2 = pl(B, n, 2 * 3 + j);
      for (std::size_t k = 0; k < n; ++k) c[k] = a0[k] * b0[k] + a1[k] * b1[k] + a2[k] * b2[k];
    }
  }
}

void mat3_ddot_scalar(std::size_t n, const double* A, const double* B, double* out) {
  for (std::size_t k = 0; k < n; ++k) out[k] = 0.0;
  for (int c = 0; c < 9; ++c) {
    const double* a = pl(A, n, c);
    const double* b = pl(B, n, c);
    for (std::size_t k = 0; k < n; ++k) out[k] += a[k] * b[k];
  }
}

void trace_powers_scalar(std::size_t n, const double* Q, double* t2, double* t3) {
  const double* q00 = pl(Q, n, 0);
  const double* q01 = pl(Q, n, 1);
  const double* q02 = pl(Q, n, 2);
  const double* q11 = pl(Q, n, 4);
  const double* q12 = pl(Q, n, 5);
  const double* q22 = pl(Q, n, 8);
  for (std::size_t k = 0; k < n; ++k) {
    double a = q00[k], b = q01[k], c = q02[k], d = q11[k], e = q12[k], f = q22[k];
    if (t2) t2[k] = a * a + d * d + f * f + 2.0 * (b * b + c * c + e * e);
    if (t3) {
      // Tr Q^3 = sum_{ijk} Q_ij Q_jk Q_ki for symmetric Q.
      t3[k] = a * a * a + d * d * d + f * f * f + 3.0 * (b * b * (a + d) + c * c * (a + f) +
                                                         e * e * (d + f)) +
              6.0 * b * c * e;
    }
  }
}

void project_qtensor_scalar(std::size_t n, const double* A, double* Q) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double* aij = pl(A, n, i * 3 + j);
      const double* aji = pl(A, n, j * 3 + i);
      double* q = pl(Q, n, i * 3 + j);
      for (std::size_t k = 0; k < n; ++k) q[k] = 0.5 * (aij[k] + aji[k]);
    }
  }
  const double* a00 = pl(A, n, 0);
  const double* a11 = pl(A, n, 4);
  const double* a22 = pl(A, n, 8);
  double* q00 = pl(Q, n, 0);
  double* q11 = pl(Q, n, 4);
  double* q22 = pl(Q, n, 8);
  for (std::size_t k = 0; k < n; ++k) {
    double t = (a00[k] + a11[k] + a22[k]) / 3.0;
    q00[k] -= t;
    q11[k] -= t;
    q22[k] -= t;
  }
}

void thermotropic_field_scalar(std::size_t n, const double* Q, double a, double b, double c,
                               double* H) {
  const double* q00 = pl(Q, n, 0);
  const double* q01 = pl(Q, n, 1);
  const double* q02 = pl(Q, n, 2);
  const double* q11 = pl(Q, n, 4);
  const double* q12 = pl(Q, n, 5);
  const double* q22 = pl(Q, n, 8);
  for (std::size_t k = 0; k < n; ++k) {
    double m00 = q00[k], m01 = q01[k], m02 = q02[k], m11 = q11[k], m12 = q12[k], m22 = q22[k];
    double s00 = m00 * m00 + m01 * m01 + m02 * m02;
    double s11 = m01 * m01 + m11 * m11 + m12 * m12;
    double s22 = m02 * m02 + m12 * m12 + m22 * m22;
    double s01 = m00 * m01 + m01 * m11 + m02 * m12;
    double s02 = m00 * m02 + m01 * m12 + m02 * m22;
    double s12 = m01 * m02 + m11 * m12 + m12 * m22;
    double t2 = s00 + s11 + s22;
    double third = t2 / 3.0;
    double lin = a + c * t2;
    pl(H, n, 0)[k] = -2.0 * (lin * m00 + b * (s00 - third));
    pl(H, n, 1)[k] = -2.0 * (lin * m01 + b * s01);
    pl(H, n, 2)[k] = -2.0 * (lin * m02 + b * s02);
    pl(H, n, 3)[k] = -2.0 * (lin * m01 + b * s01);
    pl(H, n, 4)[k] = -2.0 * (lin * m11 + b * (s11 - third));
    pl(H, n, 5)[k] = -2.0 * (lin * m12 + b * s12);
    pl(H, n, 6)[k] = -2.0 * (lin * m02 + b * s02);
    pl(H, n, 7)[k] = -2.0 * (lin * m12 + b * s12);
    pl(H, n, 8)[k] = -2.0 * (lin * m22 + b * (s22 - third));
  }
}

void biaxiality_poly_scalar(std::size_t n, const double* Q, double* B) {
  const double* q00 = pl(Q, n, 0);
  const double* q01 = pl(Q, n, 1);
  const double* q02 = pl(Q, n, 2);
  const double* q11 = pl(Q, n, 4);
  const double* q12 = pl(Q, n, 5);
  const double* q22 = pl(Q, n, 8);
  for (std::size_t k = 0; k < n; ++k) {
    double m00 = q00[k], m01 = q01[k], m02 = q02[k], m11 = q11[k], m12 = q12[k], m22 = q22[k];
    // S = Q^2 (symmetric).
    double s00 = m00 * m00 + m01 * m01 + m02 * m02;
    double s11 = m01 * m01 + m11 * m11 + m12 * m12;
    double s22 = m02 * m02 + m12 * m12 + m22 * m22;
    double s01 = m00 * m01 + m01 * m11 + m02 * m12;
    double s02 = m00 * m02 + m01 * m12 + m02 * m22;
    double s12 = m01 * m02 + m11 * m12 + m12 * m22;
    double t2 = s00 + s11 + s22;
    // F = S^2 = Q^4 (symmetric).
    double f00 = s00 * s00 + s01 * s01 + s02 * s02;
    double f11 = s01 * s01 + s11 * s11 + s12 * s12;
    double f22 = s02 * s02 + s12 * s12 + s22 * s22;
    double f01 = s00 * s01 + s01 * s11 + s02 * s12;
    double f02 = s00 * s02 + s01 * s12 + s02 * s22;
    double f12 = s01 * s02 + s11 * s12 + s12 * s22;
    double c1 = (5.0 / 6.0) * t2;
    double c2 = (1.0 / 9.0) * t2 * t2;
    pl(B, n, 0)[k] = f00 - c1 * s00 + c2;
    pl(B, n, 1)[k] = f01 - c1 * s01;
    pl(B, n, 2)[k] = f02 - c1 * s02;
    pl(B, n, 3)[k] = f01 - c1 * s01;
    pl(B, n, 4)[k] = f11 - c1 * s11 + c2;
    pl(B, n, 5)[k] = f12 - c1 * s12;
    pl(B, n, 6)[k] = f02 - c1 * s02;
    pl(B, n, 7)[k] = f12 - c1 * s12;
    pl(B, n, 8)[k] = f22 - c1 * s22 + c2;
  }
}

void biaxiality_measure_scalar(std::size_t n, const double* Q, double* b) {
  const double* q00 = pl(Q, n, 0);
  const double* q01 = pl(Q, n, 1);
  const double* q02 = pl(Q, n, 2);
  const double* q11 = pl(Q, n, 4);
  const double* q12 = pl(Q, n, 5);
  const double* q22 = pl(Q, n, 8);
  for (std::size_t k = 0; k < n; ++k) {
    double a = q00[k], p = q01[k], c = q02[k], d = q11[k], e = q12[k], f = q22[k];
    double t2 = a * a + d * d + f * f + 2.0 * (p * p + c * c + e * e);
    double t3 = a * a * a + d * d * d + f * f * f +
                3.0 * (p * p * (a + d) + c * c * (a + f) + e * e * (d + f)) + 6.0 * p * c * e;
    b[k] = t2 * t2 * t2 - 6.0 * t3 * t3;
  }
}

void axpby_scalar(std::size_t n, double a, const double* x, double b, const double* y,
                  double* out) {
  for (std::size_t k = 0; k < n; ++k) out[k] = a * x[k] + b * y[k];
}

double dot_scalar(std::size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += x[k] * y[k];
  return s;
}

double max_abs_scalar(std::size_t n, const double* x) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k) m = std::fmax(m, std::fabs(x[k]));
  return m;
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops t{mat3_mul_scalar,       mat3_ddot_scalar,    trace_powers_scalar,
                     project_qtensor_scalar, thermotropic_field_scalar,
                     biaxiality_poly_scalar, biaxiality_measure_scalar,
                     axpby_scalar,           dot_scalar,          max_abs_scalar};
  return t;
}

}  // namespace surfnema::kernels
