#include <cmath>
#include <cstddef>

#include "surfnema/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define SURFNEMA_X86 1
#include <immintrin.h>
#else
#define SURFNEMA_X86 0
#endif

// AVX2+FMA variants of the pointwise kernels. All loops process 4 doubles
// per iteration with a scalar remainder. Compiled with per-function target
// attributes so the TU builds without global -mavx2 and dispatch stays safe.

namespace surfnema::kernels {

#if SURFNEMA_X86

#define SN_AVX2

namespace {

inline const double* pl(const double* base, std::size_t n, int c) { return base + c * n; }
inline double* pl(double* base, std::size_t n, int c) { return base + c * n; }

SN_AVX2 void mat3_mul_avx2(std::size_t n, const double* A, const double* B, double* C) {
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double* c = pl(C, n, i * 3 + j);
      const double* a0 = pl(A, n, i * 3 + 0);
      const double* a1 = pl(A, n, i * 3 + 1);
      const double* a2 = pl(A, n, i * 3 + 2);
      const double* b0 = pl(B, n, 0 * 3 + j);
      const double* b1 = pl(B, n, 1 * 3 + j);
      const double* b2 = pl(B, n, 2 * 3 + j);
      std::size_t k = 0;
      for (; k + 4 <= n; k += 4) {
        __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(a0 + k), _mm256_loadu_pd(b0 + k));
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a1 + k), _mm256_loadu_pd(b1 + k), acc);
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a2 + k), _mm256_loadu_pd(b2 + k), acc);
        _mm256_storeu_pd(c + k, acc);
      }
      for (; k < n; ++k) c[k] = a0[k] * b0[k] + a1[k] * b1[k] + a2[k] * b2[k];
    }
  }
}

SN_AVX2 void mat3_ddot_avx2(std::size_t n, const double* A, const double* B, double* out) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int c = 0; c < 9; ++c)
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(pl(A, n, c) + k), _mm256_loadu_pd(pl(B, n, c) + k),
                            acc);
    _mm256_storeu_pd(out + k, acc);
  }
  for (; k < n; ++k) {
    double s = 0.0;
    for (int c = 0; c < 9; ++c) s += pl(A, n, c)[k] * pl(B, n, c)[k];
    out[k] = s;
  }
}

SN_AVX2 void trace_powers_avx2(std::size_t n, const double* Q, double* t2, double* t3) {
  const double* q00 = pl(Q, n, 0);
  const double* q01 = pl(Q, n, 1);
  const double* q02 = pl(Q, n, 2);
  const double* q11 = pl(Q, n, 4);
  const double* q12 = pl(Q, n, 5);
  const double* q22 = pl(Q, n, 8);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d six = _mm256_set1_pd(6.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d a = _mm256_loadu_pd(q00 + k), b = _mm256_loadu_pd(q01 + k),
            c = _mm256_loadu_pd(q02 + k), d = _mm256_loadu_pd(q11 + k),
            e = _mm256_loadu_pd(q12 + k), f = _mm256_loadu_pd(q22 + k);
    __m256d diag = _mm256_mul_pd(a, a);
    diag = _mm256_fmadd_pd(d, d, diag);
    diag = _mm256_fmadd_pd(f, f, diag);
    __m256d off = _mm256_mul_pd(b, b);
    off = _mm256_fmadd_pd(c, c, off);
    off = _mm256_fmadd_pd(e, e, off);
    if (t2) _mm256_storeu_pd(t2 + k, _mm256_fmadd_pd(two, off, diag));
    if (t3) {
      __m256d cubes = _mm256_mul_pd(_mm256_mul_pd(a, a), a);
      cubes = _mm256_fmadd_pd(_mm256_mul_pd(d, d), d, cubes);
      cubes = _mm256_fmadd_pd(_mm256_mul_pd(f, f), f, cubes);
      __m256d mix = _mm256_mul_pd(_mm256_mul_pd(b, b), _mm256_add_pd(a, d));
      mix = _mm256_fmadd_pd(_mm256_mul_pd(c, c), _mm256_add_pd(a, f), mix);
      mix = _mm256_fmadd_pd(_mm256_mul_pd(e, e), _mm256_add_pd(d, f), mix);
      __m256d t = _mm256_fmadd_pd(three, mix, cubes);
      t = _mm256_fmadd_pd(six, _mm256_mul_pd(_mm256_mul_pd(b, c), e), t);
      _mm256_storeu_pd(t3 + k, t);
    }
  }
  for (; k < n; ++k) {
    double a = q00[k], b = q01[k], c = q02[k], d = q11[k], e = q12[k], f = q22[k];
    if (t2) t2[k] = a * a + d * d + f * f + 2.0 * (b * b + c * c + e * e);
    if (t3)
      t3[k] = a * a * a + d * d * d + f * f * f +
              3.0 * (b * b * (a + d) + c * c * (a + f) + e * e * (d + f)) + 6.0 * b * c * e;
  }
}

SN_AVX2 void project_qtensor_avx2(std::size_t n, const double* A, double* Q) {
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d third = _mm256_set1_pd(1.0 / 3.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double* aij = pl(A, n, i * 3 + j);
      const double* aji = pl(A, n, j * 3 + i);
      double* q = pl(Q, n, i * 3 + j);
      std::size_t k = 0;
      for (; k + 4 <= n; k += 4)
        _mm256_storeu_pd(
            q + k, _mm256_mul_pd(half, _mm256_add_pd(_mm256_loadu_pd(aij + k),
                                                     _mm256_loadu_pd(aji + k))));
      for (; k < n; ++k) q[k] = 0.5 * (aij[k] + aji[k]);
    }
  }
  const double* a00 = pl(A, n, 0);
  const double* a11 = pl(A, n, 4);
  const double* a22 = pl(A, n, 8);
  double* q00 = pl(Q, n, 0);
  double* q11 = pl(Q, n, 4);
  double* q22 = pl(Q, n, 8);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d t = _mm256_mul_pd(
        third, _mm256_add_pd(_mm256_add_pd(_mm256_loadu_pd(a00 + k), _mm256_loadu_pd(a11 + k)),
                             _mm256_loadu_pd(a22 + k)));
    _mm256_storeu_pd(q00 + k, _mm256_sub_pd(_mm256_loadu_pd(q00 + k), t));
    _mm256_storeu_pd(q11 + k, _mm256_sub_pd(_mm256_loadu_pd(q11 + k), t));
    _mm256_storeu_pd(q22 + k, _mm256_sub_pd(_mm256_loadu_pd(q22 + k), t));
  }
  for (; k < n; ++k) {
    double t = (a00[k] + a11[k] + a22[k]) / 3.0;
    q00[k] -= t;
    q11[k] -= t;
    q22[k] -= t;
  }
}

SN_AVX2 void thermotropic_field_avx2(std::size_t n, const double* Q, double ca, double cb,
                                     double cc, double* H) {
  const double* q00 = pl(Q, n, 0);
  const double* q01 = pl(Q, n, 1);
  const double* q02 = pl(Q, n, 2);
  const double* q11 = pl(Q, n, 4);
  const double* q12 = pl(Q, n, 5);
  const double* q22 = pl(Q, n, 8);
  const __m256d va = _mm256_set1_pd(ca);
  const __m256d vb = _mm256_set1_pd(cb);
  const __m256d vc = _mm256_set1_pd(cc);
  const __m256d vthird = _mm256_set1_pd(1.0 / 3.0);
  const __m256d vm2 = _mm256_set1_pd(-2.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d m00 = _mm256_loadu_pd(q00 + k), m01 = _mm256_loadu_pd(q01 + k),
            m02 = _mm256_loadu_pd(q02 + k), m11 = _mm256_loadu_pd(q11 + k),
            m12 = _mm256_loadu_pd(q12 + k), m22 = _mm256_loadu_pd(q22 + k);
    __m256d s00 = _mm256_mul_pd(m00, m00);
    s00 = _mm256_fmadd_pd(m01, m01, s00);
    s00 = _mm256_fmadd_pd(m02, m02, s00);
    __m256d s11 = _mm256_mul_pd(m01, m01);
    s11 = _mm256_fmadd_pd(m11, m11, s11);
    s11 = _mm256_fmadd_pd(m12, m12, s11);
    __m256d s22 = _mm256_mul_pd(m02, m02);
    s22 = _mm256_fmadd_pd(m12, m12, s22);
    s22 = _mm256_fmadd_pd(m22, m22, s22);
    __m256d s01 = _mm256_mul_pd(m00, m01);
    s01 = _mm256_fmadd_pd(m01, m11, s01);
    s01 = _mm256_fmadd_pd(m02, m12, s01);
    __m256d s02 = _mm256_mul_pd(m00, m02);
    s02 = _mm256_fmadd_pd(m01, m12, s02);
    s02 = _mm256_fmadd_pd(m02, m22, s02);
    __m256d s12 = _mm256_mul_pd(m01, m02);
    s12 = _mm256_fmadd_pd(m11, m12, s12);
    s12 = _mm256_fmadd_pd(m12, m22, s12);
    __m256d t2 = _mm256_add_pd(_mm256_add_pd(s00, s11), s22);
    __m256d third = _mm256_mul_pd(t2, vthird);
    __m256d lin = _mm256_fmadd_pd(vc, t2, va);
    auto emit = [&](int c, __m256d m, __m256d s) {
      __m256d r = _mm256_fmadd_pd(vb, s, _mm256_mul_pd(lin, m));
      _mm256_storeu_pd(pl(H, n, c) + k, _mm256_mul_pd(vm2, r));
    };
    emit(0, m00, _mm256_sub_pd(s00, third));
    emit(1, m01, s01);
    emit(2, m02, s02);
    emit(3, m01, s01);
    emit(4, m11, _mm256_sub_pd(s11, third));
    emit(5, m12, s12);
    emit(6, m02, s02);
    emit(7, m12, s12);
    emit(8, m22, _mm256_sub_pd(s22, third));
  }
  for (; k < n; ++k) {
    double m00 = q00[k], m01 = q01[k], m02 = q02[k], m11 = q11[k], m12 = q12[k], m22 = q22[k];
    double s00 = m00 * m00 + m01 * m01 + m02 * m02;
    double s11 = m01 * m01 + m11 * m11 + m12 * m12;
    double s22 = m02 * m02 + m12 * m12 + m22 * m22;
    double s01 = m00 * m01 + m01 * m11 + m02 * m12;
    double s02 = m00 * m02 + m01 * m12 + m02 * m22;
    double s12 = m01 * m02 + m11 * m12 + m12 * m22;
    double t2 = s00 + s11 + s22;
    double third = t2 / 3.0;
    double lin = ca + cc * t2;
    pl(H, n, 0)[k] = -2.0 * (lin * m00 + cb * (s00 - third));
    pl(H, n, 1)[k] = -2.0 * (lin * m01 + cb * s01);
    pl(H, n, 2)[k] = -2.0 * (lin * m02 + cb * s02);
    pl(H, n, 3)[k] = -2.0 * (lin * m01 + cb * s01);
    pl(H, n, 4)[k] = -2.0 * (lin * m11 + cb * (s11 - third));
    pl(H, n, 5)[k] = -2.0 * (lin * m12 + cb * s12);
    pl(H, n, 6)[k] = -2.0 * (lin * m02 + cb * s02);
    pl(H, n, 7)[k] = -2.0 * (lin * m12 + cb * s12);
    pl(H, n, 8)[k] = -2.0 * (lin * m22 + cb * (s22 - third));
  }
}

SN_AVX2 void biaxiality_poly_avx2(std::size_t n, const double* Q, double* B) {
  const double* q00 = pl(Q, n, 0);
  const double* q01 = pl(Q, n, 1);
  const double* q02 = pl(Q, n, 2);
  const double* q11 = pl(Q, n, 4);
  const double* q12 = pl(Q, n, 5);
  const double* q22 = pl(Q, n, 8);
  const __m256d c56 = _mm256_set1_pd(5.0 / 6.0);
  const __m256d c19 = _mm256_set1_pd(1.0 / 9.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d m00 = _mm256_loadu_pd(q00 + k), m01 = _mm256_loadu_pd(q01 + k),
            m02 = _mm256_loadu_pd(q02 + k), m11 = _mm256_loadu_pd(q11 + k),
            m12 = _mm256_loadu_pd(q12 + k), m22 = _mm256_loadu_pd(q22 + k);
    __m256d s00 = _mm256_mul_pd(m00, m00);
    s00 = _mm256_fmadd_pd(m01, m01, s00);
    s00 = _mm256_fmadd_pd(m02, m02, s00);
    __m256d s11 = _mm256_mul_pd(m01, m01);
    s11 = _mm256_fmadd_pd(m11, m11, s11);
    s11 = _mm256_fmadd_pd(m12, m12, s11);
    __m256d s22 = _mm256_mul_pd(m02, m02);
    s22 = _mm256_fmadd_pd(m12, m12, s22);
    s22 = _mm256_fmadd_pd(m22, m22, s22);
    __m256d s01 = _mm256_mul_pd(m00, m01);
    s01 = _mm256_fmadd_pd(m01, m11, s01);
    s01 = _mm256_fmadd_pd(m02, m12, s01);
    __m256d s02 = _mm256_mul_pd(m00, m02);
    s02 = _mm256_fmadd_pd(m01, m12, s02);
    s02 = _mm256_fmadd_pd(m02, m22, s02);
    __m256d s12 = _mm256_mul_pd(m01, m02);
    s12 = _mm256_fmadd_pd(m11, m12, s12);
    s12 = _mm256_fmadd_pd(m12, m22, s12);
    __m256d t2 = _mm256_add_pd(_mm256_add_pd(s00, s11), s22);
    __m256d f00 = _mm256_mul_pd(s00, s00);
    f00 = _mm256_fmadd_pd(s01, s01, f00);
    f00 = _mm256_fmadd_pd(s02, s02, f00);
    __m256d f11 = _mm256_mul_pd(s01, s01);
    f11 = _mm256_fmadd_pd(s11, s11, f11);
    f11 = _mm256_fmadd_pd(s12, s12, f11);
    __m256d f22 = _mm256_mul_pd(s02, s02);
    f22 = _mm256_fmadd_pd(s12, s12, f22);
    f22 = _mm256_fmadd_pd(s22, s22, f22);
    __m256d f01 = _mm256_mul_pd(s00, s01);
    f01 = _mm256_fmadd_pd(s01, s11, f01);
    f01 = _mm256_fmadd_pd(s02, s12, f01);
    __m256d f02 = _mm256_mul_pd(s00, s02);
    f02 = _mm256_fmadd_pd(s01, s12, f02);
    f02 = _mm256_fmadd_pd(s02, s22, f02);
    __m256d f12 = _mm256_mul_pd(s01, s02);
    f12 = _mm256_fmadd_pd(s11, s12, f12);
    f12 = _mm256_fmadd_pd(s12, s22, f12);
    __m256d c1 = _mm256_mul_pd(c56, t2);
    __m256d c2 = _mm256_mul_pd(c19, _mm256_mul_pd(t2, t2));
    auto emit = [&](int c, __m256d f, __m256d s, bool diag) {
      __m256d r = _mm256_fnmadd_pd(c1, s, f);
      if (diag) r = _mm256_add_pd(r, c2);
      _mm256_storeu_pd(pl(B, n, c) + k, r);
    };
    emit(0, f00, s00, true);
    emit(1, f01, s01, false);
    emit(2, f02, s02, false);
    emit(3, f01, s01, false);
    emit(4, f11, s11, true);
    emit(5, f12, s12, false);
    emit(6, f02, s02, false);
    emit(7, f12, s12, false);
    emit(8, f22, s22, true);
  }
  for (; k < n; ++k) {
    double m00 = q00[k], m01 = q01[k], m02 = q02[k], m11 = q11[k], m12 = q12[k], m22 = q22[k];
    double s00 = m00 * m00 + m01 * m01 + m02 * m02;
    double s11 = m01 * m01 + m11 * m11 + m12 * m12;
    double s22 = m02 * m02 + m12 * m12 + m22 * m22;
    double s01 = m00 * m01 + m01 * m11 + m02 * m12;
    double s02 = m00 * m02 + m01 * m12 + m02 * m22;
    double s12 = m01 * m02 + m11 * m12 + m12 * m22;
    double t2 = s00 + s11 + s22;
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

SN_AVX2 void biaxiality_measure_avx2(std::size_t n, const double* Q, double* out) {
  const double* q00 = pl(Q, n, 0);
  const double* q01 = pl(Q, n, 1);
  const double* q02 = pl(Q, n, 2);
  const double* q11 = pl(Q, n, 4);
  const double* q12 = pl(Q, n, 5);
  const double* q22 = pl(Q, n, 8);
  const __m256d two = _mm256_set1_pd(2.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d six = _mm256_set1_pd(6.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d a = _mm256_loadu_pd(q00 + k), b = _mm256_loadu_pd(q01 + k),
            c = _mm256_loadu_pd(q02 + k), d = _mm256_loadu_pd(q11 + k),
            e = _mm256_loadu_pd(q12 + k), f = _mm256_loadu_pd(q22 + k);
    __m256d diag = _mm256_mul_pd(a, a);
    diag = _mm256_fmadd_pd(d, d, diag);
    diag = _mm256_fmadd_pd(f, f, diag);
    __m256d off = _mm256_mul_pd(b, b);
    off = _mm256_fmadd_pd(c, c, off);
    off = _mm256_fmadd_pd(e, e, off);
    __m256d t2 = _mm256_fmadd_pd(two, off, diag);
    __m256d cubes = _mm256_mul_pd(_mm256_mul_pd(a, a), a);
    cubes = _mm256_fmadd_pd(_mm256_mul_pd(d, d), d, cubes);
    cubes = _mm256_fmadd_pd(_mm256_mul_pd(f, f), f, cubes);
    __m256d mix = _mm256_mul_pd(_mm256_mul_pd(b, b), _mm256_add_pd(a, d));
    mix = _mm256_fmadd_pd(_mm256_mul_pd(c, c), _mm256_add_pd(a, f), mix);
    mix = _mm256_fmadd_pd(_mm256_mul_pd(e, e), _mm256_add_pd(d, f), mix);
    __m256d t3 = _mm256_fmadd_pd(three, mix, cubes);
    t3 = _mm256_fmadd_pd(six, _mm256_mul_pd(_mm256_mul_pd(b, c), e), t3);
    __m256d r = _mm256_mul_pd(_mm256_mul_pd(t2, t2), t2);
    r = _mm256_fnmadd_pd(six, _mm256_mul_pd(t3, t3), r);
    _mm256_storeu_pd(out + k, r);
  }
  for (; k < n; ++k) {
    double a = q00[k], b = q01[k], c = q02[k], d = q11[k], e = q12[k], f = q22[k];
    double t2 = a * a + d * d + f * f + 2.0 * (b * b + c * c + e * e);
    double t3 = a * a * a + d * d * d + f * f * f +
                3.0 * (b * b * (a + d) + c * c * (a + f) + e * e * (d + f)) + 6.0 * b * c * e;
    out[k] = t2 * t2 * t2 - 6.0 * t3 * t3;
  }
}

SN_AVX2 void axpby_avx2(std::size_t n, double a, const double* x, double b, const double* y,
                        double* out) {
  const __m256d va = _mm256_set1_pd(a);
  const __m256d vb = _mm256_set1_pd(b);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d r = _mm256_mul_pd(va, _mm256_loadu_pd(x + k));
    r = _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + k), r);
    _mm256_storeu_pd(out + k, r);
  }
  for (; k < n; ++k) out[k] = a * x[k] + b * y[k];
}

SN_AVX2 double dot_avx2(std::size_t n, const double* x, const double* y) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc);
  double lane[4];
  _mm256_storeu_pd(lane, acc);
  double s = ((lane[0] + lane[1]) + (lane[2] + lane[3]));
  for (; k < n; ++k) s += x[k] * y[k];
  return s;
}

SN_AVX2 double max_abs_avx2(std::size_t n, const double* x) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  __m256d acc = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4)
    acc = _mm256_max_pd(acc, _mm256_and_pd(mask, _mm256_loadu_pd(x + k)));
  double lane[4];
  _mm256_storeu_pd(lane, acc);
  double m = std::fmax(std::fmax(lane[0], lane[1]), std::fmax(lane[2], lane[3]));
  for (; k < n; ++k) m = std::fmax(m, std::fabs(x[k]));
  return m;
}

}  // namespace

bool avx2_supported() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Ops& avx2_ops() {
  static const Ops t{mat3_mul_avx2,       mat3_ddot_avx2,    trace_powers_avx2,
                     project_qtensor_avx2, thermotropic_field_avx2,
                     biaxiality_poly_avx2, biaxiality_measure_avx2,
                     axpby_avx2,           dot_avx2,          max_abs_avx2};
  return t;
}

#else  // !SURFNEMA_X86

bool avx2_supported() { return false; }
const Ops& avx2_ops() { return scalar_ops(); }

#endif

}  // namespace surfnema::kernels
