#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace surfnema {

struct Vec2 {
  double x[2]{};
  double& operator[](int i) { return x[i]; }
  double operator[](int i) const { return x[i]; }
};

struct Vec3 {
  double x[3]{};
  double& operator[](int i) { return x[i]; }
  double operator[](int i) const { return x[i]; }
};

/// 2x2 tensor, row-major.
struct Mat2 {
  double a[4]{};
  double& operator()(int i, int j) { return a[i * 2 + j]; }
  double operator()(int i, int j) const { return a[i * 2 + j]; }
  static Mat2 identity() { return Mat2{{1, 0, 0, 1}}; }
};

/// 3x3 tensor, row-major.
struct Mat3 {
  double a[9]{};
  double& operator()(int i, int j) { return a[i * 3 + j]; }
  double operator()(int i, int j) const { return a[i * 3 + j]; }
  static Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
};

inline Vec3 operator+(Vec3 u, Vec3 v) { return {u[0] + v[0], u[1] + v[1], u[2] + v[2]}; }
inline Vec3 operator-(Vec3 u, Vec3 v) { return {u[0] - v[0], u[1] - v[1], u[2] - v[2]}; }
inline Vec3 operator*(double s, Vec3 v) { return {s * v[0], s * v[1], s * v[2]}; }
inline double dot(Vec3 u, Vec3 v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }
inline Vec3 cross(Vec3 u, Vec3 v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }

inline Vec2 operator+(Vec2 u, Vec2 v) { return {u[0] + v[0], u[1] + v[1]}; }
inline Vec2 operator-(Vec2 u, Vec2 v) { return {u[0] - v[0], u[1] - v[1]}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v[0], s * v[1]}; }

inline Mat2 operator+(const Mat2& A, const Mat2& B) {
  Mat2 C;
  for (int i = 0; i < 4; ++i) C.a[i] = A.a[i] + B.a[i];
  return C;
}
inline Mat2 operator-(const Mat2& A, const Mat2& B) {
  Mat2 C;
  for (int i = 0; i < 4; ++i) C.a[i] = A.a[i] - B.a[i];
  return C;
}
inline Mat2 operator*(double s, const Mat2& A) {
  Mat2 C;
  for (int i = 0; i < 4; ++i) C.a[i] = s * A.a[i];
  return C;
}
inline Mat2 mul(const Mat2& A, const Mat2& B) {
  Mat2 C;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) C(i, j) = A(i, 0) * B(0, j) + A(i, 1) * B(1, j);
  return C;
}
inline Mat2 transpose(const Mat2& A) { return Mat2{{A.a[0], A.a[2], A.a[1], A.a[3]}}; }
inline double det(const Mat2& A) { return A.a[0] * A.a[3] - A.a[1] * A.a[2]; }
inline Mat2 inverse(const Mat2& A) {
  double d = det(A);
  return Mat2{{A.a[3] / d, -A.a[1] / d, -A.a[2] / d, A.a[0] / d}};
}
inline double trace(const Mat2& A) { return A.a[0] + A.a[3]; }
inline Vec2 mul(const Mat2& A, Vec2 v) {
  return {A(0, 0) * v[0] + A(0, 1) * v[1], A(1, 0) * v[0] + A(1, 1) * v[1]};
}

inline Mat3 operator+(const Mat3& A, const Mat3& B) {
  Mat3 C;
  for (int i = 0; i < 9; ++i) C.a[i] = A.a[i] + B.a[i];
  return C;
}
inline Mat3 operator-(const Mat3& A, const Mat3& B) {
  Mat3 C;
  for (int i = 0; i < 9; ++i) C.a[i] = A.a[i] - B.a[i];
  return C;
}
inline Mat3 operator*(double s, const Mat3& A) {
  Mat3 C;
  for (int i = 0; i < 9; ++i) C.a[i] = s * A.a[i];
  return C;
}
inline Mat3 mul(const Mat3& A, const Mat3& B) {
  Mat3 C;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      C(i, j) = A(i, 0) * B(0, j) + A(i, 1) * B(1, j) + A(i, 2) * B(2, j);
  return C;
}
inline Mat3 transpose(const Mat3& A) {
  Mat3 C;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) C(i, j) = A(j, i);
  return C;
}
inline double trace(const Mat3& A) { return A.a[0] + A.a[4] + A.a[8]; }
inline double ddot(const Mat3& A, const Mat3& B) {
  double s = 0;
  for (int i = 0; i < 9; ++i) s += A.a[i] * B.a[i];
  return s;
}
inline double ddot(const Mat2& A, const Mat2& B) {
  double s = 0;
  for (int i = 0; i < 4; ++i) s += A.a[i] * B.a[i];
  return s;
}
inline Vec3 mul(const Mat3& A, Vec3 v) {
  Vec3 r;
  for (int i = 0; i < 3; ++i) r[i] = A(i, 0) * v[0] + A(i, 1) * v[1] + A(i, 2) * v[2];
  return r;
}
inline Mat3 outer(Vec3 u, Vec3 v) {
  Mat3 C;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) C(i, j) = u[i] * v[j];
  return C;
}
inline Mat2 outer(Vec2 u, Vec2 v) {
  Mat2 C;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) C(i, j) = u[i] * v[j];
  return C;
}
inline Mat3 sym(const Mat3& A) { return 0.5 * (A + transpose(A)); }
inline Mat3 skew(const Mat3& A) { return 0.5 * (A - transpose(A)); }
inline Mat2 sym(const Mat2& A) { return 0.5 * (A + transpose(A)); }

/// Symmetric/traceless part: A - A^T removed, trace removed (Q-space projection).
inline Mat3 project_qtensor(const Mat3& A) {
  Mat3 S = sym(A);
  double t = trace(S) / 3.0;
  S(0, 0) -= t;
  S(1, 1) -= t;
  S(2, 2) -= t;
  return S;
}

/// Eigenvalues of a symmetric 3x3, ascending. Analytic (trigonometric) method.
inline std::array<double, 3> sym3_eigenvalues(const Mat3& A) {
  double p1 = A(0, 1) * A(0, 1) + A(0, 2) * A(0, 2) + A(1, 2) * A(1, 2);
  double q = trace(A) / 3.0;
  if (p1 == 0.0) {
    std::array<double, 3> e{A(0, 0), A(1, 1), A(2, 2)};
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    if (e[1] > e[2]) std::swap(e[1], e[2]);
    if (e[0] > e[1]) std::swap(e[0], e[1]);
    return e;
  }
  double p2 = (A(0, 0) - q) * (A(0, 0) - q) + (A(1, 1) - q) * (A(1, 1) - q) +
              (A(2, 2) - q) * (A(2, 2) - q) + 2.0 * p1;
  double p = std::sqrt(p2 / 6.0);
  Mat3 B = (1.0 / p) * (A - q * Mat3::identity());
  double r = 0.5 * (B(0, 0) * (B(1, 1) * B(2, 2) - B(1, 2) * B(2, 1)) -
                    B(0, 1) * (B(1, 0) * B(2, 2) - B(1, 2) * B(2, 0)) +
                    B(0, 2) * (B(1, 0) * B(2, 1) - B(1, 1) * B(2, 0)));
  r = std::fmin(1.0, std::fmax(-1.0, r));
  double phi = std::acos(r) / 3.0;
  double e2 = q + 2.0 * p * std::cos(phi);
  double e0 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
  double e1 = 3.0 * q - e0 - e2;
  return {e0, e1, e2};
}

// Error types named by the failure they signal.
struct ShapeMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateMetric : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonPeriodicDomain : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotAQTensor : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NonUnitDirector : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnknownSubspace : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct UnknownConstraint : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct RateFlavorMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BlowUp : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ProjectionNonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooFewSamples : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace surfnema
