#pragma once

#include <cstddef>
#include <vector>

#include "surfnema/core.hpp"

namespace surfnema {

/// Periodic structured grid over the chart rectangle [0,p1) x [0,p2).
/// Node (i,j) sits at (i*p1/n1, j*p2/n2); linear index i*n2 + j.
struct Grid {
  int n1 = 0, n2 = 0;
  double p1 = 0.0, p2 = 0.0;

  std::size_t nodes() const { return std::size_t(n1) * std::size_t(n2); }
  std::size_t idx(int i, int j) const { return std::size_t(i) * n2 + j; }
  double h1() const { return p1 / n1; }
  double h2() const { return p2 / n2; }
  double coord1(int i) const { return p1 * i / n1; }
  double coord2(int j) const { return p2 * j / n2; }
  bool operator==(const Grid& o) const {
    return n1 == o.n1 && n2 == o.n2 && p1 == o.p1 && p2 == o.p2;
  }
};

/// Component-major storage: comp c occupies data[c*nodes() .. (c+1)*nodes()).
template <int NC>
struct FieldBase {
  Grid grid{};
  std::vector<double> data;

  FieldBase() = default;
  explicit FieldBase(const Grid& g) : grid(g), data(std::size_t(NC) * g.nodes(), 0.0) {}

  static constexpr int ncomp = NC;
  std::size_t nodes() const { return grid.nodes(); }
  double* comp(int c) { return data.data() + std::size_t(c) * nodes(); }
  const double* comp(int c) const { return data.data() + std::size_t(c) * nodes(); }
  double& at(int c, std::size_t n) { return data[std::size_t(c) * nodes() + n]; }
  double at(int c, std::size_t n) const { return data[std::size_t(c) * nodes() + n]; }
  void fill(double v) { data.assign(data.size(), v); }
};

struct ScalarField : FieldBase<1> {
  using FieldBase::FieldBase;
  double& operator[](std::size_t n) { return data[n]; }
  double operator[](std::size_t n) const { return data[n]; }
};

/// Contravariant tangential vector field (w^1, w^2).
struct TangentVectorField : FieldBase<2> {
  using FieldBase::FieldBase;
  Vec2 get(std::size_t n) const { return {at(0, n), at(1, n)}; }
  void set(std::size_t n, Vec2 v) {
    at(0, n) = v[0];
    at(1, n) = v[1];
  }
};

/// Contravariant tangential 2-tensor field t^{ij}; comps ordered 11,12,21,22.
struct TangentTensor2Field : FieldBase<4> {
  using FieldBase::FieldBase;
  Mat2 get(std::size_t n) const { return Mat2{{at(0, n), at(1, n), at(2, n), at(3, n)}}; }
  void set(std::size_t n, const Mat2& m) {
    for (int c = 0; c < 4; ++c) at(c, n) = m.a[c];
  }
};

/// R^3-valued (Cartesian proxy) vector field.
struct EmbVectorField : FieldBase<3> {
  using FieldBase::FieldBase;
  Vec3 get(std::size_t n) const { return {at(0, n), at(1, n), at(2, n)}; }
  void set(std::size_t n, Vec3 v) {
    for (int c = 0; c < 3; ++c) at(c, n) = v[c];
  }
};

/// 3x3 Cartesian-proxy 2-tensor field; comp index A*3+B (row-major).
struct EmbTensor2Field : FieldBase<9> {
  using FieldBase::FieldBase;
  Mat3 get(std::size_t n) const {
    Mat3 m;
    for (int c = 0; c < 9; ++c) m.a[c] = at(c, n);
    return m;
  }
  void set(std::size_t n, const Mat3& m) {
    for (int c = 0; c < 9; ++c) at(c, n) = m.a[c];
  }
};

// Derivative carriers. The derivative index k is covariant and is the last
// (fastest) component index.

/// d_k f, comps k=1,2.
struct ScalarGradField : FieldBase<2> {
  using FieldBase::FieldBase;
  Vec2 get(std::size_t n) const { return {at(0, n), at(1, n)}; }
};

/// w^i_{|k}, comp index i*2+k.
struct VectorCovDField : FieldBase<4> {
  using FieldBase::FieldBase;
  Mat2 get(std::size_t n) const { return Mat2{{at(0, n), at(1, n), at(2, n), at(3, n)}}; }
  void set(std::size_t n, const Mat2& m) {
    for (int c = 0; c < 4; ++c) at(c, n) = m.a[c];
  }
};

/// t^{ij}_{|k}, comp index (i*2+j)*2+k.
struct Tensor2CovDField : FieldBase<8> {
  using FieldBase::FieldBase;
  double get(std::size_t n, int i, int j, int k) const { return at((i * 2 + j) * 2 + k, n); }
};

/// d_k W^A, comp index A*2+k.
struct EmbVectorCovDField : FieldBase<6> {
  using FieldBase::FieldBase;
  double get(std::size_t n, int A, int k) const { return at(A * 2 + k, n); }
};

/// d_k R^{AB}, comp index (A*3+B)*2+k.
struct EmbTensor2CovDField : FieldBase<18> {
  using FieldBase::FieldBase;
  double get(std::size_t n, int A, int B, int k) const { return at((A * 3 + B) * 2 + k, n); }
};

template <typename F1, typename F2>
void require_same_grid(const F1& a, const F2& b, const char* what) {
  if (!(a.grid == b.grid)) throw ShapeMismatch(std::string("grid mismatch in ") + what);
}

inline double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::fmax(m, std::fabs(x));
  return m;
}

template <int NC>
double max_abs(const FieldBase<NC>& f) {
  return max_abs(f.data);
}

}  // namespace surfnema
