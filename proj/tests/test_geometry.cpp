#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "surfnema/calculus.hpp"
#include "surfnema/geometry.hpp"
#include "test_util.hpp"

using namespace surfnema;
using namespace surfnema::testutil;

TEST_CASE("flat torus chart is exactly flat") {
  auto c = build_chart(SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI), 64, 64);
  CHECK(max_abs(c.mean_curv) == 0.0);
  CHECK(max_abs(c.gauss_curv) == 0.0);
  CHECK(max_abs(c.shape_op) == 0.0);
  for (std::size_t n = 0; n < c.grid.nodes(); n += 97) {
    Mat2 g = c.g_at(n);
    CHECK(g(0, 0) == 1.0);
    CHECK(g(1, 1) == 1.0);
    CHECK(g(0, 1) == 0.0);
  }
}

TEST_CASE("embedded torus curvatures at marked latitudes") {
  auto c = build_chart(SurfaceKind::embedded_torus(2.0, 1.0), 64, 64);
  // theta = 0 row: outer equator, principal curvatures 1/3 and 1
  std::size_t n0 = c.grid.idx(0, 5);
  CHECK(c.mean_curv[n0] == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  CHECK(c.gauss_curv[n0] == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  // theta = pi/2 (i = n1/4): parabolic circle, K = 0
  std::size_t n1 = c.grid.idx(16, 9);
  CHECK(std::fabs(c.gauss_curv[n1]) < 1e-13);
}

TEST_CASE("discrete-position chart agrees with analytic torus") {
  auto ca = build_chart(SurfaceKind::embedded_torus(2.0, 1.0), 48, 48);
  auto cd = build_chart_from_positions(ca.grid, ca.X, DerivScheme::Spectral);
  double errH = 0, errK = 0, errII = 0, errG = 0;
  for (std::size_t n = 0; n < ca.grid.nodes(); ++n) {
    errH = std::fmax(errH, std::fabs(ca.mean_curv[n] - cd.mean_curv[n]));
    errK = std::fmax(errK, std::fabs(ca.gauss_curv[n] - cd.gauss_curv[n]));
    for (int k = 0; k < 4; ++k) {
      errII = std::fmax(errII, std::fabs(ca.shape_op.at(k, n) - cd.shape_op.at(k, n)));
      errG = std::fmax(errG, std::fabs(ca.g.at(k, n) - cd.g.at(k, n)));
    }
  }
  CHECK(errG < 1e-10);
  CHECK(errII < 1e-9);
  CHECK(errH < 1e-9);
  CHECK(errK < 1e-9);
}

TEST_CASE("normal is unit and orthogonal to tangents") {
  auto c = build_chart(SurfaceKind::embedded_torus(2.0, 1.0), 32, 32);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Vec3 nu = c.nu_at(n);
    CHECK(std::fabs(norm(nu) - 1.0) < 1e-13);
    CHECK(std::fabs(dot(nu, c.t1_at(n))) < 1e-10);
    CHECK(std::fabs(dot(nu, c.t2_at(n))) < 1e-10);
  }
}

TEST_CASE("Cayley-Hamilton for the shape operator") {
  auto c = build_chart(SurfaceKind::embedded_torus(2.0, 1.0), 32, 32);
  double err = 0;
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    Mat2 II = c.II_at(n);
    Mat2 gi = c.ginv_at(n);
    Mat2 lhs = mul(II, mul(gi, II));
    Mat2 rhs = c.mean_curv[n] * II - c.gauss_curv[n] * c.g_at(n);
    for (int k = 0; k < 4; ++k) err = std::fmax(err, std::fabs(lhs.a[k] - rhs.a[k]));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("area integrals") {
  SUBCASE("flat torus area") {
    auto c = build_chart(SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI), 64, 64);
    ScalarField one(c.grid);
    one.fill(1.0);
    CHECK(area_integral(c, one) == doctest::Approx(4 * M_PI * M_PI).epsilon(1e-14));
  }
  SUBCASE("embedded torus area 4 pi^2 R r") {
    auto c = build_chart(SurfaceKind::embedded_torus(2.0, 1.0), 24, 24);
    ScalarField one(c.grid);
    one.fill(1.0);
    CHECK(area_integral(c, one) == doctest::Approx(4 * M_PI * M_PI * 2.0).epsilon(1e-13));
  }
  SUBCASE("mean-zero integrand") {
    auto c = build_chart(SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI), 32, 32);
    ScalarField f(c.grid);
    for (int i = 0; i < c.grid.n1; ++i)
      for (int j = 0; j < c.grid.n2; ++j) f[c.grid.idx(i, j)] = std::sin(c.grid.coord1(i));
    CHECK(std::fabs(area_integral(c, f)) < 1e-13);
  }
  SUBCASE("shape mismatch rejected") {
    auto c = build_chart(SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI), 16, 16);
    Grid other{32, 32, 2 * M_PI, 2 * M_PI};
    ScalarField f(other);
    CHECK_THROWS_AS(area_integral(c, f), ShapeMismatch);
  }
}

TEST_CASE("chart validation errors") {
  CHECK_THROWS_AS(build_chart(SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI), 4, 16),
                  ValidationError);
  CHECK_THROWS_AS(build_chart(SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI), 15, 16),
                  ValidationError);
  CHECK_THROWS_AS(build_chart(SurfaceKind::embedded_torus(1.0, 2.0), 16, 16),
                  NonPeriodicDomain);
  CHECK_NOTHROW(
      build_chart(SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI), 15, 16, DerivScheme::Fd4));
}

TEST_CASE("discrete shape-operator error shrinks at scheme order (fd4)") {
  // H and K happen to be reproduced to round-off on this chart (the fd4
  // errors of g and II cancel in the traces), so the order is measured on
  // the covariant II components.
  double err[2];
  int Ns[2] = {24, 48};
  for (int t = 0; t < 2; ++t) {
    auto ca = build_chart(SurfaceKind::embedded_torus(2.0, 1.0), Ns[t], Ns[t], DerivScheme::Fd4);
    auto cd = build_chart_from_positions(ca.grid, ca.X, DerivScheme::Fd4);
    double e = 0;
    for (std::size_t n = 0; n < ca.grid.nodes(); ++n)
      for (int k = 0; k < 4; ++k)
        e = std::fmax(e, std::fabs(ca.shape_op.at(k, n) - cd.shape_op.at(k, n)));
    err[t] = e;
  }
  double order = std::log2(err[0] / err[1]);
  CHECK(order > 3.5);
}

TEST_CASE("Riemann contraction recovers K") {
  auto c = build_chart(SurfaceKind::embedded_torus(2.0, 1.0), 48, 48);
  FieldBase<8> dG1(c.grid), dG2(c.grid);
  d1_all(*c.deriv, c.christoffel, dG1);
  d2_all(*c.deriv, c.christoffel, dG2);
  double err = 0;
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
    auto gamma = [&](int l, int j, int k) { return c.gamma(n, l, j, k); };
    auto dgamma = [&](int i, int l, int j, int k) {
      return (i == 0 ? dG1 : dG2).at(l * 4 + j * 2 + k, n);
    };
    double Rup[2][2][2][2];  // R^r_{kij}
    for (int r = 0; r < 2; ++r)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            double v = dgamma(i, r, j, k) - dgamma(j, r, i, k);
            for (int m = 0; m < 2; ++m)
              v += gamma(r, i, m) * gamma(m, j, k) - gamma(r, j, m) * gamma(m, i, k);
            Rup[r][k][i][j] = v;
          }
    Mat2 g = c.g_at(n);
    double R[2][2][2][2];  // R_{akij}
    for (int a = 0; a < 2; ++a)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            double v = 0;
            for (int r = 0; r < 2; ++r) v += g(a, r) * Rup[r][k][i][j];
            R[a][k][i][j] = v;
          }
    double Eu = 1.0 / c.area_form[n];  // E^{12}
    int sgn[2][2] = {{0, 1}, {-1, 0}};
    double contr = 0;
    for (int a = 0; a < 2; ++a)
      for (int k = 0; k < 2; ++k)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j)
            contr += sgn[a][k] * Eu * R[a][k][i][j] * sgn[i][j] * Eu;
    err = std::fmax(err, std::fabs(0.25 * contr - c.gauss_curv[n]));
  }
  CHECK(err < 1e-9);
}
