#include "surfnema/geometry.hpp"

#include <cmath>

namespace surfnema {

namespace {

void check_grid(int n1, int n2, DerivScheme scheme) {
  if (n1 < 8 || n2 < 8) throw ValidationError("grid_shape components must be >= 8");
  if (scheme == DerivScheme::Spectral && (n1 % 2 != 0 || n2 % 2 != 0))
    throw ValidationError("spectral scheme requires even grid sizes");
}

void finalize_common(ChartGeometry& c) {
  const std::size_t nn = c.grid.nodes();
  for (std::size_t n = 0; n < nn; ++n) {
    Mat2 gm = c.g.get(n);
    double d = det(gm);
    if (!(d > 0.0) || !(gm(0, 0) > 0.0))
      throw DegenerateMetric("metric not positive definite at some node");
    c.g_inv.set(n, inverse(gm));
    c.area_form[n] = std::sqrt(d);
    Mat2 ii = c.shape_op.get(n);
    Mat2 mixed = mul(c.g_inv.get(n), ii);  // II^i_j
    c.mean_curv[n] = trace(mixed);
    c.gauss_curv[n] = det(mixed);
  }
}

}  // namespace

ChartGeometry build_chart(const SurfaceKind& kind, int n1, int n2, DerivScheme scheme) {
  check_grid(n1, n2, scheme);
  ChartGeometry c;
  c.scheme = scheme;
  c.grid = Grid{n1, n2, kind.p1, kind.p2};
  if (kind.kind == SurfaceKind::Kind::FlatTorus) {
    if (!(kind.p1 > 0.0 && kind.p2 > 0.0)) throw ValidationError("flat torus needs P1, P2 > 0");
  } else {
    if (!(kind.major_radius > kind.minor_radius && kind.minor_radius > 0.0))
      throw NonPeriodicDomain("embedded torus needs R > r > 0 for a global periodic chart");
    c.grid.p1 = 2.0 * M_PI;
    c.grid.p2 = 2.0 * M_PI;
  }
  c.deriv = std::make_shared<DerivEngine>(c.grid, scheme);
  const Grid& g = c.grid;
  c.X = EmbVectorField(g);
  c.tangent1 = EmbVectorField(g);
  c.tangent2 = EmbVectorField(g);
  c.g = TangentTensor2Field(g);
  c.g_inv = TangentTensor2Field(g);
  c.christoffel = FieldBase<8>(g);
  c.normal = EmbVectorField(g);
  c.shape_op = TangentTensor2Field(g);
  c.mean_curv = ScalarField(g);
  c.gauss_curv = ScalarField(g);
  c.area_form = ScalarField(g);

  if (kind.kind == SurfaceKind::Kind::FlatTorus) {
    c.flat = true;
    for (int i = 0; i < g.n1; ++i) {
      for (int j = 0; j < g.n2; ++j) {
        std::size_t n = g.idx(i, j);
        c.X.set(n, {g.coord1(i), g.coord2(j), 0.0});
        c.tangent1.set(n, {1, 0, 0});
        c.tangent2.set(n, {0, 1, 0});
        c.g.set(n, Mat2::identity());
        c.normal.set(n, {0, 0, 1});
        // II, Gamma stay zero
      }
    }
  } else {
    const double R = kind.major_radius, r = kind.minor_radius;
    for (int i = 0; i < g.n1; ++i) {
      const double th = g.coord1(i);
      const double ct = std::cos(th), st = std::sin(th);
      const double w = R + r * ct;  // distance from the symmetry axis
      for (int j = 0; j < g.n2; ++j) {
        const double ph = g.coord2(j);
        const double cp = std::cos(ph), sp = std::sin(ph);
        std::size_t n = g.idx(i, j);
        c.X.set(n, {w * cp, w * sp, r * st});
        c.tangent1.set(n, {-r * st * cp, -r * st * sp, r * ct});
        c.tangent2.set(n, {-w * sp, w * cp, 0.0});
        c.g.set(n, Mat2{{r * r, 0.0, 0.0, w * w}});
        // nu = d1X x d2X / |.|; for this chart order it points toward the
        // tube axis and the stock sphere/torus curvatures come out positive.
        c.normal.set(n, {-ct * cp, -ct * sp, -st});
        c.shape_op.set(n, Mat2{{r, 0.0, 0.0, ct * w}});
        // Gamma^th_{phph} = st*w/r, Gamma^ph_{th ph} = Gamma^ph_{ph th} = -r st/w
        c.christoffel.at(0 * 4 + 3, n) = st * w / r;
        c.christoffel.at(1 * 4 + 1, n) = -r * st / w;
        c.christoffel.at(1 * 4 + 2, n) = -r * st / w;
      }
    }
  }
  finalize_common(c);
  return c;
}

ChartGeometry build_chart_from_positions(const Grid& grid, const EmbVectorField& X,
                                         DerivScheme scheme) {
  check_grid(grid.n1, grid.n2, scheme);
  if (!(X.grid == grid)) throw ShapeMismatch("position field grid mismatch");
  ChartGeometry c;
  c.scheme = scheme;
  c.grid = grid;
  c.deriv = std::make_shared<DerivEngine>(grid, scheme);
  c.X = X;
  c.tangent1 = EmbVectorField(grid);
  c.tangent2 = EmbVectorField(grid);
  c.g = TangentTensor2Field(grid);
  c.g_inv = TangentTensor2Field(grid);
  c.christoffel = FieldBase<8>(grid);
  c.normal = EmbVectorField(grid);
  c.shape_op = TangentTensor2Field(grid);
  c.mean_curv = ScalarField(grid);
  c.gauss_curv = ScalarField(grid);
  c.area_form = ScalarField(grid);

  const DerivEngine& de = *c.deriv;
  d1_all(de, X, c.tangent1);
  d2_all(de, X, c.tangent2);

  const std::size_t nn = grid.nodes();
  for (std::size_t n = 0; n < nn; ++n) {
    Vec3 t1 = c.tangent1.get(n), t2 = c.tangent2.get(n);
    Mat2 gm;
    gm(0, 0) = dot(t1, t1);
    gm(0, 1) = gm(1, 0) = dot(t1, t2);
    gm(1, 1) = dot(t2, t2);
    c.g.set(n, gm);
    Vec3 cr = cross(t1, t2);
    double l = norm(cr);
    if (!(l > 1e-14)) throw DegenerateMetric("degenerate tangent plane at some node");
    c.normal.set(n, (1.0 / l) * cr);
  }

  // Christoffels from derivatives of the discrete metric.
  FieldBase<4> dg1(grid), dg2(grid);
  d1_all(de, c.g, dg1);
  d2_all(de, c.g, dg2);
  for (std::size_t n = 0; n < nn; ++n) {
    double dg[2][2][2];  // d_k g_{ij}
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        dg[0][i][j] = dg1.at(i * 2 + j, n);
        dg[1][i][j] = dg2.at(i * 2 + j, n);
      }
    Mat2 gi = inverse(c.g.get(n));
    for (int k = 0; k < 2; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          double low = 0;
          for (int m = 0; m < 2; ++m)
            low += gi(k, m) * 0.5 * (dg[i][j][m] + dg[j][i][m] - dg[m][i][j]);
          c.christoffel.at(k * 4 + i * 2 + j, n) = low;
        }
  }

  // II_{jk} = -(d_k nu) . (d_j X), symmetrized against discretization noise.
  EmbVectorField dnu1(grid), dnu2(grid);
  d1_all(de, c.normal, dnu1);
  d2_all(de, c.normal, dnu2);
  for (std::size_t n = 0; n < nn; ++n) {
    Vec3 t[2] = {c.tangent1.get(n), c.tangent2.get(n)};
    Vec3 dn[2] = {dnu1.get(n), dnu2.get(n)};
    Mat2 ii;
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) ii(j, k) = -dot(t[j], dn[k]);
    c.shape_op.set(n, sym(ii));
  }
  finalize_common(c);
  return c;
}

double area_integral(const ChartGeometry& chart, const ScalarField& f) {
  require_same_grid(chart.area_form, f, "area_integral");
  const double w = chart.grid.h1() * chart.grid.h2();
  double s = 0.0;
  for (std::size_t n = 0; n < chart.grid.nodes(); ++n) s += f[n] * chart.area_form[n];
  return s * w;
}

double surface_area(const ChartGeometry& chart) {
  const double w = chart.grid.h1() * chart.grid.h2();
  double s = 0.0;
  for (std::size_t n = 0; n < chart.grid.nodes(); ++n) s += chart.area_form[n];
  return s * w;
}

}  // namespace surfnema
