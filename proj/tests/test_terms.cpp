#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "surfnema/terms.hpp"
#include "test_util.hpp"

using namespace surfnema;
using namespace surfnema::testutil;

namespace {

ChartGeometry flat64() { return build_chart(SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI), 64, 64); }
ChartGeometry torus(int n) { return build_chart(SurfaceKind::embedded_torus(2.0, 1.0), n, n); }

double field_scale(const EmbTensor2Field& f) { return std::fmax(1.0, max_abs(f)); }

double max_diff(const EmbTensor2Field& a, const EmbTensor2Field& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::fmax(m, std::fabs(a.data[i] - b.data[i]));
  return m;
}
double max_diff(const TangentTensor2Field& a, const TangentTensor2Field& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::fmax(m, std::fabs(a.data[i] - b.data[i]));
  return m;
}
double max_diff(const EmbVectorField& a, const EmbVectorField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.data.size(); ++i)
    m = std::fmax(m, std::fabs(a.data[i] - b.data[i]));
  return m;
}

}  // namespace

TEST_CASE("elastic term") {
  ModelParams p;
  p.L = 0.8;
  SUBCASE("spatially constant Q on flat chart: everything zero") {
    auto c = flat64();
    EmbTensor2Field Q(c.grid);
    Mat3 m{};
    m(0, 0) = 0.2;
    m(1, 1) = -0.5;
    m(2, 2) = 0.3;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) Q.set(n, m);
    TermBundle t = elastic_general(c, p, Q);
    CHECK(std::fabs(*t.energy) < 1e-20);
    CHECK(max_abs(*t.H) < 1e-11);
    CHECK(max_abs(*t.Sigma) < 1e-11);
    CHECK(max_abs(*t.F) < 1e-11);
  }
  SUBCASE("constant conforming state on torus: curvature-driven rows") {
    auto c = torus(48);
    const double beta0 = -0.42;
    TangentTensor2Field q(c.grid);
    ScalarField beta(c.grid);
    beta.fill(beta0);
    TermBundle t = elastic_conforming(c, p, q, beta);
    double err = 0;
    ScalarGradField dH = grad_scalar(c, c.mean_curv);
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      double H = c.mean_curv[n], K = c.gauss_curv[n];
      // omega_EL = -3 L beta0 (H^2 - 2K)
      err = std::fmax(err, std::fabs((*t.conforming.omega)[n] +
                                     3.0 * p.L * beta0 * (H * H - 2.0 * K)));
      // h_EL = 3 L beta0 H Pi_QS(B)
      Mat2 gi = c.ginv_at(n);
      Mat2 Bup = mul(gi, mul(c.II_at(n), gi));
      Mat2 want = (3.0 * p.L * beta0 * H) * (Bup - 0.5 * H * gi);
      Mat2 got = t.conforming.h->get(n);
      for (int k = 0; k < 4; ++k) err = std::fmax(err, std::fabs(got.a[k] - want.a[k]));
      // zeta_EL = -(3L/2) beta0 grad H
      Vec2 gh{gi(0, 0) * dH.at(0, n) + gi(0, 1) * dH.at(1, n),
              gi(1, 0) * dH.at(0, n) + gi(1, 1) * dH.at(1, n)};
      for (int i = 0; i < 2; ++i)
        err = std::fmax(err,
                        std::fabs(t.conforming.zeta->at(i, n) + 1.5 * p.L * beta0 * gh[i]));
    }
    CHECK(err < 1e-9);
    // nonzero: curvature drives the state even though fields are constant
    CHECK(max_abs(*t.conforming.zeta) > 1e-3);
  }
  SUBCASE("H_EL is the negative variational derivative of E_EL") {
    auto c = torus(24);
    Rng rng(1);
    ModelParams pp;
    pp.L = 0.7;
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    EmbTensor2Field Psi = random_smooth_qfield(c, rng);
    TermBundle t = elastic_general(c, pp, Q);
    double pair = l2_inner(c, *t.H, Psi);
    double best = 1e99;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
      EmbTensor2Field Qp(c.grid), Qm(c.grid);
      for (std::size_t i = 0; i < Q.data.size(); ++i) {
        Qp.data[i] = Q.data[i] + eps * Psi.data[i];
        Qm.data[i] = Q.data[i] - eps * Psi.data[i];
      }
      double Ep = *elastic_general(c, pp, Qp).energy;
      double Em = *elastic_general(c, pp, Qm).energy;
      double fd = -(Ep - Em) / (2.0 * eps);
      best = std::fmin(best, rel_err(pair, fd));
    }
    CHECK(best < 1e-7);
  }
  SUBCASE("general vs conforming pipelines agree on conforming states") {
    auto c = torus(48);
    Rng rng(2);
    TangentTensor2Field q = random_smooth_tq(c, rng);
    ScalarField beta = random_smooth_scalar(c.grid, rng);
    EmbTensor2Field Q = conforming_compose(c, q, beta);
    TermBundle tg = elastic_general(c, p, Q);
    TermBundle tc = elastic_conforming(c, p, q, beta);
    auto d = decompose(c, *tg.H);
    double scale = field_scale(*tg.H);
    CHECK(max_diff(d.q, *tc.conforming.h) / scale < 1e-7);
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      err = std::fmax(err, std::fabs(d.beta[n] - (*tc.conforming.omega)[n]));
      Vec2 zg = d.eta.get(n), zc = tc.conforming.zeta->get(n);
      err = std::fmax(err, std::fabs(zg[0] - zc[0]));
      err = std::fmax(err, std::fabs(zg[1] - zc[1]));
    }
    CHECK(err / scale < 1e-7);
    // stress: general Sigma is tangential-Q valued; restrict and compare
    TangentTensor2Field sg = restrict_tensor2(c, *tg.Sigma);
    CHECK(max_diff(sg, *tc.conforming.sigma) / std::fmax(1.0, max_abs(sg)) < 1e-7);
    CHECK(rel_err(*tg.energy, *tc.energy) < 1e-12);
  }
}

TEST_CASE("thermotropic term") {
  ModelParams p;
  p.a = -5.0;
  p.b = 6.0;
  p.c = 3.0;
  SUBCASE("zero state") {
    auto c = flat64();
    EmbTensor2Field Q(c.grid);
    TermBundle t = thermotropic_general(c, p, Q);
    CHECK(max_abs(*t.H) == 0.0);
    CHECK(*t.energy == 0.0);
  }
  SUBCASE("uniaxial equilibrium kills the molecular field") {
    auto c = torus(16);
    auto roots = thermotropic_roots(p.a, p.b, p.c);
    REQUIRE(roots.has_value());
    ScalarField s(c.grid);
    s.fill(roots->S_star);
    EmbTensor2Field Q = uniaxial(s, c.normal);
    TermBundle t = thermotropic_general(c, p, Q);
    CHECK(max_abs(*t.H) < 1e-10);
  }
  SUBCASE("pressure pipelines agree on conforming states") {
    auto c = torus(24);
    Rng rng(3);
    TangentTensor2Field q = random_smooth_tq(c, rng);
    ScalarField beta = random_smooth_scalar(c.grid, rng);
    EmbTensor2Field Q = conforming_compose(c, q, beta);
    ScalarField pg = thermotropic_pressure_general(c, p, Q);
    ScalarField pc = thermotropic_pressure_conforming(c, p, q, beta);
    double err = 0, scale = std::fmax(1.0, max_abs(pg));
    for (std::size_t n = 0; n < c.grid.nodes(); ++n)
      err = std::fmax(err, std::fabs(pg[n] - pc[n]));
    CHECK(err / scale < 1e-12);
  }
  SUBCASE("molecular-field pipelines agree on conforming states") {
    auto c = torus(24);
    Rng rng(4);
    TangentTensor2Field q = random_smooth_tq(c, rng);
    ScalarField beta = random_smooth_scalar(c.grid, rng);
    EmbTensor2Field Q = conforming_compose(c, q, beta);
    TermBundle tg = thermotropic_general(c, p, Q);
    TermBundle tc = thermotropic_conforming(c, p, q, beta);
    auto d = decompose(c, *tg.H);
    double scale = field_scale(*tg.H);
    CHECK(max_diff(d.q, *tc.conforming.h) / scale < 1e-12);
    CHECK(max_abs(d.eta) / scale < 1e-12);
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n)
      err = std::fmax(err, std::fabs(d.beta[n] - (*tc.conforming.omega)[n]));
    CHECK(err / scale < 1e-12);
  }
  SUBCASE("H_TH is the negative variational derivative of E_TH") {
    auto c = torus(16);
    Rng rng(5);
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    EmbTensor2Field Psi = random_smooth_qfield(c, rng);
    TermBundle t = thermotropic_general(c, p, Q);
    double pair = l2_inner(c, *t.H, Psi);
    double best = 1e99;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
      EmbTensor2Field Qp(c.grid), Qm(c.grid);
      for (std::size_t i = 0; i < Q.data.size(); ++i) {
        Qp.data[i] = Q.data[i] + eps * Psi.data[i];
        Qm.data[i] = Q.data[i] - eps * Psi.data[i];
      }
      double Ep = *thermotropic_general(c, p, Qp).energy;
      double Em = *thermotropic_general(c, p, Qm).energy;
      best = std::fmin(best, rel_err(pair, -(Ep - Em) / (2 * eps)));
    }
    CHECK(best < 1e-7);
  }
  SUBCASE("F_TH = Grad_C p_TH = Div_C Sigma_TH at scheme order") {
    auto c = torus(32);
    Rng rng(6);
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    TermBundle t = thermotropic_general(c, p, Q);
    EmbVectorField div = divC_tensor2(c, *t.Sigma);
    CHECK(max_diff(*t.F, div) / std::fmax(1.0, max_abs(*t.F)) < 1e-7);
  }
}

TEST_CASE("bending term") {
  SUBCASE("flat chart with H0 = 0: force vanishes") {
    auto c = flat64();
    ModelParams p;
    p.kappa = 1.3;
    TermBundle t = bending(c, p);
    CHECK(max_abs(*t.F) < 1e-12);
    CHECK(*t.energy == 0.0);
  }
  SUBCASE("round sphere is Willmore-stationary (hand evaluation)") {
    // H = 2/R, K = 1/R^2, lap H = 0
    double R = 1.7, kappa = 0.9;
    double f = bending_fperp_pointwise(2.0 / R, 1.0 / (R * R), 0.0, kappa, 0.0);
    CHECK(std::fabs(f) < 1e-15);
  }
  SUBCASE("F_BE = Div_C Sigma_BE at scheme order on the torus") {
    auto c = torus(48);
    ModelParams p;
    p.kappa = 1.0;
    p.H0 = 0.3;
    TermBundle t = bending(c, p);
    EmbVectorField div = divC_tensor2(c, *t.Sigma);
    CHECK(max_diff(*t.F, div) / std::fmax(1.0, max_abs(*t.F)) < 1e-7);
  }
  SUBCASE("normal-perturbation FD of E_BE matches f_perp") {
    // dE/deps for X -> X + eps phi nu equals -int f_perp phi dS.
    auto ca = torus(48);
    ModelParams p;
    p.kappa = 1.0;
    p.H0 = 0.0;
    Rng rng(7);
    ScalarField phi = random_smooth_scalar(ca.grid, rng, 2);
    TermBundle t = bending(ca, p);
    ScalarField prod(ca.grid);
    for (std::size_t n = 0; n < ca.grid.nodes(); ++n)
      prod[n] = (*t.conforming.f_perp)[n] * phi[n];
    double pair = area_integral(ca, prod);
    double best = 1e99;
    for (double eps : {1e-4, 1e-5, 1e-6}) {
      auto ebend = [&](double sgn) {
        EmbVectorField X = ca.X;
        for (std::size_t n = 0; n < ca.grid.nodes(); ++n)
          X.set(n, X.get(n) + (sgn * eps * phi[n]) * ca.nu_at(n));
        ChartGeometry cp = build_chart_from_positions(ca.grid, X, DerivScheme::Spectral);
        ScalarField dens(cp.grid);
        for (std::size_t n = 0; n < cp.grid.nodes(); ++n) {
          double d = cp.mean_curv[n] - p.H0;
          dens[n] = 0.5 * p.kappa * d * d;
        }
        return area_integral(cp, dens);
      };
      double fd = -(ebend(1.0) - ebend(-1.0)) / (2.0 * eps);
      best = std::fmin(best, rel_err(pair, fd));
    }
    CHECK(best < 1e-5);
  }
}

TEST_CASE("immobility term") {
  auto c = torus(24);
  Rng rng(8);
  ModelParams p;
  p.M = 1.4;
  SUBCASE("zero rate gives zero term") {
    p.phi = Flavor::Jaumann;
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    EmbTensor2Field R(c.grid);
    TermBundle t = immobility_general(c, p, Q, R, Flavor::Jaumann);
    CHECK(max_abs(*t.H) == 0.0);
    CHECK(max_abs(*t.Sigma) == 0.0);
  }
  SUBCASE("material stress vanishes for any rate") {
    p.phi = Flavor::Material;
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    EmbTensor2Field R = random_smooth_qfield(c, rng);
    TermBundle t = immobility_general(c, p, Q, R, Flavor::Material);
    CHECK(max_abs(*t.Sigma) == 0.0);
    CHECK(max_abs(*t.H) > 0.0);
  }
  SUBCASE("flavor mismatch rejected") {
    p.phi = Flavor::Material;
    EmbTensor2Field Q(c.grid), R(c.grid);
    CHECK_THROWS_AS(immobility_general(c, p, Q, R, Flavor::Jaumann), RateFlavorMismatch);
  }
  SUBCASE("conforming Jaumann stress is skew") {
    p.phi = Flavor::Jaumann;
    VelocityState st(c.grid);
    TangentTensor2Field q = random_smooth_tq(c, rng);
    TangentTensor2Field Jq = random_smooth_tq(c, rng);
    ScalarField beta = random_smooth_scalar(c.grid, rng), bd(c.grid);
    TermBundle t = immobility_conforming(c, p, q, beta, st, Jq, bd, Flavor::Jaumann);
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Mat2 s = t.conforming.sigma->get(n);
      // skew in the metric sense: sigma_{ij} = -sigma_{ji}; for contravariant
      // components with symmetric metric this is plain antisymmetry of g sig g
      Mat2 g = c.g_at(n);
      Mat2 low = mul(g, mul(s, g));
      err = std::fmax(err, std::fabs(low(0, 1) + low(1, 0)));
      err = std::fmax(err, std::fabs(low(0, 0)));
      err = std::fmax(err, std::fabs(low(1, 1)));
    }
    CHECK(err < 1e-13);
  }
  SUBCASE("general vs conforming on conforming states (both flavors)") {
    VelocityState st(c.grid);
    st.v = random_smooth_vector(c.grid, rng);
    st.v_perp = random_smooth_scalar(c.grid, rng);
    TangentTensor2Field q = random_smooth_tq(c, rng);
    ScalarField beta = random_smooth_scalar(c.grid, rng);
    TangentTensor2Field qdot = random_smooth_tq(c, rng);
    ScalarField betadot = random_smooth_scalar(c.grid, rng);
    EmbTensor2Field Q = conforming_compose(c, q, beta);
    EmbTensor2Field DmQ = conforming_material_rate(c, q, beta, qdot, betadot, st);
    EmbTensor2Field DjQ = jaumann_from_material(c, DmQ, st, Q);
    TangentTensor2Field Jq = jaumann_from_material_q(c, qdot, st, q);

    for (Flavor f : {Flavor::Material, Flavor::Jaumann}) {
      p.phi = f;
      const EmbTensor2Field& R = (f == Flavor::Material) ? DmQ : DjQ;
      const TangentTensor2Field& r = (f == Flavor::Material) ? qdot : Jq;
      TermBundle tg = immobility_general(c, p, Q, R, f);
      TermBundle tc = immobility_conforming(c, p, q, beta, st, r, betadot, f);
      auto d = decompose(c, *tg.H);
      double scale = std::fmax(1.0, field_scale(*tg.H));
      CHECK(max_diff(d.q, *tc.conforming.h) / scale < 1e-9);
      double err = 0;
      for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
        err = std::fmax(err, std::fabs(d.beta[n] - (*tc.conforming.omega)[n]));
        err = std::fmax(err, std::fabs(d.eta.at(0, n) - tc.conforming.zeta->at(0, n)));
        err = std::fmax(err, std::fabs(d.eta.at(1, n) - tc.conforming.zeta->at(1, n)));
      }
      CHECK(err / scale < 1e-9);
      // stress: tangential block matches, normal blocks as claimed
      TangentTensor2Field sg = restrict_tensor2(c, *tg.Sigma);
      CHECK(max_diff(sg, *tc.conforming.sigma) / scale < 1e-9);
      if (f == Flavor::Jaumann) {
        // nu . Sigma vanishes on conforming states
        double nerr = 0;
        for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
          Vec3 nu = c.nu_at(n);
          Vec3 left{};
          Mat3 m = tg.Sigma->get(n);
          for (int B = 0; B < 3; ++B) {
            double s = 0;
            for (int A = 0; A < 3; ++A) s += nu[A] * m(A, B);
            left[B] = s;
          }
          nerr = std::fmax(nerr, norm(left));
        }
        CHECK(nerr / scale < 1e-9);
      }
    }
  }
}

TEST_CASE("nematic viscous term") {
  auto c = torus(24);
  Rng rng(9);
  ModelParams p;
  p.upsilon = 0.9;
  SUBCASE("xi = 0 reduces to isotropic viscosity") {
    p.xi = 0.0;
    VelocityState st(c.grid);
    st.v = random_smooth_vector(c.grid, rng);
    st.v_perp = random_smooth_scalar(c.grid, rng);
    auto dg = deformation_gradients(c, st);
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    EmbTensor2Field R1 = random_smooth_qfield(c, rng);
    EmbTensor2Field R2 = jaumann_from_material(c, R1, st, Q);
    auto nv = nematic_viscous_general(c, p, Q, R1, R2, dg, Flavor::Jaumann);
    EmbTensor2Field Se = embed_tensor2(c, dg.S);
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Mat3 want = (2.0 * p.upsilon) * Se.get(n);
      Mat3 got = nv.Sigma.get(n);
      err = std::fmax(err, std::sqrt(ddot(got - want, got - want)));
    }
    CHECK(err < 1e-12);
    CHECK(max_abs(nv.H) == 0.0);
  }
  SUBCASE("all-zero inputs give zero") {
    p.xi = 0.7;
    VelocityState st(c.grid);
    auto dg = deformation_gradients(c, st);
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    EmbTensor2Field R(c.grid);
    auto nv = nematic_viscous_general(c, p, Q, R, R, dg, Flavor::Jaumann);
    CHECK(max_abs(nv.Sigma) < 1e-14);
    CHECK(max_abs(nv.H) < 1e-14);
  }
  SUBCASE("Jaumann-form vs material-form rows agree on consistent rates") {
    p.xi = 0.8;
    VelocityState st(c.grid);
    st.v = random_smooth_vector(c.grid, rng);
    st.v_perp = random_smooth_scalar(c.grid, rng);
    auto dg = deformation_gradients(c, st);
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    EmbTensor2Field DmQ = random_smooth_qfield(c, rng);
    EmbTensor2Field DjQ = jaumann_from_material(c, DmQ, st, Q);
    auto nvJ = nematic_viscous_general(c, p, Q, DmQ, DjQ, dg, Flavor::Jaumann);
    auto nvM = nematic_viscous_general(c, p, Q, DmQ, DjQ, dg, Flavor::Material);
    double scale = std::fmax(field_scale(nvJ.Sigma1), field_scale(nvJ.Sigma2));
    CHECK(max_diff(nvJ.Sigma1, nvM.Sigma1) / scale < 1e-11);
    CHECK(max_diff(nvJ.Sigma2, nvM.Sigma2) / scale < 1e-11);
    CHECK(max_diff(nvJ.Sigma, nvM.Sigma) / scale < 1e-11);
    CHECK(max_diff(nvJ.H, nvM.H) / scale < 1e-11);
    // H2tilde rows differ by the rate commutator; the combination
    // H2tilde - (upsilon/2) D_Phi Q is representation independent.
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Mat3 aJ = nvJ.H2tilde.get(n) - (0.5 * p.upsilon) * DjQ.get(n);
      Mat3 aM = nvM.H2tilde.get(n) - (0.5 * p.upsilon) * DmQ.get(n);
      err = std::fmax(err, std::sqrt(ddot(aJ - aM, aJ - aM)));
    }
    CHECK(err / scale < 1e-11);
  }
  SUBCASE("conforming rows: J vs m and against the general pipeline") {
    p.xi = 0.6;
    VelocityState st(c.grid);
    st.v = random_smooth_vector(c.grid, rng);
    st.v_perp = random_smooth_scalar(c.grid, rng);
    TangentTensor2Field q = random_smooth_tq(c, rng);
    ScalarField beta = random_smooth_scalar(c.grid, rng);
    TangentTensor2Field qdot = random_smooth_tq(c, rng);
    ScalarField betadot = random_smooth_scalar(c.grid, rng);
    TangentTensor2Field Jq = jaumann_from_material_q(c, qdot, st, q);
    auto cj = nematic_viscous_conforming(c, p, q, beta, qdot, betadot, Jq, st, Flavor::Jaumann);
    auto cm = nematic_viscous_conforming(c, p, q, beta, qdot, betadot, Jq, st, Flavor::Material);
    double scale = std::fmax(1.0, max_abs(cj.sigma));
    CHECK(max_diff(cj.sigma1, cm.sigma1) / scale < 1e-11);
    CHECK(max_diff(cj.sigma2, cm.sigma2) / scale < 1e-11);
    CHECK(max_diff(cj.h, cm.h) / scale < 1e-11);
    double werr = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n)
      werr = std::fmax(werr, std::fabs(cj.omega[n] - cm.omega[n]));
    CHECK(werr / scale < 1e-11);

    // against the general pipeline on the conforming state
    EmbTensor2Field Q = conforming_compose(c, q, beta);
    EmbTensor2Field DmQ = conforming_material_rate(c, q, beta, qdot, betadot, st);
    EmbTensor2Field DjQ = jaumann_from_material(c, DmQ, st, Q);
    auto dg = deformation_gradients(c, st);
    auto nv = nematic_viscous_general(c, p, Q, DmQ, DjQ, dg, Flavor::Jaumann);
    TangentTensor2Field sg = restrict_tensor2(c, nv.Sigma);
    CHECK(max_diff(sg, cj.sigma) / scale < 1e-9);
    // normal-left part of the general stress vanishes on conforming states
    double nerr = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Vec3 nu = c.nu_at(n);
      Mat3 m = nv.Sigma.get(n);
      Vec3 left{};
      for (int B = 0; B < 3; ++B) {
        double s = 0;
        for (int A = 0; A < 3; ++A) s += nu[A] * m(A, B);
        left[B] = s;
      }
      nerr = std::fmax(nerr, norm(left));
    }
    CHECK(nerr / scale < 1e-9);
    auto d = decompose(c, nv.H);
    CHECK(max_diff(d.q, cj.h) / scale < 1e-9);
    CHECK(max_abs(d.eta) / scale < 1e-9);
    double oerr = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n)
      oerr = std::fmax(oerr, std::fabs(d.beta[n] - cj.omega[n]));
    CHECK(oerr / scale < 1e-9);
  }
}

TEST_CASE("anisotropic metric") {
  Grid g{8, 8, 1, 1};
  SUBCASE("xi = 0 has unit eigenvalues") {
    EmbTensor2Field Q(g);
    Rng rng(10);
    for (std::size_t n = 0; n < g.nodes(); ++n) Q.set(n, random_qtensor_mat(rng));
    auto am = anisotropic_metric(Q, 0.0);
    for (std::size_t n = 0; n < g.nodes(); ++n)
      CHECK(am.min_eig[n] == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("boundary at xi = 3/2 for extremal eigenvalue 2/3") {
    EmbTensor2Field Q(g);
    Mat3 m{};
    m(0, 0) = 2.0 / 3.0;
    m(1, 1) = -1.0 / 3.0;
    m(2, 2) = -1.0 / 3.0;
    for (std::size_t n = 0; n < g.nodes(); ++n) Q.set(n, m);
    auto am = anisotropic_metric(Q, 1.5);
    CHECK(std::fabs(am.min_eig[0]) < 1e-13);
  }
  SUBCASE("uniaxial s=1 at xi=1: min eigenvalue 1/3") {
    EmbTensor2Field Q(g);
    Mat3 m{};
    m(0, 0) = 2.0 / 3.0;
    m(1, 1) = -1.0 / 3.0;
    m(2, 2) = -1.0 / 3.0;
    for (std::size_t n = 0; n < g.nodes(); ++n) Q.set(n, m);
    auto am = anisotropic_metric(Q, 1.0);
    CHECK(am.min_eig[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("inextensibility term") {
  SUBCASE("constant pressure on flat chart: no force") {
    auto c = flat64();
    ScalarField p(c.grid);
    p.fill(2.5);
    TermBundle t = inextensibility(c, p);
    CHECK(max_abs(*t.F) < 1e-12);
  }
  SUBCASE("constant pressure on torus: -H p nu") {
    auto c = torus(24);
    ScalarField p(c.grid);
    p.fill(1.5);
    TermBundle t = inextensibility(c, p);
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Vec3 want = (-1.5 * c.mean_curv[n]) * c.nu_at(n);
      err = std::fmax(err, norm(t.F->get(n) - want));
    }
    CHECK(err < 1e-9);
  }
  SUBCASE("pressure force is adjoint to Div_C") {
    auto c = torus(32);
    Rng rng(11);
    ScalarField p = random_smooth_scalar(c.grid, rng);
    EmbVectorField W = random_smooth_embvec(c.grid, rng);
    TermBundle t = inextensibility(c, p);
    double lhs = l2_inner(c, *t.F, W);
    double rhs = l2_inner(c, p, divC_vector(c, W));
    CHECK(std::fabs(lhs - rhs) < 1e-7 * std::fmax(1.0, std::fabs(lhs)));
  }
}

TEST_CASE("jaumann gauge force correction") {
  auto c = torus(24);
  Rng rng(12);
  EmbTensor2Field Q = random_smooth_qfield(c, rng);
  SUBCASE("zero molecular field") {
    EmbTensor2Field H(c.grid);
    CHECK(max_abs(jaumann_gauge_force_correction(c, Q, H)) == 0.0);
  }
  SUBCASE("coaxial molecular field commutes") {
    // H = polynomial in Q commutes with Q
    EmbTensor2Field H(c.grid);
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Mat3 q = Q.get(n);
      H.set(n, project_qtensor(mul(q, q)));
    }
    CHECK(max_abs(jaumann_gauge_force_correction(c, Q, H)) < 1e-10);
  }
  SUBCASE("corrections cancel for molecular fields summing to zero") {
    EmbTensor2Field H1 = random_smooth_qfield(c, rng);
    EmbTensor2Field H2 = random_smooth_qfield(c, rng);
    EmbTensor2Field H3(c.grid);
    for (std::size_t i = 0; i < H3.data.size(); ++i) H3.data[i] = -H1.data[i] - H2.data[i];
    EmbVectorField c1 = jaumann_gauge_force_correction(c, Q, H1);
    EmbVectorField c2 = jaumann_gauge_force_correction(c, Q, H2);
    EmbVectorField c3 = jaumann_gauge_force_correction(c, Q, H3);
    double err = 0;
    for (std::size_t i = 0; i < c1.data.size(); ++i)
      err = std::fmax(err, std::fabs(c1.data[i] + c2.data[i] + c3.data[i]));
    CHECK(err < 1e-9);
  }
}

TEST_CASE("constraint terms") {
  auto c = torus(24);
  Rng rng(13);
  VelocityState st(c.grid);
  st.v = random_smooth_vector(c.grid, rng);
  SUBCASE("C_SC vanishes on conforming states, nonzero otherwise") {
    TangentTensor2Field q = random_smooth_tq(c, rng);
    ScalarField beta = random_smooth_scalar(c.grid, rng);
    EmbTensor2Field Qc = conforming_compose(c, q, beta);
    ConstraintMultiplier lam;
    lam.vec = random_smooth_vector(c.grid, rng);
    auto t = constraint_general(ConstraintTag::SC, c, Qc, st, lam);
    CHECK(max_abs(*t.C_vec) < 1e-12);
    EmbTensor2Field Qg = random_smooth_qfield(c, rng);
    auto t2 = constraint_general(ConstraintTag::SC, c, Qg, st, lam);
    CHECK(max_abs(*t2.C_vec) > 1e-3);
  }
  SUBCASE("C_CB vanishes iff beta = beta0") {
    TangentTensor2Field q = random_smooth_tq(c, rng);
    ScalarField beta(c.grid);
    beta.fill(-0.25);
    EmbTensor2Field Q = conforming_compose(c, q, beta);
    ConstraintMultiplier lam;
    lam.scalar = random_smooth_scalar(c.grid, rng);
    lam.beta0 = -0.25;
    auto t = constraint_general(ConstraintTag::CB, c, Q, st, lam);
    CHECK(max_abs(*t.C_scalar) < 1e-12);
    lam.beta0 = 0.5;
    auto t2 = constraint_general(ConstraintTag::CB, c, Q, st, lam);
    CHECK(max_abs(*t2.C_scalar) > 1e-3);
  }
  SUBCASE("H_CB is trace-free with H_CB(nu,nu) = -(2/3) lambda") {
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    ConstraintMultiplier lam;
    lam.scalar = random_smooth_scalar(c.grid, rng);
    auto t = constraint_general(ConstraintTag::CB, c, Q, st, lam);
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Mat3 m = t.H->get(n);
      err = std::fmax(err, std::fabs(trace(m)));
      Vec3 nu = c.nu_at(n);
      err = std::fmax(err,
                      std::fabs(dot(nu, mul(m, nu)) + (2.0 / 3.0) * (*lam.scalar)[n]));
    }
    CHECK(err < 1e-13);
  }
  SUBCASE("C_UN vanishes on tangential-uniaxial conforming states") {
    // q from a unit tangential director with 2 Tr q^2 = 9 beta^2
    ScalarField s(c.grid);
    s.fill(0.8);
    EmbVectorField dvec(c.grid);
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Vec3 t1 = c.t1_at(n);
      dvec.set(n, (1.0 / norm(t1)) * t1);
    }
    EmbTensor2Field Q = uniaxial(s, dvec);
    auto d = decompose(c, Q);
    auto t = constraint_conforming(ConstraintTag::UN, c, d.q, d.beta, st,
                                   random_smooth_tq(c, rng), random_smooth_scalar(c.grid, rng),
                                   0.0);
    CHECK(max_abs(*t.C_q) < 1e-12);
    CHECK(max_abs(*t.C_scalar) < 1e-12);
    // generic violating state
    TangentTensor2Field q = random_smooth_tq(c, rng);
    ScalarField beta = random_smooth_scalar(c.grid, rng);
    auto t2 = constraint_conforming(ConstraintTag::UN, c, q, beta, st,
                                    random_smooth_tq(c, rng),
                                    random_smooth_scalar(c.grid, rng), 0.0);
    CHECK(max_abs(*t2.C_scalar) > 1e-3);
  }
  SUBCASE("general H_UN agrees with the conforming rows on uniaxial conforming states") {
    ScalarField s(c.grid);
    s.fill(0.9);
    EmbVectorField dvec(c.grid);
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Vec3 t1 = c.t1_at(n);
      dvec.set(n, (1.0 / norm(t1)) * t1);
    }
    EmbTensor2Field Q = uniaxial(s, dvec);
    auto dq = decompose(c, Q);
    // conforming multiplier (eta-part zero by the ledger decision)
    TangentTensor2Field lq = random_smooth_tq(c, rng);
    ScalarField lperp = random_smooth_scalar(c.grid, rng);
    EmbTensor2Field Lam = conforming_compose(c, lq, lperp);
    ConstraintMultiplier lam;
    lam.qtensor = Lam;
    auto tg = constraint_general(ConstraintTag::UN, c, Q, st, lam);
    auto tc =
        constraint_conforming(ConstraintTag::UN, c, dq.q, dq.beta, st, lq, lperp, 0.0);
    auto d = decompose(c, *tg.H);
    double scale = std::fmax(1.0, field_scale(*tg.H));
    CHECK(max_diff(d.q, tc.h) / scale < 1e-10);
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n)
      err = std::fmax(err, std::fabs(d.beta[n] - tc.omega[n]));
    CHECK(err / scale < 1e-10);
  }
  SUBCASE("NN / NF / IS forms") {
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    ConstraintMultiplier lam;
    lam.scalar = random_smooth_scalar(c.grid, rng);
    auto tn = constraint_general(ConstraintTag::NN, c, Q, st, lam);
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n)
      err = std::fmax(err,
                      norm(tn.F->get(n) - (*lam.scalar)[n] * c.nu_at(n)));
    CHECK(err < 1e-14);
    CHECK(max_abs(*tn.C_scalar) == max_abs(st.v_perp));

    ConstraintMultiplier lam2;
    lam2.embvec = random_smooth_embvec(c.grid, rng);
    auto tf = constraint_general(ConstraintTag::NF, c, Q, st, lam2);
    CHECK(max_diff(*tf.F, *lam2.embvec) == 0.0);

    ConstraintMultiplier lam3;
    lam3.qtensor = random_smooth_qfield(c, rng);
    auto ti = constraint_general(ConstraintTag::IS, c, Q, st, lam3);
    CHECK(max_diff(*ti.H, *lam3.qtensor) == 0.0);
    CHECK(max_diff(*ti.C_q, Q) == 0.0);
  }
  SUBCASE("unknown multiplier shape rejected") {
    EmbTensor2Field Q = random_smooth_qfield(c, rng);
    ConstraintMultiplier empty;
    CHECK_THROWS_AS(constraint_general(ConstraintTag::SC, c, Q, st, empty), ShapeMismatch);
  }
}

TEST_CASE("sc stress with eliminated multiplier") {
  auto c = torus(32);
  Rng rng(14);
  ModelParams p;
  p.L = 0.5;
  p.M = 0.7;
  VelocityState st(c.grid);
  st.v = random_smooth_vector(c.grid, rng);
  st.v_perp = random_smooth_scalar(c.grid, rng);
  TangentTensor2Field q = random_smooth_tq(c, rng);
  ScalarField beta = random_smooth_scalar(c.grid, rng);
  SUBCASE("lambda_SC equals twice the non-conforming forces") {
    // Jaumann flavor: zeta_IM = 0, so lambda = 2 zeta_EL
    auto sj = sc_constraint_stress(c, p, q, beta, st, Flavor::Jaumann);
    TermBundle el = elastic_conforming(c, p, q, beta);
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n)
      for (int i = 0; i < 2; ++i)
        err = std::fmax(err, std::fabs(sj.lambda_sc.at(i, n) -
                                       2.0 * el.conforming.zeta->at(i, n)));
    CHECK(err < 1e-12);
  }
  SUBCASE("stress is nu (x) tangential and matches the multiplier identity") {
    auto sm = sc_constraint_stress(c, p, q, beta, st, Flavor::Material);
    double err = 0;
    for (std::size_t n = 0; n < c.grid.nodes(); ++n) {
      Mat3 m = sm.Sigma.get(n);
      // right-tangential: Sigma nu = 0; left part along nu only
      Vec3 nu = c.nu_at(n);
      err = std::fmax(err, norm(mul(m, nu)));
      Mat3 tang = mul(c.idS_at(n), m);
      err = std::fmax(err, std::sqrt(ddot(tang, tang)));
    }
    CHECK(err < 1e-12);
  }
}
