#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "surfnema/diagnostics.hpp"
#include "test_util.hpp"

using namespace surfnema;
using namespace surfnema::testutil;

TEST_CASE("leslie coefficients") {
  SUBCASE("spot values at upsilon = s = xi = 1") {
    auto r = leslie_coefficients(1.0, 1.0, 1.0);
    CHECK(r.alpha[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(r.alpha[1] == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
    CHECK(r.alpha[2] == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(r.alpha[3] == doctest::Approx(32.0 / 9.0).epsilon(1e-15));
    CHECK(r.alpha[4] == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
    CHECK(r.alpha[5] == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK(std::fabs(r.parodi_residual) < 1e-15);
    CHECK(r.alpha[1] + r.alpha[2] == doctest::Approx(-5.0 / 3.0).epsilon(1e-15));
    CHECK(r.alpha[5] - r.alpha[4] == doctest::Approx(-5.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("xi = 0 degenerates to isotropic viscosity") {
    auto r = leslie_coefficients(1.3, 0.8, 0.0);
    for (int i : {0, 1, 2, 4, 5}) CHECK(r.alpha[i] == 0.0);
    CHECK(r.alpha[3] == doctest::Approx(2.6).epsilon(1e-15));
    for (int i = 0; i < 4; ++i) CHECK(r.leslie_ok[i]);
  }
  SUBCASE("Parodi and determinant relations at random points") {
    Rng rng(5);
    std::uniform_real_distribution<double> U(-1.4, 1.4);
    std::uniform_real_distribution<double> S(0.1, 1.0);
    for (int t = 0; t < 100; ++t) {
      double u = S(rng), s = S(rng), xi = U(rng);
      auto r = leslie_coefficients(u, s, xi);
      double scale = std::fmax(1.0, u * u);
      CHECK(std::fabs(r.parodi_residual) < 1e-12 * scale);
      CHECK(std::fabs(r.det_residual) < 1e-12 * scale);
      for (int i = 0; i < 4; ++i) CHECK(r.leslie_ok[i]);
    }
  }
  SUBCASE("immobility amendment") {
    auto r = leslie_coefficients(0.7, 0.9, 0.4, 1.3);
    CHECK(r.amended_det == doctest::Approx(r.amended_det_expected).epsilon(1e-12));
    CHECK(r.amended_det >= 0.0);
  }
}

TEST_CASE("dissipation audit bookkeeping") {
  SUBCASE("too few samples rejected") {
    TrajectoryRecord rec;
    rec.samples.resize(2);
    CHECK_THROWS_AS(dissipation_audit(rec), TooFewSamples);
  }
  SUBCASE("synthetic exponential trajectory") {
    // E(t) = exp(-2t), R = exp(-2t): residual is the FD truncation error
    TrajectoryRecord rec;
    double dt = 1e-3;
    for (int i = 0; i <= 10; ++i) {
      EnergyReport s;
      s.t = i * dt;
      s.E_tot = std::exp(-2.0 * s.t);
      s.R_IM = std::exp(-2.0 * s.t);
      s.R_NV = 0.0;
      rec.samples.push_back(s);
    }
    auto au = dissipation_audit(rec);
    CHECK(au.max_residual < 1e-5);
    CHECK(std::isnan(rec.samples.front().audit_residual));
    CHECK(!std::isnan(rec.samples[1].audit_residual));
  }
}

TEST_CASE("energies of the zero state") {
  auto c = build_chart(SurfaceKind::embedded_torus(2.0, 1.0), 16, 16);
  ModelParams p;
  p.kappa = 0.7;
  p.H0 = 0.1;
  p.L = 1.0;
  p.M = 1.0;
  VelocityState vs(c.grid);
  TangentTensor2Field q(c.grid), qdot(c.grid);
  ScalarField beta(c.grid), betadot(c.grid);
  EnergyReport er = energies_conforming(c, p, vs, q, beta, qdot, betadot);
  CHECK(er.E_K == 0.0);
  CHECK(er.E_EL == 0.0);
  CHECK(er.E_TH == 0.0);
  CHECK(er.R_IM == 0.0);
  CHECK(er.R_NV == 0.0);
  CHECK(er.E_BE > 0.0);  // geometry-only
  // flat chart with H0 = 0 has no bending energy
  auto cf = build_chart(SurfaceKind::flat_torus(2 * M_PI, 2 * M_PI), 16, 16);
  ModelParams p2;
  p2.kappa = 0.7;
  VelocityState vs2(cf.grid);
  TangentTensor2Field q2(cf.grid);
  ScalarField b2(cf.grid);
  EnergyReport e2 = energies_conforming(cf, p2, vs2, q2, b2, q2, b2);
  CHECK(e2.E_BE == 0.0);
}

TEST_CASE("R_NV reduces to the isotropic potential at xi = 0") {
  auto c = build_chart(SurfaceKind::embedded_torus(2.0, 1.0), 24, 24);
  ModelParams p;
  p.upsilon = 0.8;
  p.xi = 0.0;
  p.M = 1.0;
  Rng rng(7);
  VelocityState vs(c.grid);
  vs.v = random_smooth_vector(c.grid, rng);
  vs.v_perp = random_smooth_scalar(c.grid, rng);
  TangentTensor2Field q = random_smooth_tq(c, rng), qdot(c.grid);
  ScalarField beta(c.grid), betadot(c.grid);
  EnergyReport er = energies_conforming(c, p, vs, q, beta, qdot, betadot);
  // (upsilon/4) || G + G^T ||^2
  DeformationGradients dg = deformation_gradients(c, vs);
  TangentTensor2Field twoS(c.grid);
  for (std::size_t n = 0; n < c.grid.nodes(); ++n) twoS.set(n, 2.0 * dg.S.get(n));
  double want = 0.25 * p.upsilon * l2_inner(c, twoS, twoS);
  CHECK(rel_err(er.R_NV, want) < 1e-12);
}

TEST_CASE("lemma verification suite") {
  VerifyReport rep = verify_lemmas(42, 300);
  for (const auto& r : rep.results) {
    INFO(r.name, " residual ", r.residual, " tol ", r.tolerance);
    if (r.checked) CHECK(r.pass);
  }
  CHECK(rep.all_pass());
  // the two documented-only entries are reported but not checked
  int documented = 0;
  for (const auto& r : rep.results)
    if (!r.checked) ++documented;
  CHECK(documented == 2);
}
