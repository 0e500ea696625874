#pragma once

#include <string>
#include <vector>

#include "surfnema/terms.hpp"

namespace surfnema {

struct EnergyReport {
  double t = 0;
  double E_K = 0, E_EL = 0, E_TH = 0, E_BE = 0, E_tot = 0;
  double R_IM = 0, R_NV = 0;
  double audit_residual = std::nan("");  // filled by dissipation_audit
  double inext_residual = 0;
};

struct TrajectoryRecord {
  std::vector<EnergyReport> samples;
};

/// Energies and flux potentials of a conforming state (v, v_perp, q, beta)
/// with solver-supplied tangential rates. Covers all three special-case
/// solvers (flat: beta = 0, v_perp = 0; gradient flow: v = 0; stationary:
/// v_perp = 0). R_NV always uses the Jaumann representation of the
/// lower-convected rate, independent of params.phi; R_IM uses params.phi.
EnergyReport energies_conforming(const ChartGeometry& c, const ModelParams& p,
                                 const VelocityState& state, const TangentTensor2Field& q,
                                 const ScalarField& beta, const TangentTensor2Field& qdot,
                                 const ScalarField& betadot);

/// Centered-difference dE_tot/dt against -2 (R_IM + R_NV) at interior samples.
/// Fills audit_residual in place and returns the residual series.
struct AuditSummary {
  std::vector<double> residuals;
  double max_residual = 0;
};
AuditSummary dissipation_audit(TrajectoryRecord& record);

/// Leslie coefficients of the conforming uniaxial viscous stress and the
/// Parodi/Leslie relation residuals. `with_immobility_M` amends the final
/// determinant relation (Jaumann immobility shifts alpha_2, alpha_3 by -+ M s^2).
struct LeslieCoefficients {
  double alpha[6] = {0, 0, 0, 0, 0, 0};
  double parodi_residual = 0;  // (a2 + a3) - (a6 - a5)
  double det_residual = 0;     // (a3 - a2)(2 a4 + a5 + a6) - (a6 - a5)^2
  double amended_det = 0;      // same with immobility included
  double amended_det_expected = 0;  // 2 M upsilon s^2 (2 - s xi / 3)^2
  double leslie_values[4] = {0, 0, 0, 0};
  bool leslie_ok[4] = {false, false, false, false};
};
LeslieCoefficients leslie_coefficients(double upsilon, double s, double xi,
                                       double with_immobility_M = 0.0);

/// Numerically checkable toolbox identities, run on seeded random fields.
struct LemmaResult {
  std::string name;
  bool checked = true;  // false: documented assumption, no numeric shadow
  double residual = 0;
  double tolerance = 0;
  bool pass = true;
  std::string note;
};
struct VerifyReport {
  std::vector<LemmaResult> results;
  bool all_pass() const {
    for (const auto& r : results)
      if (r.checked && !r.pass) return false;
    return true;
  }
};
VerifyReport verify_lemmas(unsigned long seed, int n_samples);

}  // namespace surfnema
