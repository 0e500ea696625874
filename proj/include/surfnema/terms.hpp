#pragma once

#include <optional>
#include <string>

#include "surfnema/kinematics.hpp"
#include "surfnema/qtensor.hpp"

namespace surfnema {

enum class Flavor { Material, Jaumann };

inline const char* flavor_name(Flavor f) {
  return f == Flavor::Material ? "material" : "jaumann";
}

/// Physical coefficients of the model. M_tilde is derived, never stored.
struct ModelParams {
  double L = 0.0;      // one-constant elastic coefficient, >= 0
  double a = 0.0;      // thermotropic
  double b = 0.0;
  double c = 1.0;      // > 0
  double kappa = 0.0;  // bending stiffness, >= 0
  double H0 = 0.0;     // spontaneous curvature
  double M = 0.0;      // immobility, >= 0
  double upsilon = 0.0;  // isotropic viscosity, >= 0
  double xi = 0.0;       // anisotropy coefficient
  double rho = 1.0;      // mass density, > 0
  Flavor phi = Flavor::Jaumann;

  double M_tilde() const { return M + 0.5 * upsilon * xi * xi; }
  /// Throws ValidationError on hard violations; returns a warning string for
  /// soft ones (xi outside (-3/2, 3/2)), which strict mode escalates.
  std::string validate(bool strict = false) const;
};

/// One evaluated model term. Absent pieces were not requested / not defined.
struct ConformingParts {
  std::optional<TangentTensor2Field> sigma;
  std::optional<TangentVectorField> varsigma;
  std::optional<TangentVectorField> f;
  std::optional<ScalarField> f_perp;
  std::optional<TangentTensor2Field> h;
  std::optional<TangentVectorField> zeta;
  std::optional<ScalarField> omega;
};

struct TermBundle {
  std::string name;
  std::optional<EmbTensor2Field> Sigma;
  std::optional<EmbVectorField> F;
  std::optional<EmbTensor2Field> H;
  std::optional<double> energy;
  ConformingParts conforming;
};

// --- potential-energy terms -------------------------------------------------

TermBundle elastic_general(const ChartGeometry& c, const ModelParams& p,
                           const EmbTensor2Field& Q);
TermBundle elastic_conforming(const ChartGeometry& c, const ModelParams& p,
                              const TangentTensor2Field& q, const ScalarField& beta);

TermBundle thermotropic_general(const ChartGeometry& c, const ModelParams& p,
                                const EmbTensor2Field& Q);
TermBundle thermotropic_conforming(const ChartGeometry& c, const ModelParams& p,
                                   const TangentTensor2Field& q, const ScalarField& beta);
/// Thermotropic pressure (= energy density) per pipeline.
ScalarField thermotropic_pressure_general(const ChartGeometry& c, const ModelParams& p,
                                          const EmbTensor2Field& Q);
ScalarField thermotropic_pressure_conforming(const ChartGeometry& c, const ModelParams& p,
                                             const TangentTensor2Field& q,
                                             const ScalarField& beta);

TermBundle bending(const ChartGeometry& c, const ModelParams& p);
/// Pointwise normal bending force; shared with hand-evaluated unit tests.
double bending_fperp_pointwise(double H, double K, double lapH, double kappa, double H0);

// --- flux terms --------------------------------------------------------------

/// rateQ must carry the flavor named by `flavor`; mismatch with p.phi throws.
TermBundle immobility_general(const ChartGeometry& c, const ModelParams& p,
                              const EmbTensor2Field& Q, const EmbTensor2Field& rateQ,
                              Flavor flavor);
TermBundle immobility_conforming(const ChartGeometry& c, const ModelParams& p,
                                 const TangentTensor2Field& q, const ScalarField& beta,
                                 const VelocityState& state, const TangentTensor2Field& rate_q,
                                 const ScalarField& betadot, Flavor flavor);

/// Nematic viscous stresses and molecular fields, orders 0..2 separately.
/// `rows` selects the Table representation (Jaumann-form or material-form);
/// both describe the same tensors for consistent rates.
struct NematicViscousGeneral {
  EmbTensor2Field Sigma0, Sigma1, Sigma2, Sigma;  // Sigma = S0 + xi S1 + xi^2 S2
  EmbTensor2Field H1, H2tilde;                    // Table rows
  EmbTensor2Field H;                              // exact total H_NV
};
NematicViscousGeneral nematic_viscous_general(const ChartGeometry& c, const ModelParams& p,
                                              const EmbTensor2Field& Q,
                                              const EmbTensor2Field& DmQ,
                                              const EmbTensor2Field& DjQ,
                                              const DeformationGradients& dg, Flavor rows);

struct NematicViscousConforming {
  TangentTensor2Field sigma0, sigma1, sigma2, sigma;
  TangentTensor2Field h1, h2tilde, h;  // h = exact total tangential h_NV
  ScalarField omega2tilde, omega;      // omega = exact total
};
NematicViscousConforming nematic_viscous_conforming(
    const ChartGeometry& c, const ModelParams& p, const TangentTensor2Field& q,
    const ScalarField& beta, const TangentTensor2Field& qdot, const ScalarField& betadot,
    const TangentTensor2Field& Jq, const VelocityState& state, Flavor rows);

/// I_xi[Q] = Id - xi Q and its smallest eigenvalue per node.
struct AnisotropicMetric {
  EmbTensor2Field I_xi;
  ScalarField min_eig;
};
AnisotropicMetric anisotropic_metric(const EmbTensor2Field& Q, double xi);

/// Sigma_IC = -p Id_S, F_IC = -Grad_C p.
TermBundle inextensibility(const ChartGeometry& c, const ScalarField& p);

/// Div_C((Id + nu (x) nu)(Q H - H Q) Id_S): the gauge-dependent force part
/// attached to a molecular field under the Jaumann gauge.
EmbVectorField jaumann_gauge_force_correction(const ChartGeometry& c, const EmbTensor2Field& Q,
                                              const EmbTensor2Field& H_alpha);

// --- constraint terms --------------------------------------------------------

enum class ConstraintTag { SC, CB, UN, IS, NN, NF };

/// Lagrange parameter, shaped per constraint (only the matching member is read).
struct ConstraintMultiplier {
  std::optional<TangentVectorField> vec;    // SC
  std::optional<ScalarField> scalar;        // CB, NN
  std::optional<EmbTensor2Field> qtensor;   // UN, IS
  std::optional<EmbVectorField> embvec;     // NF
  double beta0 = 0.0;                       // CB target
};

struct ConstraintTerm {
  ConstraintTag gamma;
  std::optional<EmbVectorField> F;
  std::optional<EmbTensor2Field> H;
  std::optional<TangentVectorField> C_vec;
  std::optional<ScalarField> C_scalar;
  std::optional<EmbTensor2Field> C_q;
  std::optional<EmbVectorField> C_emb;
};

ConstraintTerm constraint_general(ConstraintTag gamma, const ChartGeometry& c,
                                  const EmbTensor2Field& Q, const VelocityState& state,
                                  const ConstraintMultiplier& lambda);

/// Table-4 rows on conforming states. UN uses (lambda_q restricted, scalar)
/// as (lambda_UN, lambda_perp_UN); the eta-component is fixed to zero.
struct ConformingConstraintTerm {
  ConstraintTag gamma;
  TangentVectorField f;
  ScalarField f_perp;
  TangentTensor2Field h;
  ScalarField omega;
  std::optional<TangentTensor2Field> C_q;   // UN first component
  std::optional<ScalarField> C_scalar;      // CB / NN / UN second component
  std::optional<TangentVectorField> C_vec;  // NF tangential part
};
ConformingConstraintTerm constraint_conforming(ConstraintTag gamma, const ChartGeometry& c,
                                               const TangentTensor2Field& q,
                                               const ScalarField& beta,
                                               const VelocityState& state,
                                               const TangentTensor2Field& lambda_q,
                                               const ScalarField& lambda_scalar, double beta0);

/// Surface-conforming constraint stress with the multiplier eliminated:
/// varsigma = -2 (q - 3/2 beta Id_S)(zeta_EL + zeta_IM^phi), Sigma = nu (x) varsigma.
struct ScStress {
  TangentVectorField varsigma;
  EmbTensor2Field Sigma;
  TangentVectorField lambda_sc;  // 2 (zeta_EL + zeta_IM^phi)
};
ScStress sc_constraint_stress(const ChartGeometry& c, const ModelParams& p,
                              const TangentTensor2Field& q, const ScalarField& beta,
                              const VelocityState& state, Flavor flavor);

}  // namespace surfnema
