#pragma once

#include <optional>

#include "surfnema/calculus.hpp"

namespace surfnema {

/// Unique split Q = q + eta (x) nu + nu (x) eta + beta (nu (x) nu - Id_S/2).
struct QDecomposition {
  TangentTensor2Field q;  // tangential Q-tensor part (symmetric, surface-traceless)
  TangentVectorField eta;
  ScalarField beta;
};

QDecomposition decompose(const ChartGeometry& c, const EmbTensor2Field& Q);
EmbTensor2Field recompose(const ChartGeometry& c, const QDecomposition& d);
/// Conforming ansatz Q = q + beta (nu (x) nu - Id_S/2) (eta = 0).
EmbTensor2Field conforming_compose(const ChartGeometry& c, const TangentTensor2Field& q,
                                   const ScalarField& beta);

/// B(Q) = Q^4 - (5/6) Tr(Q^2) Q^2 + (1/9) (Tr Q^2)^2 Id; zero iff Q uniaxial.
EmbTensor2Field biaxiality_polynomial(const EmbTensor2Field& Q);
/// b(Q) = (Tr Q^2)^3 - 6 (Tr Q^3)^2 >= 0, zero iff uniaxial.
ScalarField biaxiality_measure(const EmbTensor2Field& Q);

/// Max relative residuals of Tr Q^4, Tr Q^6, Tr Q^8 against their
/// (Tr Q^2, Tr Q^3) closed forms over the field.
struct TracePowerReport {
  double r4 = 0, r6 = 0, r8 = 0;
  double max() const { return std::fmax(r4, std::fmax(r6, r8)); }
};
TracePowerReport trace_power_identities(const EmbTensor2Field& Q);

/// Q = s (d (x) d - Id/3) for a unit director field d.
EmbTensor2Field uniaxial(const ScalarField& s, const EmbVectorField& d);

/// Thermotropic equilibrium data: the uniaxial scalar order S* and the
/// stable normal eigenvalue beta0 = -S*/3 (requires b^2 - 24ac >= 0).
struct ThermotropicRoots {
  double S_star = 0;
  double beta0_stable = 0;
};
std::optional<ThermotropicRoots> thermotropic_roots(double a, double b, double c);

/// Uniaxiality classifier |B(Q)| / max(TrQ^2, eps)^2 < 1e-8 per node.
bool is_uniaxial(const Mat3& Q);

// Pointwise helpers on single matrices (shared with tests/oracles).
Mat3 biaxiality_polynomial(const Mat3& Q);
double biaxiality_measure(const Mat3& Q);

}  // namespace surfnema
