#pragma once

#include <cstddef>
#include <string>

namespace surfnema::kernels {

// Pointwise tensor-algebra kernels over structure-of-arrays buffers.
// A 3x3 tensor field is 9 planes of length n laid out back to back
// (plane c starts at base + c*n, component index A*3+B). All kernels are
// vertical: node i of the output depends only on node i of the inputs.
//
// Two implementations exist: a scalar reference and an AVX2+FMA variant.
// The active one is picked at runtime from CPUID; SURFNEMA_KERNELS=scalar
// or =avx2 forces a choice (used by the equivalence tests).

struct Ops {
  // C = A * B (3x3 matrix product per node).
  void (*mat3_mul)(std::size_t n, const double* A, const double* B, double* C);
  // out = A : B (full contraction per node).
  void (*mat3_ddot)(std::size_t n, const double* A, const double* B, double* out);
  // t2 = Tr(Q^2), t3 = Tr(Q^3) for symmetric Q. Either output may be null.
  void (*trace_powers)(std::size_t n, const double* Q, double* t2, double* t3);
  // Q = sym(A) - (Tr A/3) Id.
  void (*project_qtensor)(std::size_t n, const double* A, double* Q);
  // H = -2 (a Q + b (Q^2 - Tr(Q^2)/3 Id) + c Tr(Q^2) Q) for symmetric traceless Q.
  void (*thermotropic_field)(std::size_t n, const double* Q, double a, double b, double c,
                             double* H);
  // B = Q^4 - (5/6) Tr(Q^2) Q^2 + (1/9) (Tr Q^2)^2 Id.
  void (*biaxiality_poly)(std::size_t n, const double* Q, double* B);
  // b = (Tr Q^2)^3 - 6 (Tr Q^3)^2.
  void (*biaxiality_measure)(std::size_t n, const double* Q, double* b);
  // out = a*x + b*y over one plane.
  void (*axpby)(std::size_t n, double a, const double* x, double b, const double* y, double* out);
  // Plane dot product and max-abs reductions (deterministic lane order).
  double (*dot)(std::size_t n, const double* x, const double* y);
  double (*max_abs)(std::size_t n, const double* x);
};

enum class Isa { Scalar, Avx2 };

const Ops& scalar_ops();
bool avx2_supported();
const Ops& avx2_ops();  // valid only if avx2_supported()

/// Active dispatch table (CPUID + SURFNEMA_KERNELS override, resolved once).
const Ops& ops();
Isa active_isa();
std::string isa_name(Isa);
/// Test hook: force the active table.
void force_isa(Isa);

}  // namespace surfnema::kernels
