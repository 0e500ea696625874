#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "surfnema/fields.hpp"

namespace surfnema {

enum class DerivScheme { Spectral, Fd4 };

/// Nominal convergence order used by refinement checks. Spectral convergence
/// is super-algebraic; 6 is the floor we assert against on refinement pairs.
inline int scheme_order(DerivScheme s) { return s == DerivScheme::Spectral ? 6 : 4; }

/// Partial derivatives of periodic grid functions along the chart axes.
/// Spectral: FFT differentiation (Nyquist mode zeroed for odd derivatives).
/// Fd4: 4th-order centered differences with periodic wrap.
class DerivEngine {
 public:
  DerivEngine(const Grid& grid, DerivScheme scheme);
  ~DerivEngine();
  DerivEngine(const DerivEngine&) = delete;
  DerivEngine& operator=(const DerivEngine&) = delete;

  const Grid& grid() const { return grid_; }
  DerivScheme scheme() const { return scheme_; }

  void d1(const double* f, double* out) const;
  void d2(const double* f, double* out) const;

  // Spectral-only helpers used by the flat solvers. Layout of spec arrays:
  // (n1) x (n2/2+1) complex, row-major, unnormalized forward transform.
  std::size_t spec_size() const { return std::size_t(grid_.n1) * (grid_.n2 / 2 + 1); }
  void forward(const double* f, std::complex<double>* spec) const;
  void backward(const std::complex<double>* spec, double* f) const;  // normalizes by 1/(n1*n2)
  /// Wavenumber along axis a for spectral row i / column j.
  double k1(int i) const { return k1_[i]; }
  double k2(int j) const { return k2_[j]; }
  /// k used for first derivatives (Nyquist zeroed).
  double k1d(int i) const { return k1d_[i]; }
  double k2d(int j) const { return k2d_[j]; }

 private:
  Grid grid_;
  DerivScheme scheme_;
  std::vector<double> k1_, k2_, k1d_, k2d_;
  void* plan_fwd_ = nullptr;  // fftw_plan, kept opaque here
  void* plan_bwd_ = nullptr;
};

// Convenience wrappers: differentiate every component of a field.
template <int NC>
void d1_all(const DerivEngine& de, const FieldBase<NC>& f, FieldBase<NC>& out) {
  for (int c = 0; c < NC; ++c) de.d1(f.comp(c), out.comp(c));
}
template <int NC>
void d2_all(const DerivEngine& de, const FieldBase<NC>& f, FieldBase<NC>& out) {
  for (int c = 0; c < NC; ++c) de.d2(f.comp(c), out.comp(c));
}

}  // namespace surfnema
