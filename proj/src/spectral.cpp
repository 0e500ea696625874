#include "surfnema/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>

namespace surfnema {

namespace {

std::vector<double> wavenumbers(int n, double period, bool zero_nyquist) {
  std::vector<double> k(n);
  const double base = 2.0 * M_PI / period;
  for (int i = 0; i < n; ++i) {
    int m = (i <= n / 2) ? i : i - n;
    if (zero_nyquist && n % 2 == 0 && i == n / 2) m = 0;
    k[i] = base * m;
  }
  return k;
}

}  // namespace

DerivEngine::DerivEngine(const Grid& grid, DerivScheme scheme) : grid_(grid), scheme_(scheme) {
  k1_ = wavenumbers(grid.n1, grid.p1, false);
  k2_ = wavenumbers(grid.n2, grid.p2, false);
  k1d_ = wavenumbers(grid.n1, grid.p1, true);
  k2d_ = wavenumbers(grid.n2, grid.p2, true);
  if (scheme_ == DerivScheme::Spectral) {
    std::vector<double> rbuf(grid.nodes());
    std::vector<fftw_complex> cbuf(spec_size());
    plan_fwd_ = fftw_plan_dft_r2c_2d(grid.n1, grid.n2, rbuf.data(), cbuf.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_bwd_ = fftw_plan_dft_c2r_2d(grid.n1, grid.n2, cbuf.data(), rbuf.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
}

DerivEngine::~DerivEngine() {
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_bwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void DerivEngine::forward(const double* f, std::complex<double>* spec) const {
  std::vector<double> in(f, f + grid_.nodes());
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), in.data(),
                       reinterpret_cast<fftw_complex*>(spec));
}

void DerivEngine::backward(const std::complex<double>* spec, double* f) const {
  std::vector<std::complex<double>> in(spec, spec + spec_size());  // c2r destroys input
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                       reinterpret_cast<fftw_complex*>(in.data()), f);
  const double scale = 1.0 / double(grid_.nodes());
  for (std::size_t i = 0; i < grid_.nodes(); ++i) f[i] *= scale;
}

void DerivEngine::d1(const double* f, double* out) const {
  const int n1 = grid_.n1, n2 = grid_.n2;
  if (scheme_ == DerivScheme::Spectral) {
    std::vector<std::complex<double>> spec(spec_size());
    forward(f, spec.data());
    const int nc = n2 / 2 + 1;
    for (int i = 0; i < n1; ++i) {
      const std::complex<double> ik(0.0, k1d_[i]);
      for (int j = 0; j < nc; ++j) spec[std::size_t(i) * nc + j] *= ik;
    }
    backward(spec.data(), out);
  } else {
    const double c = 1.0 / (12.0 * grid_.h1());
    for (int i = 0; i < n1; ++i) {
      const int ip1 = (i + 1) % n1, ip2 = (i + 2) % n1;
      const int im1 = (i + n1 - 1) % n1, im2 = (i + n1 - 2) % n1;
      for (int j = 0; j < n2; ++j) {
        out[grid_.idx(i, j)] =
            c * (-f[grid_.idx(ip2, j)] + 8.0 * f[grid_.idx(ip1, j)] -
                 8.0 * f[grid_.idx(im1, j)] + f[grid_.idx(im2, j)]);
      }
    }
  }
}

void DerivEngine::d2(const double* f, double* out) const {
  const int n1 = grid_.n1, n2 = grid_.n2;
  if (scheme_ == DerivScheme::Spectral) {
    std::vector<std::complex<double>> spec(spec_size());
    forward(f, spec.data());
    const int nc = n2 / 2 + 1;
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < nc; ++j) {
        spec[std::size_t(i) * nc + j] *= std::complex<double>(0.0, k2d_[j]);
      }
    }
    backward(spec.data(), out);
  } else {
    const double c = 1.0 / (12.0 * grid_.h2());
    for (int i = 0; i < n1; ++i) {
      for (int j = 0; j < n2; ++j) {
        const int jp1 = (j + 1) % n2, jp2 = (j + 2) % n2;
        const int jm1 = (j + n2 - 1) % n2, jm2 = (j + n2 - 2) % n2;
        out[grid_.idx(i, j)] =
            c * (-f[grid_.idx(i, jp2)] + 8.0 * f[grid_.idx(i, jp1)] -
                 8.0 * f[grid_.idx(i, jm1)] + f[grid_.idx(i, jm2)]);
      }
    }
  }
}

}  // namespace surfnema
