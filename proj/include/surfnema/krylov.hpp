#pragma once

#include <functional>
#include <vector>

namespace surfnema {

struct KrylovResult {
  int iters = 0;
  double residual = 0;
  bool converged = false;
};

using LinOp = std::function<void(const std::vector<double>&, std::vector<double>&)>;
using DotFn = std::function<double(const std::vector<double>&, const std::vector<double>&)>;

/// Conjugate gradients with a caller-supplied inner product (the discrete
/// operators here are self-adjoint in metric-weighted products up to
/// spectral aliasing). x is the warm start and the result.
KrylovResult conjugate_gradient(const LinOp& A, const DotFn& dot, const std::vector<double>& b,
                                std::vector<double>& x, double rel_tol, int max_iters);

/// BiCGSTAB fallback for mildly nonsymmetric cases.
KrylovResult bicgstab(const LinOp& A, const DotFn& dot, const std::vector<double>& b,
                      std::vector<double>& x, double rel_tol, int max_iters);

/// Preconditioned CG; Minv must be SPD in the same inner product.
KrylovResult pcg(const LinOp& A, const LinOp& Minv, const DotFn& dot,
                 const std::vector<double>& b, std::vector<double>& x, double rel_tol,
                 int max_iters);

}  // namespace surfnema
