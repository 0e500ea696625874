#include "surfnema/krylov.hpp"

#include <cmath>

namespace surfnema {

namespace {

void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

KrylovResult conjugate_gradient(const LinOp& A, const DotFn& dot, const std::vector<double>& b,
                                std::vector<double>& x, double rel_tol, int max_iters) {
  const std::size_t n = b.size();
  std::vector<double> r(n), p(n), Ap(n);
  A(x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  p = r;
  double rr = dot(r, r);
  const double b2 = std::fmax(dot(b, b), 1e-300);
  KrylovResult res;
  for (int it = 0; it < max_iters; ++it) {
    res.residual = std::sqrt(rr / b2);
    if (res.residual < rel_tol) {
      res.converged = true;
      res.iters = it;
      return res;
    }
    A(p, Ap);
    double pAp = dot(p, Ap);
    if (!(std::fabs(pAp) > 0)) break;
    double alpha = rr / pAp;
    axpy(x, alpha, p);
    axpy(r, -alpha, Ap);
    double rr_new = dot(r, r);
    double beta = rr_new / rr;
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * p[i];
    rr = rr_new;
  }
  res.residual = std::sqrt(rr / b2);
  res.converged = res.residual < rel_tol;
  res.iters = max_iters;
  return res;
}

KrylovResult pcg(const LinOp& A, const LinOp& Minv, const DotFn& dot,
                 const std::vector<double>& b, std::vector<double>& x, double rel_tol,
                 int max_iters) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), Ap(n);
  A(x, Ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
  Minv(r, z);
  p = z;
  double rz = dot(r, z);
  const double b2 = std::fmax(dot(b, b), 1e-300);
  KrylovResult res;
  for (int it = 0; it < max_iters; ++it) {
    res.residual = std::sqrt(dot(r, r) / b2);
    if (res.residual < rel_tol) {
      res.converged = true;
      res.iters = it;
      return res;
    }
    A(p, Ap);
    double pAp = dot(p, Ap);
    if (!(std::fabs(pAp) > 0)) break;
    double alpha = rz / pAp;
    axpy(x, alpha, p);
    axpy(r, -alpha, Ap);
    Minv(r, z);
    double rz_new = dot(r, z);
    double beta = rz_new / rz;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    rz = rz_new;
  }
  res.residual = std::sqrt(dot(r, r) / b2);
  res.converged = res.residual < rel_tol;
  res.iters = max_iters;
  return res;
}

KrylovResult bicgstab(const LinOp& A, const DotFn& dot, const std::vector<double>& b,
                      std::vector<double>& x, double rel_tol, int max_iters) {
  const std::size_t n = b.size();
  std::vector<double> r(n), r0(n), p(n), v(n), s(n), t(n);
  A(x, v);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - v[i];
  r0 = r;
  double rho = 1, alpha = 1, omega = 1;
  std::fill(p.begin(), p.end(), 0.0);
  std::fill(v.begin(), v.end(), 0.0);
  const double b2 = std::fmax(dot(b, b), 1e-300);
  KrylovResult res;
  for (int it = 0; it < max_iters; ++it) {
    double rr = dot(r, r);
    res.residual = std::sqrt(rr / b2);
    if (res.residual < rel_tol) {
      res.converged = true;
      res.iters = it;
      return res;
    }
    double rho_new = dot(r0, r);
    if (std::fabs(rho_new) < 1e-300) break;
    double beta = (rho_new / rho) * (alpha / omega);
    for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
    A(p, v);
    alpha = rho_new / dot(r0, v);
    for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
    A(s, t);
    double tt = dot(t, t);
    omega = tt > 0 ? dot(t, s) / tt : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i] + omega * s[i];
      r[i] = s[i] - omega * t[i];
    }
    rho = rho_new;
    if (std::fabs(omega) < 1e-300) break;
  }
  res.residual = std::sqrt(dot(r, r) / b2);
  res.converged = res.residual < rel_tol;
  res.iters = max_iters;
  return res;
}

}  // namespace surfnema
