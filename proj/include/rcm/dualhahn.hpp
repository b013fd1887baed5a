#pragma once

// The orthogonal-polynomial layer: dual Hahn polynomials on the quadratic
// lattice x(s) = s(s+1), Laguerre polynomials, the residual of the
// three-term difference equation both families obey, the change of basis
// from the moment pair (A_p, B_p) to the polynomial pair (X_p, Y_p), the
// transformed transfer matrix in closed and product form, and a polynomial
// 2x2 matrix identity underlying the transformed system.

#include <algorithm>
#include <cmath>

#include "rcm/dd.hpp"
#include "rcm/errors.hpp"
#include "rcm/hypergeom.hpp"
#include "rcm/params.hpp"
#include "rcm/recurrence.hpp"

namespace rcm {

inline constexpr double kTransformSingularTol = 1e-12;
inline constexpr double kTransformCrossTol = 1e-9;

// Lattice data for w_m^{(c)}(x(s), a, b). The parameters a, b, c here are
// lattice parameters, unrelated to the physical a.
template <class Real>
struct DualHahnParams {
  int m = 0;
  Real a{};
  Real b{};
  Real c{};
  Real s{};
};

template <class Real>
Real dual_hahn(const DualHahnParams<Real>& q) {
  if (q.m < 0) fail(Errc::bad_argument, "dual_hahn: m must be >= 0");
  const Real l1 = 1.0 + q.a - q.b;
  const Real l2 = 1.0 + q.a + q.c;
  const Real pref =
      pochhammer(l1, q.m) * pochhammer(l2, q.m) / pochhammer(Real(1.0), q.m);
  return pref * hyp3f2(Real(static_cast<double>(-q.m)), q.a - q.s,
                       q.a + q.s + 1.0, l1, l2);
}

template <class Real>
Real laguerre(int m, Real alpha, Real x) {
  if (m < 0) fail(Errc::bad_argument, "laguerre: m must be >= 0");
  return gamma_ratio(alpha + 1.0, m) / pochhammer(Real(1.0), m) *
         hyp1f1_terminating(m, alpha + 1.0, x);
}

// Residual of the three-term difference equation on the quadratic lattice,
//   sigma(-s-1) nabla_x y_{s+1} + sigma(s) Delta_x y_{s-1}
//     + (lambda Delta_x nabla_x nabla_x1 - sigma(-s-1) nabla_x
//        - sigma(s) Delta_x) y_s = 0,
// with sigma(t) = (t - a)(t + b)(t - c). Evaluated in the regrouped form
// sigma(-s-1) nabla_x (y_{s+1} - y_s) + sigma(s) Delta_x (y_{s-1} - y_s)
// + lambda ... y_s so a constant solution at lambda = 0 gives exactly zero,
// and normalized by the largest of the three additive terms as written.
template <class Real>
double dual_hahn_residual(Real y_prev, Real y_curr, Real y_next, Real s,
                          const DualHahnParams<Real>& q, Real lambda) {
  auto sigma = [&](Real t) { return (t - q.a) * (t + q.b) * (t - q.c); };
  const Real sig_p = sigma(-s - 1.0);
  const Real sig_m = sigma(s);
  const Real dx = 2.0 * (s + 1.0);
  const Real nx = 2.0 * s;
  const Real nx1 = 2.0 * s + 1.0;

  const Real t1 = sig_p * nx * y_next;
  const Real t2 = sig_m * dx * y_prev;
  const Real t3 = (lambda * dx * nx * nx1 - sig_p * nx - sig_m * dx) * y_curr;
  const Real res = sig_p * nx * (y_next - y_curr) +
                   sig_m * dx * (y_prev - y_curr) +
                   lambda * dx * nx * nx1 * y_curr;
  const double scale = std::max({std::abs(to_double(t1)),
                                 std::abs(to_double(t2)),
                                 std::abs(to_double(t3))});
  const double raw = std::abs(to_double(res));
  return scale == 0.0 ? raw : raw / scale;
}

// Same residual on the zero-offset lattice a = b = 0 with c given directly.
template <class Real>
double dual_hahn_residual(Real y_prev, Real y_curr, Real y_next, Real s, Real c,
                          Real lambda) {
  DualHahnParams<Real> q;
  q.a = Real(0.0);
  q.b = Real(0.0);
  q.c = c;
  q.s = s;
  return dual_hahn_residual(y_prev, y_curr, y_next, s, q, lambda);
}

// Change of basis (X_p, Y_p) = T_p (A_p, B_p). Singular exactly when
// mu^2 = a^2 kappa^2, which every n = 0 level satisfies.
template <class Real>
TransferMatrix<Real> transform_T(const DerivedParams<Real>& dp, int p) {
  const Real kap(static_cast<double>(dp.kappa));
  const Real mu = dp.mu, eps = dp.eps, a = dp.a, nu = dp.nu;
  const Real disc = mu * mu - a * a * kap * kap;
  if (to_double(abs(disc)) <=
      kTransformSingularTol *
          std::max(to_double(mu * mu), to_double(a * a * kap * kap)))
    fail(Errc::transform_singular,
         "mu^2 = a^2 kappa^2: change of basis is singular");
  const double pd = static_cast<double>(p);

  // (2 a beta)^p Gamma(2 nu + 1) / Gamma(2 nu + p + 1)
  const Real gr = pow_int(2.0 * a * dp.beta, p) / gamma_ratio(2.0 * nu + 1.0, p);
  const Real pref = gr / (2.0 * a * a);

  TransferMatrix<Real> t;
  t.a = pref * (a * (2.0 * kap + eps * (pd + 1.0)) + 2.0 * mu) / (mu + a * kap);
  t.b = -(pref * (a * (2.0 * eps * kap + pd + 1.0) + 2.0 * eps * mu) /
          (mu + a * kap));
  t.c = -(pref * (a * (2.0 * kap + eps * (pd + 1.0)) - 2.0 * mu) /
          (mu - a * kap));
  t.d = pref * (a * (2.0 * eps * kap + pd + 1.0) - 2.0 * eps * mu) /
        (mu - a * kap);
  t.det = gr * gr * mu * (pd + 1.0) / (a * disc);
  return t;
}

// S~_p in explicit closed form: (X_p, Y_p) = S~_p (X_{p-1}, Y_{p-1}).
template <class Real>
TransferMatrix<Real> transformed_transfer_closed(const DerivedParams<Real>& dp,
                                                 int p) {
  if (p == 0)
    fail(Errc::singular_step, "transformed transfer undefined at p = 0");
  const Real kap(static_cast<double>(dp.kappa));
  const Real mu = dp.mu, eps = dp.eps, a = dp.a, nu = dp.nu;
  const double pd = static_cast<double>(p);
  const Real shift = 2.0 * nu + pd;
  if (to_double(abs(shift)) <=
      kChainGuardTol * std::max(2.0 * to_double(nu), std::abs(pd)))
    fail(Errc::resonant_denominator, "2 nu + p vanishes at this power");
  const Real den = a * a * pd * shift;
  const Real disc = mu * mu - a * a * kap * kap;

  TransferMatrix<Real> s;
  s.a = (-(a * a * pd * pd) + 2.0 * a * eps * mu * pd - 2.0 * disc) / den;
  s.b = 2.0 * disc / den;
  s.c = -(2.0 * disc) / den;
  s.d = (a * a * pd * pd + 2.0 * a * eps * mu * pd + 2.0 * disc) / den;
  s.det = (2.0 * nu - pd) / shift;
  return s;
}

// S~_p as the similarity product T_p S_p T_{p-1}^{-1}, expanded entrywise.
template <class Real>
TransferMatrix<Real> transformed_transfer_product(const TransferMatrix<Real>& tp,
                                                  const TransferMatrix<Real>& tm,
                                                  const TransferMatrix<Real>& s) {
  if (to_double(abs(tm.det)) == 0.0)
    fail(Errc::singular_step, "basis change at p - 1 is not invertible");
  TransferMatrix<Real> out;
  out.a = (tp.a * tm.d * s.a - tp.a * tm.c * s.b + tp.b * tm.d * s.c -
           tp.b * tm.c * s.d) /
          tm.det;
  out.b = (-(tp.a * tm.b * s.a) + tp.a * tm.a * s.b - tp.b * tm.b * s.c +
           tp.b * tm.a * s.d) /
          tm.det;
  out.c = (tp.c * tm.d * s.a - tp.c * tm.c * s.b + tp.d * tm.d * s.c -
           tp.d * tm.c * s.d) /
          tm.det;
  out.d = (-(tp.c * tm.b * s.a) + tp.c * tm.a * s.b - tp.d * tm.b * s.c +
           tp.d * tm.a * s.d) /
          tm.det;
  out.det = s.det * tp.det / tm.det;
  return out;
}

template <class Real>
TransferMatrix<Real> transformed_transfer_product(const DerivedParams<Real>& dp,
                                                  int p) {
  if (p == 0)
    fail(Errc::singular_step, "transformed transfer undefined at p = 0");
  return transformed_transfer_product(transform_T(dp, p),
                                      transform_T(dp, p - 1), s_matrix(dp, p));
}

// Computes S~_p both ways, demands entrywise agreement, returns the closed
// form.
template <class Real>
TransferMatrix<Real> transformed_transfer(const DerivedParams<Real>& dp,
                                          int p) {
  TransferMatrix<Real> closed = transformed_transfer_closed(dp, p);
  TransferMatrix<Real> prod = transformed_transfer_product(dp, p);
  double worst = std::max({rel_err(closed.a, prod.a), rel_err(closed.b, prod.b),
                           rel_err(closed.c, prod.c), rel_err(closed.d, prod.d),
                           rel_err(closed.det, prod.det)});
  if (worst > kTransformCrossTol)
    fail(Errc::internal_mismatch,
         "closed and product forms of the transformed transfer disagree");
  return closed;
}

template <class Real>
struct HahnPair {
  int p = 0;
  Real X{};
  Real Y{};
};

template <class Real>
HahnPair<Real> hahn_initial() {
  return {0, Real(1.0), Real(1.0)};
}

// One step of the transformed system, (X_p, Y_p) from (X_{p-1}, Y_{p-1}).
// Uses the closed entries, which stay regular at n = 0.
template <class Real>
HahnPair<Real> hahn_step(const DerivedParams<Real>& dp, int p,
                         const HahnPair<Real>& prev) {
  if (prev.p != p - 1)
    fail(Errc::bad_argument, "hahn_step: pair is not at p - 1");
  TransferMatrix<Real> s = transformed_transfer_closed(dp, p);
  HahnPair<Real> out;
  out.p = p;
  out.X = s.a * prev.X + s.b * prev.Y;
  out.Y = s.c * prev.X + s.d * prev.Y;
  return out;
}

// X_p and Y_p straight from their terminating series.
template <class Real>
HahnPair<Real> hahn_direct(const DerivedParams<Real>& dp, int p) {
  const double pd = static_cast<double>(p);
  HahnPair<Real> out;
  out.p = p;
  out.X = hyp3f2(Real(1.0 - dp.n), Real(-pd), Real(pd + 1.0),
                 2.0 * dp.nu + 1.0, Real(1.0));
  out.Y = hyp3f2(Real(0.0 - dp.n), Real(-pd), Real(pd + 1.0),
                 2.0 * dp.nu + 1.0, Real(1.0));
  return out;
}

// (X_p, Y_p) = T_p (A_p, B_p).
template <class Real>
HahnPair<Real> hahn_from_moments(const DerivedParams<Real>& dp, int p, Real A,
                                 Real B) {
  TransferMatrix<Real> t = transform_T(dp, p);
  HahnPair<Real> out;
  out.p = p;
  out.X = t.a * A + t.b * B;
  out.Y = t.c * A + t.d * B;
  return out;
}

// X_p as a normalized dual Hahn value: w_{n-1}^{(2 nu)}(p(p+1), 0, 0)
// divided by (2 nu + 1)_{n-1}; Y_p the same with degree n. Requires n >= 1.
template <class Real>
HahnPair<Real> hahn_via_dual_hahn(const DerivedParams<Real>& dp, int p) {
  if (dp.n < 1)
    fail(Errc::bad_argument, "dual Hahn degree n - 1 requires n >= 1");
  DualHahnParams<Real> q;
  q.a = Real(0.0);
  q.b = Real(0.0);
  q.c = 2.0 * dp.nu;
  q.s = Real(static_cast<double>(p));
  HahnPair<Real> out;
  out.p = p;
  q.m = dp.n - 1;
  out.X = dual_hahn(q) / pochhammer(2.0 * dp.nu + 1.0, dp.n - 1);
  q.m = dp.n;
  out.Y = dual_hahn(q) / pochhammer(2.0 * dp.nu + 1.0, dp.n);
  return out;
}

// Entrywise residual of the polynomial 2x2 identity M1 M2 M3 =
// 8 a^2 mu^2 (p+1) R in the free parameters (eps, kappa, nu, p), with
// a = sqrt(1 - eps^2) and mu = sqrt(kappa^2 - nu^2) formed internally.
template <class Real>
double matrix_identity_residual(Real eps, Real kappa, Real nu, Real p) {
  if (!(to_double(eps) > 0.0) || !(to_double(eps) < 1.0))
    fail(Errc::bad_argument, "epsilon must lie in (0, 1)");
  if (!(to_double(kappa * kappa - nu * nu) > 0.0))
    fail(Errc::bad_argument, "kappa^2 must exceed nu^2");
  const Real a = sqrt(Real(1.0) - eps * eps);
  const Real mu = sqrt(kappa * kappa - nu * nu);
  const Real disc = mu * mu - a * a * kappa * kappa;
  if (to_double(abs(disc)) <=
      kTransformSingularTol *
          std::max(to_double(mu * mu), to_double(a * a * kappa * kappa)))
    fail(Errc::transform_singular, "degenerate denominators mu +- a kappa");

  const Real M1[2][2] = {
      {(a * (2.0 * kappa + eps * (p + 1.0)) + 2.0 * mu) / (mu + a * kappa),
       -((a * (2.0 * eps * kappa + p + 1.0) + 2.0 * eps * mu) /
         (mu + a * kappa))},
      {-((a * (2.0 * kappa + eps * (p + 1.0)) - 2.0 * mu) / (mu - a * kappa)),
       (a * (2.0 * eps * kappa + p + 1.0) - 2.0 * eps * mu) /
           (mu - a * kappa)}};
  const Real M2[2][2] = {
      {-(p * (4.0 * nu * nu * eps + 2.0 * kappa * (p + 1.0) +
              eps * p * (2.0 * kappa * eps + p + 1.0))),
       4.0 * mu * mu * (p + 1.0) +
           p * (2.0 * kappa * eps + p) * (2.0 * kappa * eps + p + 1.0)},
      {-(p * (4.0 * nu * nu + 2.0 * kappa * eps * (2.0 * p + 1.0) +
              eps * eps * p * (p + 1.0))),
       4.0 * mu * mu * eps * (p + 1.0) +
           p * (2.0 * kappa * eps + p) * (2.0 * kappa + eps * (p + 1.0))}};
  const Real M3[2][2] = {
      {(mu + a * kappa) * (a * (2.0 * eps * kappa + p) - 2.0 * eps * mu),
       (mu - a * kappa) * (a * (2.0 * eps * kappa + p) + 2.0 * eps * mu)},
      {(mu + a * kappa) * (a * (2.0 * kappa + eps * p) - 2.0 * mu),
       (mu - a * kappa) * (a * (2.0 * kappa + eps * p) + 2.0 * mu)}};
  const Real R[2][2] = {
      {-(a * a * p * p) + 2.0 * a * eps * mu * p - 2.0 * disc, 2.0 * disc},
      {-2.0 * disc, a * a * p * p + 2.0 * a * eps * mu * p + 2.0 * disc}};
  const Real f = 8.0 * a * a * mu * mu * (p + 1.0);

  Real P[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      P[i][j] = M1[i][0] * M2[0][j] + M1[i][1] * M2[1][j];
  // At isolated arguments whole rows of the product collapse (at p = -1 the
  // right side vanishes and, on bound-state parameters, M1 M2 vanishes with
  // it), leaving pure rounding residue on both sides. Each entry is therefore
  // gauged against the magnitudes actually summed while evaluating it, the
  // forward-error scale of the computation, not against the possibly zero
  // results.
  Real Pscale[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      Pscale[i][j] = abs(M1[i][0] * M2[0][j]) + abs(M1[i][1] * M2[1][j]);
  double worst = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Real rhs = f * R[i][j];
      double num =
          std::abs(to_double(P[i][0] * M3[0][j] + P[i][1] * M3[1][j] - rhs));
      double scale = to_double(Pscale[i][0] * abs(M3[0][j]) +
                               Pscale[i][1] * abs(M3[1][j]) + abs(rhs));
      worst = std::max(worst, scale == 0.0 ? num : num / scale);
    }
  return worst;
}

}  // namespace rcm
