#pragma once

// Recurrence routes for the moment triples: the 2x2 transfer matrix linking
// (A_{p-1}, B_{p-1}) to (A_p, B_p), explicit single-step formulas in both
// directions, separated three-term recurrences for A and B alone (explicit
// polynomial form and four generic eliminations), and the reflection sending
// p to -p-3. Everything here reproduces the closed forms; the comparisons
// live in the verification module.

#include <algorithm>
#include <cmath>

#include "rcm/closedform.hpp"
#include "rcm/dd.hpp"
#include "rcm/errors.hpp"
#include "rcm/hypergeom.hpp"
#include "rcm/params.hpp"

namespace rcm {

// Relative guard for denominators that are differences of same-order terms.
inline constexpr double kChainGuardTol = 1e-9;

template <class Real>
struct TransferMatrix {
  Real a{};
  Real b{};
  Real c{};
  Real d{};
  Real det{};  // (4 nu^2 - p^2) p / ((2 a beta)^2 (p + 1)), kept closed form
};

template <class Real>
struct MomentPair {
  Real A{};
  Real B{};
};

// (A_p, B_p) = S_p (A_{p-1}, B_{p-1}).
template <class Real>
TransferMatrix<Real> s_matrix(const DerivedParams<Real>& dp, int p) {
  if (p == -1) fail(Errc::singular_step, "transfer matrix undefined at p = -1");
  const Real kap(static_cast<double>(dp.kappa));
  const Real mu = dp.mu, eps = dp.eps, a = dp.a, nu = dp.nu;
  const double pd = static_cast<double>(p);
  const Real den = 4.0 * a * a * (pd + 1.0) * dp.beta * mu;

  TransferMatrix<Real> s;
  s.a = -(pd * (4.0 * nu * nu * eps + 2.0 * kap * (pd + 1.0) +
                eps * pd * (2.0 * kap * eps + pd + 1.0))) /
        den;
  s.b = (4.0 * mu * mu * (pd + 1.0) +
         pd * (2.0 * kap * eps + pd) * (2.0 * kap * eps + pd + 1.0)) /
        den;
  s.c = -(pd * (4.0 * nu * nu + 2.0 * kap * eps * (2.0 * pd + 1.0) +
                eps * eps * pd * (pd + 1.0))) /
        den;
  s.d = (4.0 * mu * mu * eps * (pd + 1.0) +
         pd * (2.0 * kap * eps + pd) * (2.0 * kap + eps * (pd + 1.0))) /
        den;
  Real twoab = 2.0 * a * dp.beta;
  s.det = (4.0 * nu * nu - pd * pd) * pd / (twoab * twoab * (pd + 1.0));
  return s;
}

// One step up: (A_{p+1}, B_{p+1}) from (A_p, B_p), coefficients written out
// at the shifted index rather than read from s_matrix. C from the linear
// relation.
template <class Real>
MomentTriple<Real> step_up(const DerivedParams<Real>& dp, int p, Real A,
                           Real B) {
  if (p == -2) fail(Errc::singular_step, "step to p = -1 is undefined");
  if (!is_direct(p + 1, dp))
    fail(Errc::inadmissible_power, "target power is inadmissible");
  const Real kap(static_cast<double>(dp.kappa));
  const Real mu = dp.mu, eps = dp.eps, a = dp.a, nu = dp.nu;
  const double pd = static_cast<double>(p);
  const Real den = 4.0 * a * a * (pd + 2.0) * dp.beta * mu;

  MomentTriple<Real> m;
  m.p = p + 1;
  m.A = (-((pd + 1.0) * (4.0 * nu * nu * eps + 2.0 * kap * (pd + 2.0) +
                         eps * (pd + 1.0) * (2.0 * kap * eps + pd + 2.0))) *
             A +
         (4.0 * mu * mu * (pd + 2.0) + (pd + 1.0) * (2.0 * kap * eps + pd + 1.0) *
                                           (2.0 * kap * eps + pd + 2.0)) *
             B) /
        den;
  m.B = (-((pd + 1.0) * (4.0 * nu * nu + 2.0 * kap * eps * (2.0 * pd + 3.0) +
                         eps * eps * (pd + 1.0) * (pd + 2.0))) *
             A +
         (4.0 * mu * mu * eps * (pd + 2.0) +
          (pd + 1.0) * (2.0 * kap * eps + pd + 1.0) *
              (2.0 * kap + eps * (pd + 2.0))) *
             B) /
        den;
  m.C = c_from_linear_relation(dp, p + 1, m.A, m.B);
  return m;
}

// One step down: (A_{p-1}, B_{p-1}) from (A_p, B_p), the explicit inverse of
// the transfer matrix. The B row carries no 1/p factor.
template <class Real>
MomentTriple<Real> step_down(const DerivedParams<Real>& dp, int p, Real A,
                             Real B) {
  if (p == 0) fail(Errc::singular_step, "step to p = -1 is undefined");
  if (!is_direct(p - 1, dp))
    fail(Errc::inadmissible_power, "target power is inadmissible");
  const Real kap(static_cast<double>(dp.kappa));
  const Real mu = dp.mu, eps = dp.eps, nu = dp.nu;
  const double pd = static_cast<double>(p);
  const Real res = 4.0 * nu * nu - pd * pd;
  if (to_double(abs(res)) <=
      kChainGuardTol * std::max(4.0 * to_double(nu * nu), pd * pd))
    fail(Errc::resonant_denominator, "4 nu^2 - p^2 vanishes at this power");

  MomentTriple<Real> m;
  m.p = p - 1;
  m.A = (dp.beta * (4.0 * mu * mu * eps * (pd + 1.0) +
                    pd * (2.0 * kap * eps + pd) * (2.0 * kap + eps * (pd + 1.0))) *
             A -
         dp.beta * (4.0 * mu * mu * (pd + 1.0) +
                    pd * (2.0 * kap * eps + pd) * (2.0 * kap * eps + pd + 1.0)) *
             B) /
        (mu * res * pd);
  m.B = (dp.beta * (4.0 * nu * nu + 2.0 * kap * eps * (2.0 * pd + 1.0) +
                    eps * eps * pd * (pd + 1.0)) *
             A -
         dp.beta * (4.0 * nu * nu * eps + 2.0 * kap * (pd + 1.0) +
                    eps * pd * (2.0 * kap * eps + pd + 1.0)) *
             B) /
        (mu * res);
  m.C = c_from_linear_relation(dp, p - 1, m.A, m.B);
  return m;
}

// The coefficient polynomials of the separated explicit three-term forms.
template <class Real>
Real poly_p(Real kap, Real eps, Real nu, Real p) {
  Real e2 = eps * eps, e3 = eps * eps * eps;
  Real k2 = kap * kap, n2 = nu * nu;
  return 2.0 * eps * p * p * p * p + (8.0 * kap * e2 + 5.0 * eps) * p * p * p +
         (8.0 * k2 * e3 + 8.0 * k2 * eps + 20.0 * kap * e2 - 4.0 * kap -
          8.0 * n2 * eps + 3.0 * eps) *
             p * p +
         (12.0 * k2 * e3 + 20.0 * k2 * eps + 16.0 * kap * e2 - 10.0 * kap -
          20.0 * n2 * eps) *
             p +
         4.0 * k2 * e3 + 8.0 * k2 * eps + 4.0 * kap * e2 - 4.0 * kap -
         12.0 * n2 * eps;
}

template <class Real>
Real poly_q(Real kap, Real eps, Real nu, Real p) {
  Real e2 = eps * eps, n2 = nu * nu;
  return 2.0 * e2 * p * p * p + (7.0 * e2 + 8.0 * kap * eps - 2.0) * p * p +
         (8.0 * n2 + 7.0 * e2 + 16.0 * kap * eps - 4.0) * p + 12.0 * n2 +
         2.0 * e2 + 6.0 * kap * eps - 2.0;
}

namespace detail {

template <class Real>
void guard_denominator(Real den, Real t1, Real t2, const char* what) {
  double scale = std::max(
      {std::abs(to_double(t1)), std::abs(to_double(t2)), 1e-300});
  if (std::abs(to_double(den)) <= kChainGuardTol * scale)
    fail(Errc::chain_breakdown, what);
}

template <class Real>
Real guarded_entry(Real e, Real maxmag, const char* what) {
  if (to_double(abs(e)) <= kChainGuardTol * to_double(maxmag))
    fail(Errc::chain_breakdown, what);
  return e;
}

}  // namespace detail

// A_{p+1} from A_p and A_{p-1} alone, explicit polynomial coefficients.
template <class Real>
Real three_term_A(const DerivedParams<Real>& dp, int p, Real A0, Real Am1) {
  if (p == -2) fail(Errc::singular_step, "step to p = -1 is undefined");
  const Real kap(static_cast<double>(dp.kappa));
  const Real mu = dp.mu, eps = dp.eps, a = dp.a, nu = dp.nu;
  const double pd = static_cast<double>(p);
  const Real t1 = 4.0 * mu * mu * (pd + 1.0);
  const Real t2 = pd * (2.0 * kap * eps + pd) * (2.0 * kap * eps + pd + 1.0);
  const Real denA = t1 + t2;
  detail::guard_denominator(denA, t1, t2, "vanishing A-chain denominator");
  Real twoab = 2.0 * a * dp.beta;
  return mu * poly_p(kap, eps, nu, Real(pd)) /
             (a * a * dp.beta * denA * (pd + 2.0)) * A0 -
         (4.0 * nu * nu - pd * pd) *
             (4.0 * mu * mu * (pd + 2.0) +
              (pd + 1.0) * (2.0 * kap * eps + pd + 1.0) *
                  (2.0 * kap * eps + pd + 2.0)) *
             pd / (twoab * twoab * denA * (pd + 2.0)) * Am1;
}

// B_{p+1} from B_p and B_{p-1} alone.
template <class Real>
Real three_term_B(const DerivedParams<Real>& dp, int p, Real B0, Real Bm1) {
  if (p == -2) fail(Errc::singular_step, "step to p = -1 is undefined");
  const Real kap(static_cast<double>(dp.kappa));
  const Real mu = dp.mu, eps = dp.eps, a = dp.a, nu = dp.nu;
  const double pd = static_cast<double>(p);
  const Real t1 = 4.0 * nu * nu + 2.0 * kap * eps * (2.0 * pd + 1.0);
  const Real t2 = eps * eps * pd * (pd + 1.0);
  const Real denB = t1 + t2;
  detail::guard_denominator(denB, t1, t2, "vanishing B-chain denominator");
  Real twoab = 2.0 * a * dp.beta;
  return eps * mu * poly_q(kap, eps, nu, Real(pd)) /
             (a * a * dp.beta * denB * (pd + 2.0)) * B0 -
         (4.0 * nu * nu - pd * pd) *
             (4.0 * nu * nu + 2.0 * kap * eps * (2.0 * pd + 3.0) +
              eps * eps * (pd + 1.0) * (pd + 2.0)) *
             (pd + 1.0) / (twoab * twoab * denB * (pd + 2.0)) * Bm1;
}

// The same recurrences assembled from transfer-matrix entries at p and p+1.
template <class Real>
Real three_term_A_generic(const TransferMatrix<Real>& s0,
                          const TransferMatrix<Real>& s1, Real A0, Real Am1) {
  Real maxmag = max3(max3(abs(s0.a), abs(s0.b), abs(s0.c)), abs(s0.d), Real(0.0));
  Real b0 = detail::guarded_entry(s0.b, maxmag, "vanishing entry b_p");
  return (s1.a + s1.b / b0 * s0.d) * A0 - s1.b / b0 * s0.det * Am1;
}

template <class Real>
Real three_term_B_generic(const TransferMatrix<Real>& s0,
                          const TransferMatrix<Real>& s1, Real B0, Real Bm1) {
  Real maxmag = max3(max3(abs(s0.a), abs(s0.b), abs(s0.c)), abs(s0.d), Real(0.0));
  Real c0 = detail::guarded_entry(s0.c, maxmag, "vanishing entry c_p");
  return (s1.d + s1.c / c0 * s0.a) * B0 - s1.c / c0 * s0.det * Bm1;
}

template <class Real>
Real three_term_A_generic(const DerivedParams<Real>& dp, int p, Real A0,
                          Real Am1) {
  return three_term_A_generic(s_matrix(dp, p), s_matrix(dp, p + 1), A0, Am1);
}

template <class Real>
Real three_term_B_generic(const DerivedParams<Real>& dp, int p, Real B0,
                          Real Bm1) {
  return three_term_B_generic(s_matrix(dp, p), s_matrix(dp, p + 1), B0, Bm1);
}

// Four equivalent eliminations of the transfer step into vector three-term
// recurrences u_{p+1} = M_p u_p + N_p u_{p-1}, distinguished by which pair
// of entries of S_p they divide by.
enum class VectorFamily { diag_bc, diag_ad_offdiag, offdiag_ad, offdiag_bc };

inline const char* vector_family_name(VectorFamily f) {
  switch (f) {
    case VectorFamily::diag_bc: return "diag-bc";
    case VectorFamily::diag_ad_offdiag: return "diag-ad-offdiag";
    case VectorFamily::offdiag_ad: return "offdiag-ad";
    case VectorFamily::offdiag_bc: return "offdiag-bc";
  }
  return "unknown";
}

inline constexpr VectorFamily kVectorFamilies[] = {
    VectorFamily::diag_bc, VectorFamily::diag_ad_offdiag,
    VectorFamily::offdiag_ad, VectorFamily::offdiag_bc};

template <class Real>
struct Mat2 {
  Real a{}, b{}, c{}, d{};
};

template <class Real>
struct FamilySplit {
  Mat2<Real> M;
  Mat2<Real> N;
};

// The (M_p, N_p) pair of a family. Each satisfies S_{p+1} = M_p + N_p
// S_p^{-1} exactly; that reconstruction is one of the harness checks.
template <class Real>
FamilySplit<Real> vector_family_matrices(const TransferMatrix<Real>& s0,
                                         const TransferMatrix<Real>& s1,
                                         VectorFamily f) {
  Real maxmag = max3(max3(abs(s0.a), abs(s0.b), abs(s0.c)), abs(s0.d), Real(0.0));
  auto g = [&](Real e, const char* what) {
    return detail::guarded_entry(e, maxmag, what);
  };
  FamilySplit<Real> out;
  switch (f) {
    case VectorFamily::diag_bc: {
      Real b0 = g(s0.b, "vanishing entry b_p");
      Real c0 = g(s0.c, "vanishing entry c_p");
      out.M.a = s1.a + s1.b * s0.d / b0;
      out.M.d = s1.d + s1.c * s0.a / c0;
      out.N.a = -(s0.det * (s1.b / b0));
      out.N.d = -(s0.det * (s1.c / c0));
      break;
    }
    case VectorFamily::diag_ad_offdiag: {
      Real a0 = g(s0.a, "vanishing entry a_p");
      Real d0 = g(s0.d, "vanishing entry d_p");
      out.M.a = s1.a + s1.b * s0.c / a0;
      out.M.d = s1.d + s1.c * s0.b / d0;
      out.N.b = s0.det * (s1.b / a0);
      out.N.c = s0.det * (s1.c / d0);
      break;
    }
    case VectorFamily::offdiag_ad: {
      Real a0 = g(s0.a, "vanishing entry a_p");
      Real d0 = g(s0.d, "vanishing entry d_p");
      out.M.b = s1.b + s1.a * s0.b / d0;
      out.M.c = s1.c + s1.d * s0.c / a0;
      out.N.a = s0.det * (s1.a / d0);
      out.N.d = s0.det * (s1.d / a0);
      break;
    }
    case VectorFamily::offdiag_bc: {
      Real b0 = g(s0.b, "vanishing entry b_p");
      Real c0 = g(s0.c, "vanishing entry c_p");
      out.M.b = s1.b + s1.a * s0.a / c0;
      out.M.c = s1.c + s1.d * s0.d / b0;
      out.N.b = -(s0.det * (s1.a / c0));
      out.N.c = -(s0.det * (s1.d / b0));
      break;
    }
  }
  return out;
}

template <class Real>
MomentPair<Real> vector_three_term(const TransferMatrix<Real>& s0,
                                   const TransferMatrix<Real>& s1,
                                   VectorFamily f, Real A0, Real B0, Real Am1,
                                   Real Bm1) {
  FamilySplit<Real> fs = vector_family_matrices(s0, s1, f);
  MomentPair<Real> out;
  out.A = fs.M.a * A0 + fs.M.b * B0 + fs.N.a * Am1 + fs.N.b * Bm1;
  out.B = fs.M.c * A0 + fs.M.d * B0 + fs.N.c * Am1 + fs.N.d * Bm1;
  return out;
}

template <class Real>
MomentPair<Real> vector_three_term(const DerivedParams<Real>& dp, int p,
                                   VectorFamily f, Real A0, Real B0, Real Am1,
                                   Real Bm1) {
  return vector_three_term(s_matrix(dp, p), s_matrix(dp, p + 1), f, A0, B0,
                           Am1, Bm1);
}

template <class Real>
MomentTriple<Real> vector_three_term(const DerivedParams<Real>& dp,
                                     VectorFamily f,
                                     const MomentTriple<Real>& t0,
                                     const MomentTriple<Real>& tm1) {
  if (tm1.p != t0.p - 1)
    fail(Errc::bad_argument, "vector_three_term: triples are not adjacent");
  MomentPair<Real> u =
      vector_three_term(dp, t0.p, f, t0.A, t0.B, tm1.A, tm1.B);
  MomentTriple<Real> out;
  out.p = t0.p + 1;
  out.A = u.A;
  out.B = u.B;
  out.C = c_from_linear_relation(dp, t0.p + 1, u.A, u.B);
  return out;
}

// Reflection p -> -p-3: valid when both gamma arguments stay positive, i.e.
// the source power is reflectable. C again from the linear relation.
template <class Real>
MomentTriple<Real> reflect(const DerivedParams<Real>& dp, int p, Real A,
                           Real B) {
  if (p == -2) fail(Errc::singular_step, "reflection of p = -2 is undefined");
  if (admissible(p, dp) != Admissibility::reflectable)
    fail(Errc::inadmissible_power,
         "reflected power is inadmissible: 2 nu - p - 2 <= 0");
  const Real kap(static_cast<double>(dp.kappa));
  const Real eps = dp.eps, nu = dp.nu;
  const double pd = static_cast<double>(p);

  // (2 a beta)^(2p+3) Gamma(2 nu - p - 2) / Gamma(2 nu + p + 3)
  const Real fac = pow_int(2.0 * dp.a * dp.beta, 2 * p + 3) /
                   gamma_ratio(2.0 * nu - (pd + 2.0), 2 * p + 5);

  MomentTriple<Real> m;
  m.p = -p - 3;
  m.A = fac * (-((pd + 1.0) *
                 (4.0 * nu * nu + 2.0 * eps * kap * (2.0 * pd + 3.0) -
                  (pd + 2.0) * (pd + 2.0))) /
                   (pd + 2.0) * A +
               2.0 * kap * (2.0 * eps * kap - 1.0) * (2.0 * pd + 3.0) /
                   (pd + 2.0) * B);
  m.B = fac * (eps * (pd + 1.0) * (2.0 * pd + 3.0) * A +
               (4.0 * nu * nu - 2.0 * eps * kap * (2.0 * pd + 3.0) -
                (pd + 1.0) * (pd + 1.0)) *
                   B);
  m.C = c_from_linear_relation(dp, -p - 3, m.A, m.B);
  return m;
}

template <class Real>
MomentTriple<Real> step_up(const DerivedParams<Real>& dp,
                           const MomentTriple<Real>& t) {
  return step_up(dp, t.p, t.A, t.B);
}

template <class Real>
MomentTriple<Real> step_down(const DerivedParams<Real>& dp,
                             const MomentTriple<Real>& t) {
  return step_down(dp, t.p, t.A, t.B);
}

template <class Real>
MomentTriple<Real> reflect(const DerivedParams<Real>& dp,
                           const MomentTriple<Real>& t) {
  return reflect(dp, t.p, t.A, t.B);
}

// B_{-1} has an elementary value even though A_{-1} and C_{-1} do not: the
// p = 0 transfer row 1 = b_0 B_{-1} fixes it.
template <class Real>
Real b_minus_one(const DerivedParams<Real>& dp) {
  return dp.a * dp.a * dp.beta / dp.mu;
}

}  // namespace rcm
