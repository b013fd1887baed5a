#pragma once

// Closed hypergeometric forms for the radial moments of a bound level:
// A_p (plain), B_p (component-difference) and C_p (cross term), each a
// two-term combination of terminating 3F2 series. Two independent
// representations are provided; they must agree wherever both apply, which
// makes their comparison a primary correctness check.
//
// Admissibility: a power p is evaluated directly when 2 nu + p + 1 > 0.
// p = -1 is refused for A and C (no implemented relation determines them
// there); B_{-1} has the elementary value a^2 beta / mu, provided by the
// recurrence module.

#include "rcm/dd.hpp"
#include "rcm/errors.hpp"
#include "rcm/hypergeom.hpp"
#include "rcm/params.hpp"

namespace rcm {

template <class Real>
struct MomentTriple {
  int p = 0;
  Real A{};
  Real B{};
  Real C{};
};

// (2 kappa + eps (p+1)) A_p - (2 eps kappa + p + 1) B_p = 4 mu C_p.
template <class Real>
Real c_from_linear_relation(const DerivedParams<Real>& dp, int p, Real A,
                            Real B) {
  Real kap(static_cast<double>(dp.kappa));
  double pd = static_cast<double>(p);
  return ((2.0 * kap + dp.eps * (pd + 1.0)) * A -
          (2.0 * dp.eps * kap + (pd + 1.0)) * B) /
         (4.0 * dp.mu);
}

template <class Real>
void require_direct(const DerivedParams<Real>& dp, int p) {
  if (p == -1)
    fail(Errc::moment_undetermined,
         "p = -1: A and C are not determined by the implemented relations");
  if (!is_direct(p, dp))
    fail(Errc::inadmissible_power, "2 nu + p + 1 <= 0: moments diverge");
}

template <class Real>
MomentTriple<Real> moments_traditional(const DerivedParams<Real>& dp, int p) {
  require_direct(dp, p);
  const Real kap(static_cast<double>(dp.kappa));
  const Real mu = dp.mu, eps = dp.eps, a = dp.a, nu = dp.nu;
  const double pd = static_cast<double>(p);

  const Real F1 = hyp3f2(Real(1.0 - dp.n), Real(-pd), Real(pd + 1.0),
                         2.0 * nu + 1.0, Real(1.0));
  const Real F2 = hyp3f2(Real(0.0 - dp.n), Real(-pd), Real(pd + 1.0),
                         2.0 * nu + 1.0, Real(1.0));

  // scale = (2 a beta)^p Gamma(2 nu + 1) / Gamma(2 nu + p + 1)
  const Real scale =
      pow_int(2.0 * a * dp.beta, p) / gamma_ratio(2.0 * nu + 1.0, p);
  const Real wp = mu + a * kap;
  const Real wm = mu - a * kap;
  const Real sA = a * (2.0 * eps * kap + (pd + 1.0));
  const Real sB = a * (2.0 * kap + eps * (pd + 1.0));
  const Real pref_ab = 2.0 * (pd + 1.0) * a * mu * scale;

  MomentTriple<Real> m;
  m.p = p;
  m.A = (wp * (sA - 2.0 * eps * mu) * F1 + wm * (sA + 2.0 * eps * mu) * F2) /
        pref_ab;
  m.B = (wp * (sB - 2.0 * mu) * F1 + wm * (sB + 2.0 * mu) * F2) / pref_ab;
  m.C = (a * wp * F1 - a * wm * F2) / (4.0 * mu * scale);
  return m;
}

template <class Real>
MomentTriple<Real> moments_nu(const DerivedParams<Real>& dp, int p) {
  require_direct(dp, p);
  const Real kap(static_cast<double>(dp.kappa));
  const Real mu = dp.mu, eps = dp.eps, a = dp.a, nu = dp.nu;
  const double pd = static_cast<double>(p);

  const Real G1 = hyp3f2(Real(1.0 - dp.n), Real(pd + 2.0), Real(-pd - 1.0),
                         2.0 * nu + 2.0, Real(1.0));
  const Real G2 = hyp3f2(Real(0.0 - dp.n), Real(pd + 2.0), Real(-pd - 1.0),
                         2.0 * nu, Real(1.0));
  const Real g1 = gamma_ratio(2.0 * nu + 2.0, p + 1);
  const Real g2 = gamma_ratio(2.0 * nu, p + 1);
  const Real twoab_p = pow_int(2.0 * a * dp.beta, p);

  const Real u = a * (eps * kap + nu) * g1 * G1;
  const Real v = a * (eps * kap - nu) * g2 * G2;

  MomentTriple<Real> m;
  m.p = p;
  m.A = ((2.0 * (eps * kap - nu) + pd + 1.0) * u -
         (2.0 * (eps * kap + nu) + pd + 1.0) * v) /
        (4.0 * (pd + 1.0) * eps * mu * nu * twoab_p);
  m.B = (u - v) / (4.0 * mu * nu * twoab_p);
  m.C = ((2.0 * kap * (eps * kap - nu) + (pd + 1.0) * (kap - eps * nu)) * u -
         (2.0 * kap * (eps * kap + nu) + (pd + 1.0) * (kap + eps * nu)) * v) /
        (8.0 * (pd + 1.0) * eps * mu * mu * nu * twoab_p);
  return m;
}

// Componentwise disagreement of two triples at the same power. A and B keep
// the same sign over the whole parameter range, so plain relative error is
// meaningful for them. C crosses zero, and near a crossing |x.C - y.C| is
// rounding noise inherited from A and B; C is therefore gauged against the
// magnitude of the whole triple instead of against itself.
template <class Real>
double triple_residual(const MomentTriple<Real>& x, const MomentTriple<Real>& y) {
  Real scale = max3(max3(abs(x.A), abs(y.A), abs(x.B)),
                    max3(abs(y.B), abs(x.C), abs(y.C)), Real(0.0));
  double rc = 0.0;
  if (to_double(scale) != 0.0) rc = to_double(abs(x.C - y.C) / scale);
  return max3(rel_err(x.A, y.A), rel_err(x.B, y.B), rc);
}

// At p = -1 the A-series numerator of each representation must vanish
// identically; both closed forms acquire their 0/0 structure there. The
// residual is |t1 + t2| / max(|t1|, |t2|, 1) for each representation.
struct PrefactorResiduals {
  double traditional = 0.0;
  double nu = 0.0;
};

template <class Real>
PrefactorResiduals residual_prefactor_vanishing(const DerivedParams<Real>& dp) {
  const Real kap(static_cast<double>(dp.kappa));
  const Real mu = dp.mu, eps = dp.eps, a = dp.a, nu = dp.nu;
  const double pd = -1.0;
  PrefactorResiduals r;

  {
    const Real F1 = hyp3f2(Real(1.0 - dp.n), Real(-pd), Real(pd + 1.0),
                           2.0 * nu + 1.0, Real(1.0));
    const Real F2 = hyp3f2(Real(0.0 - dp.n), Real(-pd), Real(pd + 1.0),
                           2.0 * nu + 1.0, Real(1.0));
    const Real sA = a * (2.0 * eps * kap + (pd + 1.0));
    const Real t1 = (mu + a * kap) * (sA - 2.0 * eps * mu) * F1;
    const Real t2 = (mu - a * kap) * (sA + 2.0 * eps * mu) * F2;
    r.traditional =
        to_double(abs(t1 + t2) / max3(abs(t1), abs(t2), Real(1.0)));
  }
  {
    const Real G1 = hyp3f2(Real(1.0 - dp.n), Real(pd + 2.0), Real(-pd - 1.0),
                           2.0 * nu + 2.0, Real(1.0));
    const Real G2 = hyp3f2(Real(0.0 - dp.n), Real(pd + 2.0), Real(-pd - 1.0),
                           2.0 * nu, Real(1.0));
    const Real g1 = gamma_ratio(2.0 * nu + 2.0, 0);
    const Real g2 = gamma_ratio(2.0 * nu, 0);
    const Real t1 =
        a * (eps * kap + nu) * (2.0 * (eps * kap - nu) + pd + 1.0) * g1 * G1;
    const Real t2 =
        -(a * (eps * kap - nu) * (2.0 * (eps * kap + nu) + pd + 1.0) * g2 * G2);
    r.nu = to_double(abs(t1 + t2) / max3(abs(t1), abs(t2), Real(1.0)));
  }
  return r;
}

}  // namespace rcm
