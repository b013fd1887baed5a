#pragma once

// Four hypergeometric transformation identities as executable residual
// checks. nu is a free positive real here, not tied to a physical state:
// the identities are pure 3F2 statements in (n, nu, p), and checking them
// off the physical manifold gives independent coverage of the series kernel.

#include <algorithm>

#include "rcm/dd.hpp"
#include "rcm/errors.hpp"
#include "rcm/hypergeom.hpp"

namespace rcm {

template <class Real>
struct IdentityCheck {
  const char* name = "";
  int n = 0;
  double nu = 0.0;
  int p = 0;
  Real lhs{};
  Real rhs{};
  double residual = 0.0;  // |lhs - rhs| / max(|lhs|, |rhs|, 1)
};

namespace detail {

inline void validate_identity_args(int n, double nu, int p) {
  if (n < 0 || p < 0)
    fail(Errc::bad_argument, "identity checks require n >= 0 and p >= 0");
  if (!(nu > 0.0)) fail(Errc::bad_argument, "identity checks require nu > 0");
}

}  // namespace detail

template <class Real>
IdentityCheck<Real> check_L1(int n, double nu, int p) {
  detail::validate_identity_args(n, nu, p);
  const Real v(nu);
  const double nd = n, pd = p;
  IdentityCheck<Real> c{"L1", n, nu, p, Real(0.0), Real(0.0), 0.0};
  c.lhs = hyp3f2(Real(1.0 - nd), Real(-pd), Real(pd + 1.0), 2.0 * v + 1.0,
                 Real(1.0));
  c.rhs = (2.0 * v + nd) * (2.0 * v + pd + 1.0) * (2.0 * v + pd + 2.0) *
              (2.0 * nd + pd + 1.0) /
              (4.0 * v * (2.0 * v + 1.0) * (v + nd) * (pd + 1.0)) *
              hyp3f2(Real(1.0 - nd), Real(pd + 2.0), Real(-pd - 1.0),
                     2.0 * v + 2.0, Real(1.0)) -
          nd * (4.0 * v + 2.0 * nd + pd + 1.0) /
              (2.0 * (v + nd) * (pd + 1.0)) *
              hyp3f2(Real(0.0 - nd), Real(pd + 2.0), Real(-pd - 1.0), 2.0 * v,
                     Real(1.0));
  c.residual = rel_err_floored(c.lhs, c.rhs);
  return c;
}

template <class Real>
IdentityCheck<Real> check_L2(int n, double nu, int p) {
  detail::validate_identity_args(n, nu, p);
  const Real v(nu);
  const double nd = n, pd = p;
  IdentityCheck<Real> c{"L2", n, nu, p, Real(0.0), Real(0.0), 0.0};
  c.lhs = hyp3f2(Real(0.0 - nd), Real(-pd), Real(pd + 1.0), 2.0 * v + 1.0,
                 Real(1.0));
  c.rhs = nd * (4.0 * v + 2.0 * nd - pd - 1.0) * (2.0 * v + pd + 1.0) *
              (2.0 * v + pd + 2.0) /
              (4.0 * v * (2.0 * v + 1.0) * (v + nd) * (pd + 1.0)) *
              hyp3f2(Real(1.0 - nd), Real(pd + 2.0), Real(-pd - 1.0),
                     2.0 * v + 2.0, Real(1.0)) -
          (2.0 * v + nd) * (2.0 * nd - pd - 1.0) /
              (2.0 * (v + nd) * (pd + 1.0)) *
              hyp3f2(Real(0.0 - nd), Real(pd + 2.0), Real(-pd - 1.0), 2.0 * v,
                     Real(1.0));
  c.residual = rel_err_floored(c.lhs, c.rhs);
  return c;
}

template <class Real>
IdentityCheck<Real> check_L3(int n, double nu, int p) {
  detail::validate_identity_args(n, nu, p);
  const Real v(nu);
  const double nd = n, pd = p;
  IdentityCheck<Real> c{"L3", n, nu, p, Real(0.0), Real(0.0), 0.0};
  c.lhs = pd * (pd + 1.0) / (2.0 * v + nd) *
          hyp3f2(Real(1.0 - nd), Real(pd + 1.0), Real(-pd), 2.0 * v + 1.0,
                 Real(2.0));
  c.rhs = (pd - 2.0 * v) * (2.0 * v + pd + 1.0) /
              (2.0 * (2.0 * v + 1.0) * (v + nd)) *
              hyp3f2(Real(1.0 - nd), Real(pd + 1.0), Real(-pd), 2.0 * v + 2.0,
                     Real(1.0)) +
          v / (v + nd) *
              hyp3f2(Real(0.0 - nd), Real(pd + 1.0), Real(-pd), 2.0 * v,
                     Real(1.0));
  c.residual = rel_err_floored(c.lhs, c.rhs);
  return c;
}

// Both printed equalities of the three-way relation; the recorded residual
// is the larger of the two.
template <class Real>
IdentityCheck<Real> check_chebyshev(int n, double nu, int p) {
  detail::validate_identity_args(n, nu, p);
  const Real v(nu);
  const double nd = n, pd = p;
  const Real c1 = pd * (pd + 1.0) / (nd + 2.0 * v) *
                  hyp3f2(Real(1.0 - nd), Real(-pd), Real(pd + 1.0),
                         2.0 * v + 1.0, Real(2.0));
  const Real c2 = pd * (pd + 1.0) / (2.0 * v + 1.0) *
                  hyp3f2(Real(1.0 - nd), Real(1.0 - pd), Real(pd + 2.0),
                         2.0 * v + 2.0, Real(2.0));
  const Real c3 = hyp3f2(Real(0.0 - nd), Real(-pd), Real(pd + 1.0),
                         2.0 * v + 1.0, Real(1.0)) -
                  hyp3f2(Real(1.0 - nd), Real(-pd), Real(pd + 1.0),
                         2.0 * v + 1.0, Real(1.0));
  IdentityCheck<Real> c{"Chebyshev", n, nu, p, c1, c3, 0.0};
  c.residual = std::max(rel_err_floored(c1, c2), rel_err_floored(c1, c3));
  return c;
}

}  // namespace rcm
