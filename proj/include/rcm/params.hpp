#pragma once

// State labels and derived continuous parameters for a hydrogenlike Dirac
// bound level, plus the admissibility rule for moment powers.

#include <cmath>
#include <cstdlib>
#include <string>

#include "rcm/dd.hpp"
#include "rcm/errors.hpp"

namespace rcm {

// Discrete labels of a bound level. kappa is the angular-parity number
// (nonzero integer), n the radial number, mu the dimensionless coupling, and
// beta the single inverse-length scale of the problem.
struct QuantumNumbers {
  int n = 0;
  int kappa = -1;
  double mu = 0.5;
  double beta = 1.0;
};

inline void validate(const QuantumNumbers& qn) {
  if (qn.kappa == 0) fail(Errc::kappa_zero, "kappa must be a nonzero integer");
  if (qn.n < 0) fail(Errc::bad_argument, "n must be >= 0");
  if (!(qn.mu > 0.0)) fail(Errc::mu_nonpositive, "mu must be positive");
  if (!(qn.mu < std::abs(qn.kappa)))
    fail(Errc::mu_too_large, "mu must be smaller than |kappa|");
  if (qn.n == 0 && qn.kappa > 0)
    fail(Errc::no_bound_state, "no bound state with n = 0 and kappa > 0");
  if (!(qn.beta > 0.0)) fail(Errc::bad_argument, "beta must be positive");
}

// Continuous parameters derived from the labels:
//   nu  = sqrt(kappa^2 - mu^2)
//   eps = (n + nu) / sqrt((n + nu)^2 + mu^2)   (energy in rest-mass units)
//   a   = sqrt(1 - eps^2)
template <class Real>
struct DerivedParams {
  int n = 0;
  int kappa = -1;
  Real mu{};
  Real beta{};
  Real nu{};
  Real eps{};
  Real a{};
};

template <class Real>
DerivedParams<Real> derive_params(const QuantumNumbers& qn) {
  validate(qn);
  DerivedParams<Real> dp;
  dp.n = qn.n;
  dp.kappa = qn.kappa;
  dp.mu = Real(qn.mu);
  dp.beta = Real(qn.beta);
  Real kap(static_cast<double>(qn.kappa));
  dp.nu = sqrt(kap * kap - dp.mu * dp.mu);
  // eps = w/d and a = mu/d share one hypotenuse, so eps^2 + a^2 = 1 and
  // eps*mu = a*(nu + n) hold to rounding error without cancellation near
  // eps = 1 (the weak-coupling limit).
  Real w = dp.nu + static_cast<double>(qn.n);
  Real d = sqrt(w * w + dp.mu * dp.mu);
  dp.eps = w / d;
  dp.a = dp.mu / d;
  return dp;
}

// A power p is admissible for direct evaluation when the closed forms'
// gamma-function argument stays positive, and additionally usable as a
// reflection source when the reflected gamma argument does too.
enum class Admissibility { inadmissible, direct, reflectable };

inline constexpr double kAdmissibilityTol = 1e-12;

template <class Real>
Admissibility admissible(int p, const DerivedParams<Real>& dp) {
  double two_nu = 2.0 * to_double(dp.nu);
  if (!(two_nu + p + 1 > kAdmissibilityTol)) return Admissibility::inadmissible;
  if (two_nu - p - 2 > kAdmissibilityTol) return Admissibility::reflectable;
  return Admissibility::direct;
}

// reflectable subsumes direct.
template <class Real>
bool is_direct(int p, const DerivedParams<Real>& dp) {
  return admissible(p, dp) != Admissibility::inadmissible;
}

inline const char* admissibility_name(Admissibility a) {
  switch (a) {
    case Admissibility::inadmissible: return "inadmissible";
    case Admissibility::direct: return "direct";
    case Admissibility::reflectable: return "reflectable";
  }
  return "unknown";
}

// Coupling from a nuclear charge: mu = alpha * Z. The default alpha is a
// tool constant, overridable from the command line.
inline constexpr double kDefaultFineStructure = 0.0072973525693;

}  // namespace rcm
