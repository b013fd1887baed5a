#pragma once

// Double-double arithmetic: an unevaluated sum of two doubles giving roughly
// 32 significant decimal digits. Used as the extended-precision scalar for
// the high-precision evaluation mode. Only the operations the moment kernels
// need are provided: field arithmetic, comparisons, abs, sqrt, integer powers.
//
// The error-free transformations (two_sum, fast_two_sum, two_prod) require
// round-to-nearest IEEE doubles and a fused multiply-add; do not compile this
// with value-unsafe optimizations (-ffast-math and friends).

#include <cmath>
#include <ostream>

namespace rcm {

struct DDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DDouble() = default;
  constexpr DDouble(double h) : hi(h) {}
  constexpr DDouble(double h, double l) : hi(h), lo(l) {}
};

namespace eft {

// s + err = a + b, exact, no magnitude ordering required.
inline DDouble two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

// s + err = a + b, exact, assuming |a| >= |b| or a == 0.
inline DDouble fast_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

// p + err = a * b, exact.
inline DDouble two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace eft

inline DDouble operator-(DDouble x) { return {-x.hi, -x.lo}; }
inline DDouble operator+(DDouble x) { return x; }

inline DDouble operator+(DDouble x, DDouble y) {
  DDouble s = eft::two_sum(x.hi, y.hi);
  DDouble t = eft::two_sum(x.lo, y.lo);
  s.lo += t.hi;
  s = eft::fast_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return eft::fast_two_sum(s.hi, s.lo);
}

inline DDouble operator-(DDouble x, DDouble y) { return x + (-y); }

inline DDouble operator*(DDouble x, DDouble y) {
  DDouble p = eft::two_prod(x.hi, y.hi);
  p.lo += x.hi * y.lo + x.lo * y.hi;
  return eft::fast_two_sum(p.hi, p.lo);
}

inline DDouble operator/(DDouble x, DDouble y) {
  double q1 = x.hi / y.hi;
  DDouble r = x - y * DDouble(q1);
  double q2 = r.hi / y.hi;
  r = r - y * DDouble(q2);
  double q3 = r.hi / y.hi;
  DDouble q = eft::fast_two_sum(q1, q2);
  return q + DDouble(q3);
}

inline DDouble operator+(DDouble x, double y) { return x + DDouble(y); }
inline DDouble operator+(double x, DDouble y) { return DDouble(x) + y; }
inline DDouble operator-(DDouble x, double y) { return x - DDouble(y); }
inline DDouble operator-(double x, DDouble y) { return DDouble(x) - y; }
inline DDouble operator*(DDouble x, double y) { return x * DDouble(y); }
inline DDouble operator*(double x, DDouble y) { return DDouble(x) * y; }
inline DDouble operator/(DDouble x, double y) { return x / DDouble(y); }
inline DDouble operator/(double x, DDouble y) { return DDouble(x) / y; }

inline DDouble& operator+=(DDouble& x, DDouble y) { return x = x + y; }
inline DDouble& operator-=(DDouble& x, DDouble y) { return x = x - y; }
inline DDouble& operator*=(DDouble& x, DDouble y) { return x = x * y; }
inline DDouble& operator/=(DDouble& x, DDouble y) { return x = x / y; }

inline bool operator==(DDouble x, DDouble y) { return x.hi == y.hi && x.lo == y.lo; }
inline bool operator!=(DDouble x, DDouble y) { return !(x == y); }
inline bool operator<(DDouble x, DDouble y) { return x.hi < y.hi || (x.hi == y.hi && x.lo < y.lo); }
inline bool operator>(DDouble x, DDouble y) { return y < x; }
inline bool operator<=(DDouble x, DDouble y) { return !(y < x); }
inline bool operator>=(DDouble x, DDouble y) { return !(x < y); }

inline double to_double(DDouble x) { return x.hi; }
inline double to_double(double x) { return x; }

inline DDouble abs(DDouble x) { return x.hi < 0 || (x.hi == 0 && x.lo < 0) ? -x : x; }
inline double abs(double x) { return std::fabs(x); }

inline double sqrt(double x) { return std::sqrt(x); }

// One Newton step on the double-precision root recovers full precision.
inline DDouble sqrt(DDouble x) {
  if (x.hi == 0.0) return {0.0, 0.0};
  double y = std::sqrt(x.hi);
  DDouble r = x - eft::two_prod(y, y);
  return eft::fast_two_sum(y, r.hi / (2.0 * y));
}

template <class Real>
Real max3(Real a, Real b, Real c) {
  Real m = a < b ? b : a;
  return m < c ? c : m;
}

// x^n for integer n by binary exponentiation; negative n via the reciprocal.
template <class Real>
Real pow_int(Real x, int n) {
  if (n < 0) return Real(1.0) / pow_int(x, -n);
  Real result(1.0);
  Real base = x;
  for (unsigned k = static_cast<unsigned>(n); k != 0; k >>= 1) {
    if (k & 1u) result = result * base;
    base = base * base;
  }
  return result;
}

// |x - y| / max(|x|, |y|); zero when both vanish.
template <class Real>
double rel_err(Real x, Real y) {
  Real d = abs(x - y);
  Real m = abs(x) < abs(y) ? abs(y) : abs(x);
  if (to_double(m) == 0.0) return to_double(d);
  return to_double(d / m);
}

// |x - y| / max(|x|, |y|, 1): the residual convention for identity checks.
template <class Real>
double rel_err_floored(Real x, Real y) {
  Real d = abs(x - y);
  Real m = max3(abs(x), abs(y), Real(1.0));
  return to_double(d / m);
}

inline std::ostream& operator<<(std::ostream& os, DDouble x) {
  return os << x.hi << (x.lo < 0 ? " - " : " + ") << (x.lo < 0 ? -x.lo : x.lo);
}

}  // namespace rcm
