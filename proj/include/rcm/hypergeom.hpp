#pragma once

// Pochhammer symbols, gamma-function ratios at integer offsets, and
// terminating generalized hypergeometric series at unit argument. These are
// the only special-function primitives the moment formulas need: every series
// in scope terminates through a nonpositive-integer upper parameter, and
// every gamma ratio has an integer offset, so no gamma evaluation and no
// truncation heuristics appear anywhere.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "rcm/dd.hpp"
#include "rcm/errors.hpp"

namespace rcm {

// A parameter u counts as a nonpositive integer when |u - round(u)| < this.
// All in-scope upper parameters are exact small integers (1-n, -n, -p, p+1,
// p+2, -p-1), so loose detection is safe.
inline constexpr double kIntegerDetectTol = 1e-9;

// (x)_k = x (x+1) ... (x+k-1); the empty product for k = 0.
template <class Real>
Real pochhammer(Real x, int k) {
  if (k < 0) fail(Errc::bad_argument, "pochhammer: k must be >= 0");
  Real prod(1.0);
  for (int i = 0; i < k; ++i) prod = prod * (x + static_cast<double>(i));
  return prod;
}

// Gamma(x+k)/Gamma(x) for x > 0 and x + k > 0, always as a rising-factorial
// product or its reciprocal, never as a quotient of two gamma values.
template <class Real>
Real gamma_ratio(Real x, int k) {
  if (!(to_double(x) > 0.0) || !(to_double(x) + k > 0.0))
    fail(Errc::bad_argument, "gamma_ratio: requires x > 0 and x + k > 0");
  if (k >= 0) return pochhammer(x, k);
  return Real(1.0) / pochhammer(x + static_cast<double>(k), -k);
}

namespace detail {

struct IntParam {
  bool is_nonpos_int = false;
  int value = 0;
};

template <class Real>
IntParam classify_nonpositive_integer(Real u) {
  double ud = to_double(u);
  double r = std::round(ud);
  if (std::abs(ud - r) < kIntegerDetectTol && r <= 0.0)
    return {true, static_cast<int>(std::lround(-r))};
  return {false, 0};
}

// Compensated accumulation; exact arithmetic makes the compensation a no-op
// for DDouble, which is harmless.
template <class Real>
struct KahanSum {
  Real sum{};
  Real comp{};
  explicit KahanSum(Real init) : sum(init), comp(0.0) {}
  void add(Real term) {
    Real y = term - comp;
    Real t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

// Sum_{k=0}^{m*} prod_upper (u)_k / (prod_lower (l)_k k!) at unit argument.
// m* is the smallest -u over upper parameters that are nonpositive integers;
// the sum is exact termination, not truncation. Terms are built by successive
// term ratios and accumulated in ascending k with compensation. Parameters
// are sorted internally, so permuting them cannot change the result.
template <class Real>
Real hyp_terminating(std::span<const Real> upper, std::span<const Real> lower) {
  constexpr std::size_t kMaxParams = 8;
  if (upper.size() > kMaxParams || lower.size() > kMaxParams)
    fail(Errc::bad_argument, "hyp_terminating: too many parameters");

  std::array<Real, kMaxParams> u{};
  std::array<Real, kMaxParams> l{};
  std::copy(upper.begin(), upper.end(), u.begin());
  std::copy(lower.begin(), lower.end(), l.begin());
  auto descending = [](Real x, Real y) { return y < x; };
  std::sort(u.begin(), u.begin() + upper.size(), descending);
  std::sort(l.begin(), l.begin() + lower.size(), descending);

  int mstar = -1;
  for (std::size_t i = 0; i < upper.size(); ++i) {
    auto c = detail::classify_nonpositive_integer(u[i]);
    if (c.is_nonpos_int && (mstar < 0 || c.value < mstar)) mstar = c.value;
  }
  if (mstar < 0)
    fail(Errc::non_terminating, "unsupported non-terminating series");
  for (std::size_t j = 0; j < lower.size(); ++j) {
    auto c = detail::classify_nonpositive_integer(l[j]);
    if (c.is_nonpos_int && c.value < mstar)
      fail(Errc::series_pole,
           "lower parameter reaches zero before the series terminates");
  }

  detail::KahanSum<Real> acc(Real(1.0));
  Real term(1.0);
  for (int k = 0; k < mstar; ++k) {
    Real num(1.0);
    Real den(static_cast<double>(k + 1));
    for (std::size_t i = 0; i < upper.size(); ++i)
      num = num * (u[i] + static_cast<double>(k));
    for (std::size_t j = 0; j < lower.size(); ++j)
      den = den * (l[j] + static_cast<double>(k));
    term = term * (num / den);
    acc.add(term);
  }
  return acc.sum;
}

// The ubiquitous 3F2(u1, u2, u3; l1, l2; 1).
template <class Real>
Real hyp3f2(Real u1, Real u2, Real u3, Real l1, Real l2) {
  const std::array<Real, 3> u{u1, u2, u3};
  const std::array<Real, 2> l{l1, l2};
  return hyp_terminating(std::span<const Real>(u), std::span<const Real>(l));
}

// 1F1(-m; lower; x) truncated exactly at degree m.
template <class Real>
Real hyp1f1_terminating(int m, Real lower, Real x) {
  if (m < 0) fail(Errc::bad_argument, "hyp1f1_terminating: m must be >= 0");
  auto c = detail::classify_nonpositive_integer(lower);
  if (c.is_nonpos_int && c.value < m)
    fail(Errc::series_pole,
         "lower parameter reaches zero before the series terminates");
  detail::KahanSum<Real> acc(Real(1.0));
  Real term(1.0);
  for (int k = 0; k < m; ++k) {
    term = term * (static_cast<double>(-m + k) * x /
                   ((lower + static_cast<double>(k)) * static_cast<double>(k + 1)));
    acc.add(term);
  }
  return acc.sum;
}

}  // namespace rcm
