#include <cmath>

#include "doctest.h"
#include "rcm/closedform.hpp"
#include "rcm/dd.hpp"
#include "rcm/params.hpp"

namespace {

rcm::QuantumNumbers qn(int n, int kappa, double mu, double beta = 1.0) {
  rcm::QuantumNumbers q;
  q.n = n;
  q.kappa = kappa;
  q.mu = mu;
  q.beta = beta;
  return q;
}

// Desk values computed at 40 significant digits with an independent
// arbitrary-precision implementation of the two closed forms.
struct Frozen {
  int n, kappa;
  double mu;
  int p;
  double A, B, C;
};

const Frozen kFrozen[] = {
    {1, -2, 1.0, 1, 11.0444444294990179, 10.6352232242946761,
     -1.18907080158804421},
    {1, -2, 1.0, 2, 143.466950330260918, 138.917731530128138,
     -16.157445439044185},
    {1, -2, 1.0, 3, 2056.06003837528707, 1989.91382478078889,
     -246.517944277823826},
    {1, -2, 1.0, -2, 0.0405511413248730088, 0.033583748030509975,
     -0.0101377853312182522},
    {1, -2, 1.0, -3, 0.0303021429155346794, 0.0252888567889855919,
     -0.00813761632372724315},
    {0, -1, 0.5, 0, 1.0, 0.866025403784438647, -0.25},
    {0, -1, 0.5, 1, 2.73205080756887729, 2.36602540378443865,
     -0.683012701892219323},
    {0, -1, 0.5, 2, 10.1961524227066319, 8.83012701892219323,
     -2.54903810567665797},
};

}  // namespace

TEST_CASE("closed forms reproduce the frozen desk values") {
  for (const Frozen& f : kFrozen) {
    auto dp = rcm::derive_params<double>(qn(f.n, f.kappa, f.mu));
    auto t = rcm::moments_traditional(dp, f.p);
    CAPTURE(f.n);
    CAPTURE(f.kappa);
    CAPTURE(f.p);
    CHECK(rcm::rel_err(t.A, f.A) < 1e-13);
    CHECK(rcm::rel_err(t.B, f.B) < 1e-13);
    CHECK(rcm::rel_err(t.C, f.C) < 1e-13);
    auto u = rcm::moments_nu(dp, f.p);
    CHECK(rcm::rel_err(u.A, f.A) < 1e-13);
    CHECK(rcm::rel_err(u.B, f.B) < 1e-13);
    CHECK(rcm::rel_err(u.C, f.C) < 1e-13);
  }
}

TEST_CASE("extended precision nails the frozen values to double rounding") {
  for (const Frozen& f : kFrozen) {
    auto dp = rcm::derive_params<rcm::DDouble>(qn(f.n, f.kappa, f.mu));
    auto t = rcm::moments_traditional(dp, f.p);
    CHECK(rcm::rel_err(rcm::to_double(t.A), f.A) < 1e-15);
    CHECK(rcm::rel_err(rcm::to_double(t.B), f.B) < 1e-15);
    CHECK(rcm::rel_err(rcm::to_double(t.C), f.C) < 1e-15);
  }
}

TEST_CASE("p = 0 moments are fixed by normalization alone") {
  const rcm::QuantumNumbers states[] = {qn(0, -1, 0.5), qn(1, -2, 1.0),
                                        qn(2, 3, 1.2), qn(3, -3, 2.4),
                                        qn(4, 2, 0.9), qn(1, 1, 0.3)};
  for (const auto& s : states) {
    auto dp = rcm::derive_params<double>(s);
    auto t = rcm::moments_traditional(dp, 0);
    CHECK(rcm::rel_err(t.A, 1.0) < 1e-14);
    CHECK(rcm::rel_err(t.B, dp.eps) < 1e-14);
    double c0 = dp.kappa * dp.a * dp.a / (2.0 * dp.mu);
    CHECK(rcm::rel_err(t.C, c0) < 1e-13);
  }
}

TEST_CASE("ground-state first moment has an elementary value") {
  for (double mu : {0.1, 0.5, 0.9}) {
    auto dp = rcm::derive_params<double>(qn(0, -1, mu, 1.0));
    auto t = rcm::moments_traditional(dp, 1);
    CHECK(rcm::rel_err(t.A, (2.0 * dp.nu + 1.0) / (2.0 * dp.beta * dp.mu)) <
          1e-13);
  }
}

TEST_CASE("the linear relation ties C to A and B in both closed forms") {
  auto dp = rcm::derive_params<double>(qn(2, 3, 1.2));
  for (int p : {-3, -2, 0, 1, 2, 5, 8}) {
    if (!rcm::is_direct(p, dp)) continue;
    auto t = rcm::moments_traditional(dp, p);
    CHECK(rcm::rel_err_floored(
              t.C, rcm::c_from_linear_relation(dp, p, t.A, t.B)) < 1e-13);
    auto u = rcm::moments_nu(dp, p);
    CHECK(rcm::rel_err_floored(
              u.C, rcm::c_from_linear_relation(dp, p, u.A, u.B)) < 1e-13);
  }
}

TEST_CASE("scale covariance in beta") {
  auto d1 = rcm::derive_params<double>(qn(1, -2, 1.0, 1.0));
  auto d2 = rcm::derive_params<double>(qn(1, -2, 1.0, 2.0));
  for (int p : {-3, -2, 0, 1, 2, 3, 6}) {
    auto t1 = rcm::moments_traditional(d1, p);
    auto t2 = rcm::moments_traditional(d2, p);
    double s = rcm::pow_int(2.0, -p);
    CHECK(rcm::rel_err(t2.A, t1.A * s) < 1e-14);
    CHECK(rcm::rel_err(t2.B, t1.B * s) < 1e-14);
    CHECK(rcm::rel_err(t2.C, t1.C * s) < 1e-14);
  }
}

TEST_CASE("finite p = -2 moments obey the vanishing-step constraint") {
  // the step from p = -2 toward p = -1 has a finite left side only because
  // (4 nu^2 - 2 kappa eps) A and 2 kappa (2 kappa eps - 1) B coincide there
  for (auto s : {qn(1, -2, 1.0), qn(3, -3, 2.4), qn(2, 3, 1.2)}) {
    auto dp = rcm::derive_params<double>(s);
    if (!rcm::is_direct(-2, dp)) continue;
    auto t = rcm::moments_traditional(dp, -2);
    double kap = dp.kappa;
    double lhs = (4.0 * dp.nu * dp.nu - 2.0 * kap * dp.eps) * t.A;
    double rhs = 2.0 * kap * (2.0 * kap * dp.eps - 1.0) * t.B;
    CHECK(rcm::rel_err(lhs, rhs) < 1e-13);
  }
}

TEST_CASE("undetermined and inadmissible powers are refused") {
  auto dp = rcm::derive_params<double>(qn(1, -2, 1.0));
  try {
    rcm::moments_traditional(dp, -1);
    FAIL("expected a DomainError");
  } catch (const rcm::DomainError& e) {
    CHECK(e.code() == rcm::Errc::moment_undetermined);
  }
  try {
    rcm::moments_nu(dp, -1);
    FAIL("expected a DomainError");
  } catch (const rcm::DomainError& e) {
    CHECK(e.code() == rcm::Errc::moment_undetermined);
  }
  try {
    rcm::moments_traditional(dp, -5);
    FAIL("expected a DomainError");
  } catch (const rcm::DomainError& e) {
    CHECK(e.code() == rcm::Errc::inadmissible_power);
  }
}

TEST_CASE("both closed-form prefactors vanish at p = -1") {
  for (auto s : {qn(0, -1, 0.5), qn(1, -2, 1.0), qn(2, 3, 1.2)}) {
    auto dp = rcm::derive_params<double>(s);
    auto r = rcm::residual_prefactor_vanishing(dp);
    CHECK(r.traditional < 1e-12);
    CHECK(r.nu < 1e-12);
  }
}
