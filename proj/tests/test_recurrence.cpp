#include <cmath>

#include "doctest.h"
#include "rcm/closedform.hpp"
#include "rcm/params.hpp"
#include "rcm/recurrence.hpp"

namespace {

rcm::QuantumNumbers qn(int n, int kappa, double mu, double beta = 1.0) {
  rcm::QuantumNumbers q;
  q.n = n;
  q.kappa = kappa;
  q.mu = mu;
  q.beta = beta;
  return q;
}

const double kEps1 = 0.939070801588044208;  // state n=1, kappa=-2, mu=1
const double kA1 = 11.0444444294990179;
const double kB1 = 10.6352232242946761;
const double kA2 = 143.466950330260918;
const double kB2 = 138.917731530128138;
const double kC2 = -16.157445439044185;
const double kA3 = 2056.06003837528707;
const double kB3 = 1989.91382478078889;

}  // namespace

TEST_CASE("transfer matrix determinant, closed vs entrywise") {
  for (auto s : {qn(0, -1, 0.5), qn(1, -2, 1.0), qn(2, 3, 1.2)}) {
    auto dp = rcm::derive_params<double>(s);
    for (int p = -6; p <= 12; ++p) {
      if (p == -1) continue;
      auto m = rcm::s_matrix(dp, p);
      double ad = m.a * m.d, bc = m.b * m.c;
      double scale = std::max({std::abs(ad), std::abs(bc), 1.0});
      CHECK(std::abs(ad - bc - m.det) / scale < 1e-13);
    }
  }
  auto g = rcm::derive_params<double>(qn(0, -1, 0.5));
  CHECK(rcm::rel_err(rcm::s_matrix(g, 1).det, 1.0) < 1e-14);
}

TEST_CASE("the transfer matrix is undefined at p = -1") {
  auto dp = rcm::derive_params<double>(qn(1, -2, 1.0));
  try {
    rcm::s_matrix(dp, -1);
    FAIL("expected a DomainError");
  } catch (const rcm::DomainError& e) {
    CHECK(e.code() == rcm::Errc::singular_step);
  }
}

TEST_CASE("stepping up from the initial data reproduces the desk values") {
  auto dp = rcm::derive_params<double>(qn(1, -2, 1.0));
  auto t1 = rcm::step_up(dp, 0, 1.0, dp.eps);
  CHECK(t1.p == 1);
  CHECK(rcm::rel_err(t1.A, kA1) < 1e-13);
  CHECK(rcm::rel_err(t1.B, kB1) < 1e-13);
  auto t2 = rcm::step_up(dp, 1, t1.A, t1.B);
  CHECK(rcm::rel_err(t2.A, kA2) < 1e-13);
  CHECK(rcm::rel_err(t2.B, kB2) < 1e-13);
  CHECK(rcm::rel_err(t2.C, kC2) < 1e-12);
  auto t3 = rcm::step_up(dp, 2, t2.A, t2.B);
  CHECK(rcm::rel_err(t3.A, kA3) < 1e-12);
  CHECK(rcm::rel_err(t3.B, kB3) < 1e-12);

  rcm::MomentTriple<double> t0{0, 1.0, dp.eps, 0.0};
  auto v = rcm::step_up(dp, t0);
  CHECK(v.p == 1);
  CHECK(rcm::rel_err(v.A, kA1) < 1e-13);
}

TEST_CASE("stepping down inverts stepping up") {
  auto dp = rcm::derive_params<double>(qn(1, -2, 1.0));
  auto t0 = rcm::step_down(dp, 1, kA1, kB1);
  CHECK(t0.p == 0);
  CHECK(rcm::rel_err(t0.A, 1.0) < 1e-12);
  CHECK(rcm::rel_err(t0.B, kEps1) < 1e-12);
  auto t2 = rcm::step_down(dp, 3, kA3, kB3);
  CHECK(rcm::rel_err(t2.A, kA2) < 1e-12);
  CHECK(rcm::rel_err(t2.B, kB2) < 1e-12);
}

TEST_CASE("singular steps are refused") {
  auto dp = rcm::derive_params<double>(qn(1, -2, 1.0));
  CHECK_THROWS_AS(rcm::step_up(dp, -2, 1.0, 1.0), rcm::DomainError);
  CHECK_THROWS_AS(rcm::step_down(dp, 0, 1.0, 1.0), rcm::DomainError);
  auto weak = rcm::derive_params<double>(qn(1, -1, 0.9));  // nu = 0.436
  try {
    rcm::step_up(weak, -3, 1.0, 1.0);
    FAIL("expected a DomainError");
  } catch (const rcm::DomainError& e) {
    CHECK(e.code() == rcm::Errc::inadmissible_power);
  }
}

TEST_CASE("step down detects the resonant denominator") {
  auto dp = rcm::derive_params<double>(qn(1, -2, std::sqrt(3.0)));  // nu = 1
  auto t2 = rcm::moments_traditional(dp, 2);
  try {
    rcm::step_down(dp, 2, t2.A, t2.B);
    FAIL("expected a DomainError");
  } catch (const rcm::DomainError& e) {
    CHECK(e.code() == rcm::Errc::resonant_denominator);
  }
}

TEST_CASE("polynomial coefficients of the scalar recurrences at p = 0") {
  const double kap = 2.0, eps = 0.7, nu = 1.1;
  double p0 = 4.0 * kap * kap * eps * eps * eps + 8.0 * kap * kap * eps +
              4.0 * kap * eps * eps - 4.0 * kap - 12.0 * nu * nu * eps;
  CHECK(rcm::rel_err_floored(rcm::poly_p(kap, eps, nu, 0.0), p0) < 1e-14);
  double q0 = 12.0 * nu * nu + 2.0 * eps * eps + 6.0 * kap * eps - 2.0;
  CHECK(rcm::rel_err_floored(rcm::poly_q(kap, eps, nu, 0.0), q0) < 1e-14);
}

TEST_CASE("scalar three-term recurrences reproduce the desk values") {
  auto dp = rcm::derive_params<double>(qn(1, -2, 1.0));
  double a2 = rcm::three_term_A(dp, 1, kA1, 1.0);
  CHECK(rcm::rel_err(a2, kA2) < 1e-12);
  double b2 = rcm::three_term_B(dp, 1, kB1, kEps1);
  CHECK(rcm::rel_err(b2, kB2) < 1e-12);

  auto s1 = rcm::s_matrix(dp, 1);
  auto s2 = rcm::s_matrix(dp, 2);
  CHECK(rcm::rel_err(rcm::three_term_A_generic(s1, s2, kA1, 1.0), a2) <
        1e-13);
  CHECK(rcm::rel_err(rcm::three_term_B_generic(s1, s2, kB1, kEps1), b2) <
        1e-13);
}

TEST_CASE("all four vector eliminations agree with the direct step") {
  auto dp = rcm::derive_params<double>(qn(1, -2, 1.0));
  for (auto f : rcm::kVectorFamilies) {
    auto u = rcm::vector_three_term(dp, 1, f, kA1, kB1, 1.0, kEps1);
    CAPTURE(rcm::vector_family_name(f));
    CHECK(rcm::rel_err(u.A, kA2) < 1e-12);
    CHECK(rcm::rel_err(u.B, kB2) < 1e-12);
  }
  rcm::MomentTriple<double> t1{1, kA1, kB1, 0.0};
  rcm::MomentTriple<double> t0{0, 1.0, kEps1, 0.0};
  auto v = rcm::vector_three_term(dp, rcm::VectorFamily::diag_bc, t1, t0);
  CHECK(v.p == 2);
  CHECK(rcm::rel_err(v.C, kC2) < 1e-12);
  CHECK_THROWS_AS(
      rcm::vector_three_term(dp, rcm::VectorFamily::diag_bc, t1, t1),
      rcm::DomainError);
}

TEST_CASE("family matrices reassemble the next transfer matrix") {
  auto dp = rcm::derive_params<double>(qn(2, 3, 1.2));
  for (int p : {1, 2, 3}) {
    auto s0 = rcm::s_matrix(dp, p);
    auto s1 = rcm::s_matrix(dp, p + 1);
    double ia = s0.d / s0.det, ib = -s0.b / s0.det;
    double ic = -s0.c / s0.det, id = s0.a / s0.det;
    for (auto f : rcm::kVectorFamilies) {
      auto fs = rcm::vector_family_matrices(s0, s1, f);
      CAPTURE(rcm::vector_family_name(f));
      CHECK(rcm::rel_err_floored(fs.M.a + fs.N.a * ia + fs.N.b * ic, s1.a) <
            1e-13);
      CHECK(rcm::rel_err_floored(fs.M.b + fs.N.a * ib + fs.N.b * id, s1.b) <
            1e-13);
      CHECK(rcm::rel_err_floored(fs.M.c + fs.N.c * ia + fs.N.d * ic, s1.c) <
            1e-13);
      CHECK(rcm::rel_err_floored(fs.M.d + fs.N.c * ib + fs.N.d * id, s1.d) <
            1e-13);
    }
  }
}

TEST_CASE("reflection maps p to -p-3 and back") {
  auto dp = rcm::derive_params<double>(qn(1, -2, 1.0));
  REQUIRE(rcm::admissible(1, dp) == rcm::Admissibility::reflectable);
  auto m = rcm::reflect(dp, 1, kA1, kB1);
  CHECK(m.p == -4);
  auto direct = rcm::moments_traditional(dp, -4);
  CHECK(rcm::rel_err(m.A, direct.A) < 1e-12);
  CHECK(rcm::rel_err(m.B, direct.B) < 1e-12);
  CHECK(rcm::rel_err(m.C, direct.C) < 1e-12);
  auto back = rcm::reflect(dp, -4, m.A, m.B);
  CHECK(back.p == 1);
  CHECK(rcm::rel_err(back.A, kA1) < 1e-12);
  CHECK(rcm::rel_err(back.B, kB1) < 1e-12);

  try {
    rcm::reflect(dp, 2, kA2, kB2);  // 2 nu - 4 < 0
    FAIL("expected a DomainError");
  } catch (const rcm::DomainError& e) {
    CHECK(e.code() == rcm::Errc::inadmissible_power);
  }
  try {
    rcm::reflect(dp, -2, 1.0, 1.0);
    FAIL("expected a DomainError");
  } catch (const rcm::DomainError& e) {
    CHECK(e.code() == rcm::Errc::singular_step);
  }
}

TEST_CASE("reflection gamma factor against tgamma") {
  auto dp = rcm::derive_params<double>(qn(1, -2, 1.0));
  double tn = 2.0 * dp.nu;
  double got = rcm::pow_int(2.0 * dp.a * dp.beta, 3) /
               rcm::gamma_ratio(tn - 2.0, 5);
  double want = std::pow(2.0 * dp.a * dp.beta, 3) * std::tgamma(tn - 2.0) /
                std::tgamma(tn + 3.0);
  CHECK(rcm::rel_err(got, want) < 1e-13);
}

TEST_CASE("the p = -1 moment of B alone is elementary") {
  for (auto s : {qn(0, -1, 0.5), qn(1, -2, 1.0), qn(2, 3, 1.2)}) {
    auto dp = rcm::derive_params<double>(s);
    double ref = rcm::b_minus_one(dp);
    auto s0 = rcm::s_matrix(dp, 0);
    CHECK(rcm::rel_err(1.0 / s0.b, ref) < 1e-14);
    CHECK(rcm::rel_err(dp.eps / s0.d, ref) < 1e-14);
  }
}
