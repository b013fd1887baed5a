#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "rcm/dd.hpp"
#include "rcm/hypergeom.hpp"

namespace {

// Plain forward summation with freshly built Pochhammer products per term.
// Deliberately naive: it shares no code path with the library kernel.
double naive_poch(double x, int k) {
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= x + i;
  return r;
}

double naive_factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

int naive_termination(std::initializer_list<double> uppers) {
  int m = -1;
  for (double u : uppers) {
    double r = std::round(u);
    if (std::abs(u - r) < 1e-9 && r <= 0.0) {
      int cand = static_cast<int>(-r);
      if (m < 0 || cand < m) m = cand;
    }
  }
  REQUIRE(m >= 0);
  return m;
}

double naive_3f2(double u1, double u2, double u3, double l1, double l2) {
  int m = naive_termination({u1, u2, u3});
  double s = 0.0;
  for (int k = 0; k <= m; ++k)
    s += naive_poch(u1, k) * naive_poch(u2, k) * naive_poch(u3, k) /
         (naive_poch(l1, k) * naive_poch(l2, k) * naive_factorial(k));
  return s;
}

}  // namespace

TEST_CASE("pochhammer products") {
  CHECK(rcm::pochhammer(3.5, 0) == 1.0);
  CHECK(rcm::pochhammer(3.5, 4) ==
        doctest::Approx(3.5 * 4.5 * 5.5 * 6.5).epsilon(1e-15));
  CHECK(rcm::pochhammer(-2.0, 3) == 0.0);
  CHECK_THROWS_AS(rcm::pochhammer(1.0, -1), rcm::DomainError);
}

TEST_CASE("gamma ratios against tgamma") {
  CHECK(rcm::gamma_ratio(4.0, -2) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  for (double x : {0.7, 1.3, 2.464, 5.0}) {
    for (int k : {-2, -1, 0, 1, 3, 6}) {
      if (x + k <= 0.0) continue;
      double want = std::tgamma(x + k) / std::tgamma(x);
      CHECK(rcm::rel_err(rcm::gamma_ratio(x, k), want) < 1e-13);
      CHECK(rcm::rel_err(
                rcm::gamma_ratio(x, k) * rcm::gamma_ratio(x + k, -k), 1.0) <
            1e-14);
    }
  }
  CHECK_THROWS_AS(rcm::gamma_ratio(-1.0, 2), rcm::DomainError);
  CHECK_THROWS_AS(rcm::gamma_ratio(1.0, -2), rcm::DomainError);
}

TEST_CASE("terminating 3F2 values known in closed form") {
  CHECK(rcm::hyp3f2(-1.0, -1.0, 2.0, 3.0, 1.0) ==
        doctest::Approx(5.0 / 3.0).epsilon(1e-15));
  CHECK(rcm::hyp3f2(-2.0, -1.0, 2.0, 3.0, 1.0) ==
        doctest::Approx(7.0 / 3.0).epsilon(1e-15));
  // one upper parameter at zero terminates immediately
  CHECK(rcm::hyp3f2(0.0, 4.7, -3.0, 2.2, 1.0) == 1.0);
}

TEST_CASE("kernel agrees with the naive reference sum") {
  const double nus[] = {0.6, 0.8660254037844386, 1.2, 1.7320508075688772,
                        2.9};
  for (double nu : nus) {
    for (int n = 0; n <= 6; ++n) {
      for (int p = 0; p <= 6; ++p) {
        double got = rcm::hyp3f2(1.0 - n, -double(p), p + 1.0, 2.0 * nu + 1.0,
                                 1.0);
        double want = naive_3f2(1.0 - n, -double(p), p + 1.0, 2.0 * nu + 1.0,
                                1.0);
        CHECK(rcm::rel_err_floored(got, want) < 1e-13);
      }
    }
  }
}

TEST_CASE("parameter order does not change the result at all") {
  double base = rcm::hyp3f2(-3.0, 2.5, 4.0, 1.7, 1.0);
  CHECK(rcm::hyp3f2(2.5, -3.0, 4.0, 1.7, 1.0) == base);
  CHECK(rcm::hyp3f2(4.0, 2.5, -3.0, 1.7, 1.0) == base);
  CHECK(rcm::hyp3f2(-3.0, 4.0, 2.5, 1.0, 1.7) == base);
}

TEST_CASE("non-terminating and pole cases are refused") {
  try {
    rcm::hyp3f2(1.0, 2.0, 3.0, 4.0, 5.0);
    FAIL("expected a DomainError");
  } catch (const rcm::DomainError& e) {
    CHECK(e.code() == rcm::Errc::non_terminating);
  }
  try {
    rcm::hyp3f2(-3.0, 0.5, 7.0, -2.0, 1.0);
    FAIL("expected a DomainError");
  } catch (const rcm::DomainError& e) {
    CHECK(e.code() == rcm::Errc::series_pole);
  }
  // the lower parameter -2 is never reached when the series stops first
  CHECK_NOTHROW(rcm::hyp3f2(-2.0, 1.0, 1.0, -2.0, 1.0));
}

TEST_CASE("terminating 1F1") {
  CHECK(rcm::hyp1f1_terminating(1, 2.5, 0.75) ==
        doctest::Approx(1.0 - 0.75 / 2.5).epsilon(1e-15));
  CHECK(rcm::hyp1f1_terminating(0, 2.5, 0.75) == 1.0);
  // m = 2: 1 - 2 x / l + x^2 / (l (l + 1))
  double l = 1.8, x = 0.4;
  CHECK(rcm::hyp1f1_terminating(2, l, x) ==
        doctest::Approx(1.0 - 2.0 * x / l + x * x / (l * (l + 1.0)))
            .epsilon(1e-14));
}

TEST_CASE("extended precision tracks the double kernel") {
  rcm::DDouble got =
      rcm::hyp3f2(rcm::DDouble(-4.0), rcm::DDouble(-6.0), rcm::DDouble(7.0),
                  rcm::DDouble(3.2), rcm::DDouble(1.0));
  double ref = rcm::hyp3f2(-4.0, -6.0, 7.0, 3.2, 1.0);
  CHECK(rcm::rel_err(rcm::to_double(got), ref) < 1e-14);
}
