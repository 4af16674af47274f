#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "tfch/frac_kernels.hpp"
#include "tfch/verify.hpp"

using namespace tfch;

namespace {
double rel(double got, double want) {
  return std::abs(got - want) /
         std::max({std::abs(got), std::abs(want), 1e-300});
}
}  // namespace

TEST_CASE("fractional weight omega") {
  CHECK(omega(1.0, 0.7) == doctest::Approx(1.0));
  CHECK(omega(2.0, 0.7) == doctest::Approx(0.7));
  CHECK(omega(0.5, 4.0) ==
        doctest::Approx(1.0 / std::sqrt(4.0 * std::acos(-1.0))));
  CHECK_THROWS(omega(0.5, 0.0));
  CHECK_THROWS(omega(-0.5, 1.0));
  // omega_any admits negative order (Gamma reflection handles the sign)
  CHECK(omega_any(-0.5, 2.0) ==
        doctest::Approx(std::pow(2.0, -1.5) / std::tgamma(-0.5)));
}

TEST_CASE("uniform-mesh closed forms at k = n") {
  const double tau = 0.37;
  const TimeMesh m = TimeMesh::uniform(5 * tau, 5);
  for (double a : {0.2, 0.5, 0.8}) {
    const double ta = std::pow(tau, -a);
    CHECK(rel(coeff_a(m, 3, 3, a), ta / std::tgamma(2.0 - a)) < 1e-14);
    CHECK(rel(coeff_eta(m, 3, 3, a), a * ta / std::tgamma(3.0 - a)) < 1e-14);
    const BridgingPair br = bridging_integrals(m, 3, 3, a);
    CHECK(rel(br.I, a * ta / std::tgamma(2.0 - a)) < 1e-13);
    CHECK(std::isnan(br.J));
  }
}

TEST_CASE("coefficients match adaptive quadrature") {
  std::mt19937_64 rng(20240817);
  for (double alpha : {0.1, 0.5, 0.9}) {
    for (int c = 0; c < 20; ++c) {
      const std::size_t n =
          std::uniform_int_distribution<std::size_t>(2, 12)(rng);
      const TimeMesh m = random_admissible_mesh(rng, n, 0.2, 4.5);
      for (std::size_t k = 1; k <= n; ++k) {
        CHECK(rel(coeff_a(m, n, k, alpha), oracle::coeff_a(m, n, k, alpha)) <
              1e-11);
        CHECK(rel(coeff_eta(m, n, k, alpha),
                  oracle::coeff_eta(m, n, k, alpha)) < 1e-11);
        const BridgingPair br = bridging_integrals(m, n, k, alpha);
        CHECK(rel(br.I, oracle::bridging_I(m, n, k, alpha)) < 1e-11);
        if (k < n)
          CHECK(rel(br.J, oracle::bridging_J(m, n, k, alpha)) < 1e-11);
      }
    }
  }
}

TEST_CASE("bridging identities") {
  std::mt19937_64 rng(7);
  for (double alpha : {0.15, 0.55, 0.85}) {
    const TimeMesh m = random_admissible_mesh(rng, 14, 0.5, 4.0);
    const std::size_t n = 14;
    for (std::size_t k = 1; k <= n; ++k) {
      const double a = coeff_a(m, n, k, alpha);
      const BridgingPair br = bridging_integrals(m, n, k, alpha);
      CHECK(rel(a, omega(1.0 - alpha, m.t(n) - m.t(k - 1)) + br.I) < 1e-12);
      if (k < n)
        CHECK(rel(a, omega(1.0 - alpha, m.t(n) - m.t(k)) - br.J) < 1e-12);
      CHECK(br.I > 0.0);
      if (k < n) CHECK(br.J > 0.0);
      CHECK(coeff_eta(m, n, k, alpha) > 0.0);
    }
  }
}

TEST_CASE("discrete operator is exact on linear and quadratic signals") {
  std::mt19937_64 rng(99);
  for (double alpha : {0.3, 0.6, 0.9}) {
    const TimeMesh m = random_admissible_mesh(rng, 16, 0.6, 3.5);
    for (std::size_t n : {std::size_t(1), std::size_t(5), std::size_t(16)}) {
      const KernelRow row = build_kernel_row(m, n, alpha);
      std::vector<double> wlin(n), wquad(n);
      for (std::size_t k = 1; k <= n; ++k) {
        wlin[k - 1] = m.tau(k);
        wquad[k - 1] = m.t(k) * m.t(k) - m.t(k - 1) * m.t(k - 1);
      }
      CHECK(rel(apply_caputo(row, std::span<const double>(wlin)),
                omega(2.0 - alpha, m.t(n))) < 1e-12);
      if (n >= 2)
        CHECK(rel(apply_caputo(row, std::span<const double>(wquad)),
                  2.0 * omega(3.0 - alpha, m.t(n))) < 1e-11);
    }
  }
}

TEST_CASE("kernel row assembly basics") {
  const TimeMesh m = TimeMesh::graded(1.0, 8, 2.0);
  const double alpha = 0.5;
  const KernelRow r1 = build_kernel_row(m, 1, alpha);
  CHECK(r1.B[0] == doctest::Approx(r1.a[0]));
  CHECK(r1.a_hat[0] == doctest::Approx(r1.a[0]));
  CHECK(r1.A[0] == doctest::Approx(2.0 * r1.a_hat[0]));

  const KernelRow r5 = build_kernel_row(m, 5, alpha);
  CHECK(r5.n == 5);
  REQUIRE(r5.B.size() == 5);
  CHECK(r5.A[0] == doctest::Approx(2.0 * r5.a_hat[0]));
  for (std::size_t j = 1; j < 5; ++j)
    CHECK(r5.A[j] == doctest::Approx(r5.a_hat[j]));
  for (double x : r5.B) CHECK(std::isfinite(x));
  CHECK(r5.B[0] > 0.0);
}

TEST_CASE("auxiliary kernel properties on a graded mesh") {
  const TimeMesh m = TimeMesh::graded(1.0, 25, 2.0);
  for (double alpha : {0.2, 0.5, 0.8}) {
    const KernelPropertyReport rep = check_kernel_properties(m, alpha, 25);
    CHECK(rep.all_hold());
    CHECK(rep.hypothesis_ok);
    CHECK(rep.worst_row > 0.0);
    CHECK(rep.worst_column > 0.0);
    CHECK(rep.worst_convexity > 0.0);
  }
}

TEST_CASE("kernel dump is well formed") {
  const TimeMesh m = TimeMesh::uniform(1.0, 4);
  std::stringstream ss;
  dump_kernel_rows_csv(ss, m, 0.4, 4);
  std::string header;
  std::getline(ss, header);
  CHECK(header == "n,k,a,eta,B,a_hat,A");
  int lines = 0;
  for (std::string l; std::getline(ss, l);)
    if (!l.empty()) ++lines;
  CHECK(lines == 1 + 2 + 3 + 4);
}
