#include <cmath>
#include <random>

#include "doctest.h"
#include "tfch/dgs.hpp"
#include "tfch/verify.hpp"

using namespace tfch;

TEST_CASE("g ties to the ratio-bound function g1") {
  for (double alpha : {0.2, 0.5, 0.8}) {
    for (double x : {0.0, 0.5, 1.0, 3.0, 4.5}) {
      const double lhs = g_func(x, x, alpha);
      const double rhs = 2.0 * alpha * g1(x, alpha) / (1.0 + x);
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    const double rs = r_star(alpha);
    CHECK(std::abs(g_func(rs, rs, alpha)) < 1e-9);
    CHECK(g_func(0.0, 0.0, alpha) == doctest::Approx(2.0));
    CHECK(g_func(rs - 0.05, rs - 0.05, alpha) > 0.0);
    CHECK(g_func(rs + 0.5, rs + 0.5, alpha) < 0.0);
  }
  CHECK_THROWS(g_func(-1.0, 0.0, 0.5));
}

TEST_CASE("g5 vanishes at zero and grows") {
  for (double alpha : {0.3, 0.6, 0.9}) {
    CHECK(std::abs(g5(0.0, alpha)) < 1e-14);
    double prev = 0.0;
    for (double z : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double v = g5(z, alpha);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("Y functional closed forms at small n") {
  const std::vector<double> A{3.0, 2.0, 1.5};
  {
    const std::vector<double> w{0.7};
    CHECK(Y_functional(A, w) == doctest::Approx(3.0 * 0.49));
  }
  {
    const std::vector<double> w{0.5, -0.25};
    const double s0 = 0.25, s1 = -0.25;
    CHECK(Y_functional(A, w) ==
          doctest::Approx((3.0 - 2.0) * s1 * s1 + 2.0 * s0 * s0));
  }
}

TEST_CASE("telescoping remainder identity") {
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> wdist(-1.0, 1.0);
  for (int c = 0; c < 60; ++c) {
    const double alpha =
        std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const RatioBounds rb = RatioBounds::for_alpha(alpha, 4.5);
    const std::size_t n =
        std::uniform_int_distribution<std::size_t>(2, 25)(rng);
    const TimeMesh m =
        random_admissible_mesh(rng, n, rb.lower + 0.01, rb.upper - 0.01);
    std::vector<double> w(n);
    for (double& x : w) x = wdist(rng);
    const double margin = dgs_nonlocal_margin(m, alpha, w, n);
    const KernelRow cur = build_kernel_row(m, n, alpha);
    const KernelRow prev = build_kernel_row(m, n - 1, alpha);
    const double yr = 0.5 * Y_R_functional(prev.A, cur.A, w);
    CHECK(yr >= -1e-14);
    CHECK(std::abs(margin - yr) <=
          1e-12 * std::max({1.0, std::abs(margin), std::abs(yr)}));
  }
}

TEST_CASE("full DGS inequality margin is nonnegative") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> vdist(-1.0, 1.0);
  double worst = 1e300;
  for (int c = 0; c < 80; ++c) {
    const double alpha =
        std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const RatioBounds rb = RatioBounds::for_alpha(alpha, 4.5);
    const std::size_t n =
        std::uniform_int_distribution<std::size_t>(2, 25)(rng);
    const TimeMesh m =
        random_admissible_mesh(rng, n + 1, rb.lower + 0.01, rb.upper - 0.01);
    std::vector<double> v(n + 1);
    for (double& x : v) x = vdist(rng);
    const DgsReport rep = dgs_full_check(m, alpha, v, n);
    CHECK(rep.ratio_ok);
    const double scale = std::max({1.0, std::abs(rep.lhs), std::abs(rep.rhs)});
    worst = std::min(worst, rep.margin / scale);
  }
  CHECK(worst >= -1e-11);
}

TEST_CASE("G functional is nonnegative") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> wdist(-1.0, 1.0);
  for (int c = 0; c < 40; ++c) {
    const double alpha =
        std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    const RatioBounds rb = RatioBounds::for_alpha(alpha, 4.5);
    const std::size_t n =
        std::uniform_int_distribution<std::size_t>(1, 20)(rng);
    const TimeMesh m =
        random_admissible_mesh(rng, n + 1, rb.lower + 0.01, rb.upper - 0.01);
    std::vector<double> w(n);
    for (double& x : w) x = wdist(rng);
    const KernelRow row = build_kernel_row(m, n, alpha);
    CHECK(G_functional(row, m.tau(n), m.ratio(n + 1), w) >= 0.0);
  }
}

TEST_CASE("randomized verification suites pass") {
  const VerifyReport rep = run_verification(4242, 60);
  for (const auto& s : rep.suites) {
    INFO(s.name, " worst ", s.worst);
    CHECK(s.pass);
  }
  CHECK(rep.all_pass());
  CHECK(rep.to_json().find("\"all_pass\": true") != std::string::npos);
}
