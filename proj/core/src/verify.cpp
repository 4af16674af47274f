#include "tfch/verify.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace tfch {
namespace {

double rel_gap(double got, double want) {
  return std::abs(got - want) / std::max({std::abs(got), std::abs(want), 1e-300});
}

double draw_alpha(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.05, 0.95)(rng);
}

std::size_t draw_steps(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

VerifySuiteResult kernel_identities(std::mt19937_64& rng, std::size_t cases) {
  VerifySuiteResult s{.name = "kernel-identities"};
  for (std::size_t c = 0; c < cases; ++c) {
    const double alpha = draw_alpha(rng);
    const RatioBounds rb = RatioBounds::for_alpha(alpha, 4.5);
    const std::size_t n = draw_steps(rng, 2, 25);
    const TimeMesh mesh =
        random_admissible_mesh(rng, n, rb.lower + 0.01, rb.upper - 0.01);
    for (std::size_t k = 1; k <= n; ++k) {
      const double a = coeff_a(mesh, n, k, alpha);
      const double eta = coeff_eta(mesh, n, k, alpha);
      const BridgingPair br = bridging_integrals(mesh, n, k, alpha);
      if (!(a > 0) || !(eta > 0) || !(br.I > 0)) s.pass = false;
      s.worst = std::max(
          s.worst, rel_gap(a, omega(1.0 - alpha, mesh.t(n) - mesh.t(k - 1)) + br.I));
      if (k < n) {
        if (!(br.J > 0)) s.pass = false;
        s.worst = std::max(
            s.worst, rel_gap(a, omega(1.0 - alpha, mesh.t(n) - mesh.t(k)) - br.J));
      }
    }
    const KernelRow row = build_kernel_row(mesh, n, alpha);
    s.worst = std::max(s.worst, rel_gap(row.A[0], 2.0 * row.a_hat[0]));
    ++s.cases;
  }
  if (s.worst > 1e-12) s.pass = false;
  s.detail = "max relative mismatch of defining-integral identities";
  return s;
}

VerifySuiteResult kernel_properties(std::mt19937_64& rng, std::size_t cases) {
  VerifySuiteResult s{.name = "kernel-properties"};
  s.worst = 1e300;
  for (std::size_t c = 0; c < cases; ++c) {
    const double alpha = draw_alpha(rng);
    const RatioBounds rb = RatioBounds::for_alpha(alpha, 4.5);
    const std::size_t n = draw_steps(rng, 3, 30);
    const TimeMesh mesh =
        random_admissible_mesh(rng, n, rb.lower + 0.01, rb.upper - 0.01);
    const KernelPropertyReport rep = check_kernel_properties(mesh, alpha, n);
    if (!rep.all_hold() || !rep.hypothesis_ok) s.pass = false;
    s.worst = std::min(
        {s.worst, rep.worst_row, rep.worst_column, rep.worst_convexity});
    ++s.cases;
  }
  s.detail = "smallest scaled monotonicity/convexity margin (positive = strict)";
  return s;
}

VerifySuiteResult telescoping(std::mt19937_64& rng, std::size_t cases) {
  VerifySuiteResult s{.name = "telescoping-identity"};
  std::uniform_real_distribution<double> wdist(-1.0, 1.0);
  for (std::size_t c = 0; c < cases; ++c) {
    const double alpha = draw_alpha(rng);
    const RatioBounds rb = RatioBounds::for_alpha(alpha, 4.5);
    const std::size_t n = draw_steps(rng, 2, 30);
    const TimeMesh mesh =
        random_admissible_mesh(rng, n, rb.lower + 0.01, rb.upper - 0.01);
    std::vector<double> w(n);
    for (double& x : w) x = wdist(rng);
    const double margin = dgs_nonlocal_margin(mesh, alpha, w, n);
    const KernelRow cur = build_kernel_row(mesh, n, alpha);
    const KernelRow prev = build_kernel_row(mesh, n - 1, alpha);
    const double yr = 0.5 * Y_R_functional(prev.A, cur.A, w);
    const double scale = std::max({1.0, std::abs(margin), std::abs(yr)});
    s.worst = std::max(s.worst, std::abs(margin - yr) / scale);
    if (!(yr >= 0)) s.pass = false;
    ++s.cases;
  }
  if (s.worst > 1e-12) s.pass = false;
  s.detail = "telescoping remainder identity mismatch; remainder nonnegative";
  return s;
}

VerifySuiteResult dgs_margins(std::mt19937_64& rng, std::size_t cases) {
  VerifySuiteResult s{.name = "dgs-margins"};
  s.worst = 1e300;
  std::uniform_real_distribution<double> vdist(-1.0, 1.0);
  for (std::size_t c = 0; c < cases; ++c) {
    const double alpha = draw_alpha(rng);
    const RatioBounds rb = RatioBounds::for_alpha(alpha, 4.5);
    const std::size_t n = draw_steps(rng, 2, 30);
    const TimeMesh mesh =
        random_admissible_mesh(rng, n + 1, rb.lower + 0.01, rb.upper - 0.01);
    std::vector<double> v(n + 1);
    for (double& x : v) x = vdist(rng);
    const DgsReport rep = dgs_full_check(mesh, alpha, v, n);
    const double scale = std::max({1.0, std::abs(rep.lhs), std::abs(rep.rhs)});
    s.worst = std::min(s.worst, rep.margin / scale);
    ++s.cases;
  }
  if (s.worst < -1e-11) s.pass = false;
  s.detail = "smallest scaled margin lhs - rhs of the DGS inequality";
  return s;
}

}  // namespace

TimeMesh random_admissible_mesh(std::mt19937_64& rng, std::size_t steps,
                                double r_lo, double r_hi, double tau1_lo,
                                double tau1_hi) {
  std::uniform_real_distribution<double> rdist(r_lo, r_hi);
  std::uniform_real_distribution<double> ldist(std::log(tau1_lo),
                                               std::log(tau1_hi));
  std::vector<double> t{0.0};
  double tau = std::exp(ldist(rng));
  t.push_back(tau);
  for (std::size_t k = 2; k <= steps; ++k) {
    tau *= rdist(rng);
    t.push_back(t.back() + tau);
  }
  return TimeMesh(std::move(t));
}

bool VerifyReport::all_pass() const {
  return std::all_of(suites.begin(), suites.end(),
                     [](const VerifySuiteResult& s) { return s.pass; });
}

std::string VerifyReport::to_json() const {
  nlohmann::json j{{"seed", seed}, {"all_pass", all_pass()}};
  j["suites"] = nlohmann::json::array();
  for (const VerifySuiteResult& s : suites)
    j["suites"].push_back({{"name", s.name},
                           {"pass", s.pass},
                           {"cases", s.cases},
                           {"worst", s.worst},
                           {"detail", s.detail}});
  return j.dump(2);
}

VerifyReport run_verification(std::uint64_t seed, std::size_t cases_per_suite) {
  std::mt19937_64 rng(seed);
  VerifyReport rep;
  rep.seed = seed;
  rep.suites.push_back(kernel_identities(rng, cases_per_suite));
  rep.suites.push_back(kernel_properties(rng, cases_per_suite));
  rep.suites.push_back(telescoping(rng, cases_per_suite));
  rep.suites.push_back(dgs_margins(rng, cases_per_suite));
  return rep;
}

}  // namespace tfch
