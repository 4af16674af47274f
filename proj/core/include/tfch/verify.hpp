#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tfch/dgs.hpp"
#include "tfch/frac_kernels.hpp"
#include "tfch/time_mesh.hpp"

namespace tfch {

/// Random mesh with steps adjacent ratios drawn uniformly from [r_lo, r_hi]
/// and a log-uniform first step in [tau1_lo, tau1_hi].
TimeMesh random_admissible_mesh(std::mt19937_64& rng, std::size_t steps,
                                double r_lo, double r_hi,
                                double tau1_lo = 1e-3, double tau1_hi = 1.0);

struct VerifySuiteResult {
  std::string name;
  bool pass = true;
  std::size_t cases = 0;
  double worst = 0;  // most adverse scaled margin or identity mismatch
  std::string detail;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<VerifySuiteResult> suites;

  bool all_pass() const;
  std::string to_json() const;
};

/// Randomized self-checks of the kernel algebra and the discrete gradient
/// structure: defining-integral identities, auxiliary-kernel monotonicity and
/// convexity, the telescoping remainder identity, and full DGS margins.
VerifyReport run_verification(std::uint64_t seed, std::size_t cases_per_suite = 200);

}  // namespace tfch
