#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <vector>

#include "tfch/time_mesh.hpp"

namespace tfch {

/// Fractional weight omega_beta(t) = t^{beta-1}/Gamma(beta) for beta > 0.
/// Throws std::domain_error on t <= 0 or beta <= 0.
double omega(double beta, double t);

/// Same formula without the beta > 0 restriction; valid for any non-integer
/// or positive beta. Used by kernel internals and quadrature oracles where
/// omega_{-alpha} appears.
double omega_any(double beta, double t);

/// a^{(n)}_{n-k} = (1/tau_k) int_{t_{k-1}}^{t_k} omega_{1-alpha}(t_n - s) ds,
/// evaluated in closed form through the omega_{2-alpha} antiderivative.
double coeff_a(const TimeMesh& mesh, std::size_t n, std::size_t k, double alpha);

/// eta^{(n)}_{n-k} = (2/tau_k) int_{t_{k-1}}^{t_k}
///   ((s - t_{k-1/2})/tau_k) omega_{1-alpha}(t_n - s) ds, in closed form.
/// The k = n case reduces exactly to alpha tau_n^{-alpha}/Gamma(3-alpha).
double coeff_eta(const TimeMesh& mesh, std::size_t n, std::size_t k, double alpha);

struct BridgingPair {
  double I;
  double J;  // NaN when k = n (J is defined for k <= n-1 only)
};

/// Bridging integrals I^{(n)}_{n-k} and J^{(n)}_{n-k}; closed forms
/// I = a^{(n)}_{n-k} - omega_{1-alpha}(t_n - t_{k-1}) and
/// J = omega_{1-alpha}(t_n - t_k) - a^{(n)}_{n-k}, evaluated stably.
BridgingPair bridging_integrals(const TimeMesh& mesh, std::size_t n,
                                std::size_t k, double alpha);

/// One full coefficient row at time level n. Arrays are indexed by the
/// convolution offset j = n - k, so a[j] = a^{(n)}_j with j = 0..n-1.
struct KernelRow {
  std::size_t n = 0;
  double alpha = 0;
  std::vector<double> a;      // defining averages of omega_{1-alpha}
  std::vector<double> eta;    // first-moment weights
  std::vector<double> B;      // compact FBDF2 row
  std::vector<double> a_hat;  // L1-like split kernels
  std::vector<double> A;      // auxiliary kernels, A_0 = 2 a_hat_0
};

KernelRow build_kernel_row(const TimeMesh& mesh, std::size_t n, double alpha);

/// Discrete Caputo value sum_{k=1}^n B^{(n)}_{n-k} increments[k-1].
/// V needs scalar multiplication and +=.
template <class V>
V apply_caputo(const KernelRow& row, std::span<const V> increments) {
  if (increments.size() != row.n)
    throw std::invalid_argument("apply_caputo: history length mismatch");
  V acc = increments[0] * row.B[row.n - 1];
  for (std::size_t k = 2; k <= row.n; ++k)
    acc += increments[k - 1] * row.B[row.n - k];
  return acc;
}

double apply_caputo(const KernelRow& row, std::span<const double> increments);

struct KernelPropertyReport {
  bool row_decrease = true;      // A^{(n)}_{j} decreasing in j, positive
  bool column_decrease = true;   // A^{(n-1)}_{n-1-k} > A^{(n)}_{n-k}
  bool convexity = true;         // differences decrease along columns
  bool hypothesis_ok = true;     // all r_k >= R_*
  double worst_row = 0;          // minimal margins, scaled by A^{(n)}_0
  double worst_column = 0;
  double worst_convexity = 0;
  std::vector<std::size_t> ratio_violations;

  bool all_hold() const { return row_decrease && column_decrease && convexity; }
};

/// Direct numeric certification of the three auxiliary-kernel properties
/// up to level up_to_n. A violated ratio hypothesis is reported, not fatal.
KernelPropertyReport check_kernel_properties(const TimeMesh& mesh, double alpha,
                                             std::size_t up_to_n);

/// Debug dump: CSV columns n,k,a,eta,B,a_hat,A for all rows up to up_to_n.
void dump_kernel_rows_csv(std::ostream& os, const TimeMesh& mesh, double alpha,
                          std::size_t up_to_n);

}  // namespace tfch
