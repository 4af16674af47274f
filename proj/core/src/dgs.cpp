#include "tfch/dgs.hpp"

#include <cmath>
#include <stdexcept>

namespace tfch {
namespace {

// Suffix sums S_j = sum_{l=j+1}^n w_l for j = 0..n-1 (S_0 is the full sum).
std::vector<double> suffix_sums(std::span<const double> w) {
  const std::size_t n = w.size();
  std::vector<double> s(n);
  double acc = 0.0;
  for (std::size_t j = n; j-- > 0;) {
    acc += w[j];
    s[j] = acc;
  }
  return s;
}

}  // namespace

double g_func(double x, double y, double alpha) {
  if (!(x >= 0 && y >= 0)) throw std::domain_error("g_func: ratios must be >= 0");
  const double p = 2.0 - 0.5 * alpha;
  return (2.0 + 2.0 * (1.0 + alpha) * x - alpha * std::pow(x, p)) / (1.0 + x) -
         alpha * std::pow(y, p) / (1.0 + y);
}

double g5(double z, double alpha) {
  const double b = 2.0 - alpha;
  return alpha / b * (std::pow(z + 1.0, b) - std::pow(z, b)) -
         alpha * std::pow(z + 1.0, 1.0 - alpha) +
         alpha * (1.0 - alpha) * (z + 1.0) / b;
}

double Y_functional(std::span<const double> kernels, std::span<const double> w) {
  const std::size_t n = w.size();
  if (n == 0) return 0.0;
  if (kernels.size() < n)
    throw std::invalid_argument("Y_functional: kernel row too short");
  const std::vector<double> s = suffix_sums(w);
  double y = kernels[n - 1] * s[0] * s[0];
  for (std::size_t j = 1; j <= n - 1; ++j)
    y += (kernels[n - j - 1] - kernels[n - j]) * s[j] * s[j];
  return y;
}

double Y_R_functional(std::span<const double> kernels_prev,
                      std::span<const double> kernels_cur,
                      std::span<const double> w) {
  const std::size_t n = w.size();
  if (n < 2) return 0.0;
  const std::vector<double> s = suffix_sums(w.first(n - 1));  // over w_1..w_{n-1}
  double y = (kernels_prev[n - 2] - kernels_cur[n - 1]) * s[0] * s[0];
  for (std::size_t j = 1; j <= n - 2; ++j) {
    const double c = (kernels_prev[n - j - 2] - kernels_prev[n - j - 1]) -
                     (kernels_cur[n - j - 1] - kernels_cur[n - j]);
    y += c * s[j] * s[j];
  }
  return y;
}

double g_leading_weight(double alpha, double tau_n, double r_next) {
  return alpha * std::pow(r_next, 2.0 - 0.5 * alpha) /
         (2.0 * (1.0 + r_next) * std::pow(tau_n, alpha) *
          std::tgamma(3.0 - alpha));
}

double G_functional(const KernelRow& row, double tau_n, double r_next,
                    std::span<const double> w) {
  const std::size_t n = w.size();
  if (n != row.n) throw std::invalid_argument("G_functional: history length mismatch");
  return g_leading_weight(row.alpha, tau_n, r_next) * w[n - 1] * w[n - 1] +
         0.5 * Y_functional(row.A, w);
}

double dgs_nonlocal_margin(const TimeMesh& mesh, double alpha,
                           std::span<const double> increments, std::size_t n) {
  if (increments.size() < n || n < 2)
    throw std::invalid_argument("dgs_nonlocal_margin: need n >= 2 increments");
  const KernelRow cur = build_kernel_row(mesh, n, alpha);
  const KernelRow prev = build_kernel_row(mesh, n - 1, alpha);
  double lhs = 0.0;
  for (std::size_t k = 1; k <= n; ++k)
    lhs += cur.a_hat[n - k] * increments[k - 1];
  lhs *= increments[n - 1];
  const double rhs = 0.5 * Y_functional(cur.A, increments.first(n)) -
                     0.5 * Y_functional(prev.A, increments.first(n - 1));
  return lhs - rhs;
}

DgsReport dgs_full_check(const TimeMesh& mesh, double alpha,
                         std::span<const double> values, std::size_t n) {
  if (n < 2 || values.size() < n + 1 || mesh.levels() < n + 1)
    throw std::invalid_argument("dgs_full_check: need n >= 2, n+1 mesh levels");
  std::vector<double> w(n);
  for (std::size_t k = 1; k <= n; ++k) w[k - 1] = values[k] - values[k - 1];

  const KernelRow cur = build_kernel_row(mesh, n, alpha);
  const KernelRow prev = build_kernel_row(mesh, n - 1, alpha);

  DgsReport rep;
  rep.lhs = w[n - 1] * apply_caputo(cur, std::span<const double>(w));
  const double Gn = G_functional(cur, mesh.tau(n), mesh.ratio(n + 1), w);
  const double Gp = G_functional(prev, mesh.tau(n - 1), mesh.ratio(n),
                                 std::span<const double>(w).first(n - 1));
  const double gterm = g_func(mesh.ratio(n), mesh.ratio(n + 1), alpha) /
                       (2.0 * std::tgamma(3.0 - alpha) *
                        std::pow(mesh.tau(n), alpha)) *
                       w[n - 1] * w[n - 1];
  rep.rhs = Gn - Gp + gterm;
  rep.margin = rep.lhs - rep.rhs;
  rep.ratio_ok =
      validate_ratios(mesh, RatioBounds::for_alpha(alpha)).empty();
  return rep;
}

}  // namespace tfch
