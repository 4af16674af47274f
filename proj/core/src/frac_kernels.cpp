#include "tfch/frac_kernels.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace tfch {
namespace {

// Series cutoff: below this value of x = tau_k/(t_n - t_k) the direct closed
// forms lose digits to cancellation and the power series is used instead.
constexpr double kSeriesCut = 0.5;

void check_indices(const TimeMesh& mesh, std::size_t n, std::size_t k) {
  if (n < 1 || n > mesh.levels() || k < 1 || k > n)
    throw std::out_of_range("kernel coefficient: index out of range");
}

// h(x) = expm1(b log1p(x)) - (b x / 2) ((1+x)^{b-1} + 1), the O(x^3) residual
// in the eta closed form. Series coefficients c_j = C(b,j) - (b/2) C(b-1,j-1).
double eta_residual(double x, double b) {
  if (x >= kSeriesCut) {
    return std::expm1(b * std::log1p(x)) -
           0.5 * b * x * (std::pow(1.0 + x, b - 1.0) + 1.0);
  }
  double sum = 0.0;
  double cb = b * (b - 1.0) / 2.0;              // C(b,2)
  double cb1 = b - 1.0;                         // C(b-1,1)
  double xj = x * x;
  for (int j = 3; j < 80; ++j) {
    cb *= (b - (j - 1)) / j;                    // C(b,j)
    cb1 *= (b - 1.0 - (j - 2)) / (j - 1);       // C(b-1,j-1)
    xj *= x;
    const double term = (cb - 0.5 * b * cb1) * xj;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

// hI(x) = expm1((1-a) log1p(x))/x - (1-a)(1+x)^{-a}
//       = -(1-a) sum_{j>=1} C(-a,j) j/(j+1) x^j.
double bridging_residual_I(double x, double alpha) {
  if (x >= kSeriesCut) {
    return std::expm1((1.0 - alpha) * std::log1p(x)) / x -
           (1.0 - alpha) * std::pow(1.0 + x, -alpha);
  }
  double sum = 0.0, c = 1.0, xj = 1.0;
  for (int j = 1; j < 80; ++j) {
    c *= (-alpha - (j - 1)) / j;  // C(-alpha,j)
    xj *= x;
    const double term = -(1.0 - alpha) * c * xj * j / (j + 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

// hJ(x) = (1-a) - expm1((1-a) log1p(x))/x = -(1-a) sum_{j>=1} C(-a,j)/(j+1) x^j.
double bridging_residual_J(double x, double alpha) {
  if (x >= kSeriesCut)
    return (1.0 - alpha) - std::expm1((1.0 - alpha) * std::log1p(x)) / x;
  double sum = 0.0, c = 1.0, xj = 1.0;
  for (int j = 1; j < 80; ++j) {
    c *= (-alpha - (j - 1)) / j;
    xj *= x;
    const double term = -(1.0 - alpha) * c * xj / (j + 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

}  // namespace

double omega(double beta, double t) {
  if (!(t > 0) || !(beta > 0))
    throw std::domain_error("omega: requires t > 0 and beta > 0");
  return std::pow(t, beta - 1.0) / std::tgamma(beta);
}

double omega_any(double beta, double t) {
  return std::pow(t, beta - 1.0) / std::tgamma(beta);
}

double coeff_a(const TimeMesh& mesh, std::size_t n, std::size_t k, double alpha) {
  check_indices(mesh, n, k);
  const double tau_k = mesh.tau(k);
  if (k == n) return omega(2.0 - alpha, tau_k) / tau_k;
  const double d1 = mesh.t(n) - mesh.t(k);
  const double x = tau_k / d1;
  return std::pow(d1, 1.0 - alpha) * std::expm1((1.0 - alpha) * std::log1p(x)) /
         (tau_k * std::tgamma(2.0 - alpha));
}

double coeff_eta(const TimeMesh& mesh, std::size_t n, std::size_t k, double alpha) {
  check_indices(mesh, n, k);
  const double tau_k = mesh.tau(k);
  if (k == n)
    return alpha * std::pow(tau_k, -alpha) / std::tgamma(3.0 - alpha);
  const double d1 = mesh.t(n) - mesh.t(k);
  const double x = tau_k / d1;
  return 2.0 * std::pow(d1, 2.0 - alpha) * eta_residual(x, 2.0 - alpha) /
         (tau_k * tau_k * std::tgamma(3.0 - alpha));
}

BridgingPair bridging_integrals(const TimeMesh& mesh, std::size_t n,
                                std::size_t k, double alpha) {
  check_indices(mesh, n, k);
  const double tau_k = mesh.tau(k);
  if (k == n) {
    // I_0^{(n)} = omega_{2-alpha}(tau_n)/tau_n - omega_{1-alpha}(tau_n)
    const double I = alpha * std::pow(tau_k, -alpha) / std::tgamma(2.0 - alpha);
    return {I, std::numeric_limits<double>::quiet_NaN()};
  }
  const double d1 = mesh.t(n) - mesh.t(k);
  const double x = tau_k / d1;
  const double scale = std::pow(d1, -alpha) / std::tgamma(2.0 - alpha);
  return {scale * bridging_residual_I(x, alpha),
          scale * bridging_residual_J(x, alpha)};
}

KernelRow build_kernel_row(const TimeMesh& mesh, std::size_t n, double alpha) {
  check_indices(mesh, n, n);
  KernelRow row;
  row.n = n;
  row.alpha = alpha;
  row.a.resize(n);
  row.eta.resize(n);
  for (std::size_t k = 1; k <= n; ++k) {
    row.a[n - k] = coeff_a(mesh, n, k, alpha);
    row.eta[n - k] = coeff_eta(mesh, n, k, alpha);
  }

  row.B = row.a;
  row.a_hat = row.a;
  if (n >= 2) {
    const double rn = mesh.ratio(n);
    const double eta0 = row.eta[0];
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t j = n - k;
      if (k == n) row.B[j] += rn * eta0 / (1.0 + rn);
      if (k == n - 1) row.B[j] -= rn * rn * eta0 / (1.0 + rn);
      if (k >= 2) {
        const double rk = mesh.ratio(k);
        row.B[j] += row.eta[j + 1] / (rk * (1.0 + rk));
      }
      if (k <= n - 1) row.B[j] -= row.eta[j] / (1.0 + mesh.ratio(k + 1));
    }
    row.a_hat[0] = (1.0 - alpha) / (2.0 - alpha) * row.a[0] +
                   row.eta[1] / (rn * (1.0 + rn));
    for (std::size_t k = 2; k + 1 <= n; ++k) {
      const std::size_t j = n - k;
      const double rk = mesh.ratio(k);
      row.a_hat[j] = row.a[j] - row.eta[j] / (1.0 + mesh.ratio(k + 1)) +
                     row.eta[j + 1] / (rk * (1.0 + rk));
    }
    row.a_hat[n - 1] = row.a[n - 1] - row.eta[n - 1] / (1.0 + mesh.ratio(2));
  }

  row.A = row.a_hat;
  row.A[0] *= 2.0;
  return row;
}

double apply_caputo(const KernelRow& row, std::span<const double> increments) {
  return apply_caputo<double>(row, increments);
}

KernelPropertyReport check_kernel_properties(const TimeMesh& mesh, double alpha,
                                             std::size_t up_to_n) {
  KernelPropertyReport rep;
  const double r_lo = R_star();
  for (std::size_t k = 2; k <= up_to_n; ++k)
    if (mesh.ratio(k) < r_lo) rep.ratio_violations.push_back(k);
  rep.hypothesis_ok = rep.ratio_violations.empty();

  rep.worst_row = rep.worst_column = rep.worst_convexity =
      std::numeric_limits<double>::infinity();

  KernelRow prev = build_kernel_row(mesh, 1, alpha);
  for (std::size_t n = 2; n <= up_to_n; ++n) {
    KernelRow cur = build_kernel_row(mesh, n, alpha);
    const double scale = cur.A[0];
    for (std::size_t j = 0; j + 1 <= n - 1; ++j) {
      const double m = (cur.A[j] - cur.A[j + 1]) / scale;
      rep.worst_row = std::min(rep.worst_row, m);
      if (!(m > 0)) rep.row_decrease = false;
    }
    if (!(cur.A[n - 1] > 0)) rep.row_decrease = false;
    for (std::size_t j = 1; j <= n - 1; ++j) {
      const double m = (prev.A[j - 1] - cur.A[j]) / scale;
      rep.worst_column = std::min(rep.worst_column, m);
      if (!(m > 0)) rep.column_decrease = false;
    }
    for (std::size_t j = 2; j <= n - 1; ++j) {
      const double m =
          ((prev.A[j - 2] - prev.A[j - 1]) - (cur.A[j - 1] - cur.A[j])) / scale;
      rep.worst_convexity = std::min(rep.worst_convexity, m);
      if (!(m > 0)) rep.convexity = false;
    }
    prev = std::move(cur);
  }
  return rep;
}

void dump_kernel_rows_csv(std::ostream& os, const TimeMesh& mesh, double alpha,
                          std::size_t up_to_n) {
  os << "n,k,a,eta,B,a_hat,A\n";
  os.precision(17);
  for (std::size_t n = 1; n <= up_to_n; ++n) {
    const KernelRow row = build_kernel_row(mesh, n, alpha);
    for (std::size_t k = 1; k <= n; ++k) {
      const std::size_t j = n - k;
      os << n << ',' << k << ',' << row.a[j] << ',' << row.eta[j] << ','
         << row.B[j] << ',' << row.a_hat[j] << ',' << row.A[j] << '\n';
    }
  }
}

}  // namespace tfch
