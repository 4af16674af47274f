#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tfch/frac_kernels.hpp"
#include "tfch/time_mesh.hpp"

namespace tfch {

/// Step-ratio bound function of the local BDF2-like part,
/// g(x,y,alpha) = (2 + 2(1+alpha)x - alpha x^{2-alpha/2})/(1+x)
///              - alpha y^{2-alpha/2}/(1+y);
/// positive for 0 <= x,y < r*(alpha), zero at x = y = r*.
double g_func(double x, double y, double alpha);

/// Auxiliary column-difference bound,
/// g5(z,alpha) = alpha/(2-alpha) [(z+1)^{2-alpha} - z^{2-alpha}]
///             - alpha (z+1)^{1-alpha} + alpha(1-alpha)(z+1)/(2-alpha);
/// vanishes at z = 0 and increases for z > 0.
double g5(double z, double alpha);

/// Quadratic history functional
///   Y[w_n] = sum_{j=1}^{n-1} (a_{n-j-1} - a_{n-j}) (sum_{l=j+1}^n w_l)^2
///          + a_{n-1} (sum_{l=1}^n w_l)^2
/// over modified kernels a_j = kernels[j] (offset-indexed row at level n).
double Y_functional(std::span<const double> kernels, std::span<const double> w);

/// Remainder functional of the telescoping identity (uses rows n-1 and n).
double Y_R_functional(std::span<const double> kernels_prev,
                      std::span<const double> kernels_cur,
                      std::span<const double> w);

/// Nonnegative DGS functional at level n = w.size():
///   G[w] = alpha r_next^{2-alpha/2} w_n^2 / (2 (1+r_next) tau_n^alpha G(3-a))
///        + (1/2) sum_{j=1}^{n-1} (A_{n-j-1} - A_{n-j}) (sum_{l=j+1}^n w_l)^2
///        + (1/2) A_{n-1} (sum_{l=1}^n w_l)^2.
/// The first-term weight references the NEXT step ratio r_next = r_{n+1}.
double G_functional(const KernelRow& row, double tau_n, double r_next,
                    std::span<const double> w);

/// Weight of the leading G term, alpha r^{2-alpha/2}/(2 (1+r) tau^alpha G(3-a)).
double g_leading_weight(double alpha, double tau_n, double r_next);

/// Margin of the nonlocal-part inequality: w_n sum_k a_hat_{n-k} w_k minus the
/// telescoped difference of the A-kernel Y-forms at levels n and n-1.
double dgs_nonlocal_margin(const TimeMesh& mesh, double alpha,
                           std::span<const double> increments, std::size_t n);

struct DgsReport {
  double lhs = 0;     // (increment)(discrete Caputo value)
  double rhs = 0;     // G[n] - G[n-1] + g-dissipation term
  double margin = 0;  // lhs - rhs, nonnegative under the ratio condition
  bool ratio_ok = true;
};

/// Full discrete-gradient-structure check at level n >= 2 for a scalar
/// sequence of values v_0..v_n on a mesh with at least n+1 levels
/// (the functional references r_{n+1}).
DgsReport dgs_full_check(const TimeMesh& mesh, double alpha,
                         std::span<const double> values, std::size_t n);

}  // namespace tfch
