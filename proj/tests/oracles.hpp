#pragma once

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <cmath>
#include <functional>
#include <stdexcept>

#include "tfch/time_mesh.hpp"

// Adaptive-quadrature reference values for the kernel coefficients, computed
// from their defining integrals with 61-point adaptive Gauss-Kronrod. Two
// conditioning transforms keep the quadrature honest at the 1e-13 level: the
// sign-changing first-moment integrand is folded about the interval midpoint,
// and the k = n endpoint singularity is removed by the substitution
// t_n - s = w^{1/(1-alpha)} before integrating.
namespace oracle {

inline double quad(const std::function<double(double)>& f, double a, double b) {
  struct Ctx {
    const std::function<double(double)>* f;
  } ctx{&f};
  gsl_function gf;
  gf.function = [](double x, void* p) {
    return (*static_cast<Ctx*>(p)->f)(x);
  };
  gf.params = &ctx;
  static thread_local gsl_integration_workspace* ws =
      gsl_integration_workspace_alloc(16384);
  double result = 0, abserr = 0;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  const int status =
      gsl_integration_qag(&gf, a, b, 0.0, 1e-13, 16384, GSL_INTEG_GAUSS61, ws,
                          &result, &abserr);
  gsl_set_error_handler(old);
  if (status && status != GSL_EROUND)
    throw std::runtime_error("quadrature failed, status " +
                             std::to_string(status));
  return result;
}

// (1/tau_k) int_{t_{k-1}}^{t_k} omega_{1-alpha}(t_n - s) ds
inline double coeff_a(const tfch::TimeMesh& m, std::size_t n, std::size_t k,
                      double alpha) {
  const double tk = m.tau(k), g = std::tgamma(1.0 - alpha);
  if (k == n) {
    // v = t_n - s = w^q with q = 1/(1-alpha): the integrand becomes q dw
    const double q = 1.0 / (1.0 - alpha);
    return quad([&](double) { return q; }, 0.0, std::pow(tk, 1.0 - alpha)) /
           (tk * g);
  }
  const double tn = m.t(n);
  return quad([&](double s) { return std::pow(tn - s, -alpha); }, m.t(k - 1),
              m.t(k)) /
         (tk * g);
}

// (2/tau_k^2) int (s - t_{k-1/2}) omega_{1-alpha}(t_n - s) ds, folded to
// int_0^{tau/2} u [ (d-u)^{-alpha} - (d+u)^{-alpha} ] du with d = t_n - mid.
inline double coeff_eta(const tfch::TimeMesh& m, std::size_t n, std::size_t k,
                        double alpha) {
  const double tk = m.tau(k), g = std::tgamma(1.0 - alpha);
  const double d = m.t(n) - 0.5 * (m.t(k - 1) + m.t(k));
  if (k == n) {
    // unfolded with v = t_n - s = w^q: (tau/2 - v) v^{-alpha} dv = q (tau/2 - w^q) dw
    const double q = 1.0 / (1.0 - alpha);
    return 2.0 *
           quad([&](double w) { return q * (0.5 * tk - std::pow(w, q)); }, 0.0,
                std::pow(tk, 1.0 - alpha)) /
           (tk * tk * g);
  }
  // (d-u)^{-a} - (d+u)^{-a} = (d+u)^{-a} expm1(2a atanh(u/d)), stable for u << d
  return 2.0 *
         quad([&](double u) {
           return u * std::pow(d + u, -alpha) *
                  std::expm1(2.0 * alpha * std::atanh(u / d));
         },
              0.0, 0.5 * tk) /
         (tk * tk * g);
}

// I = (alpha/(Gamma(1-alpha) tau_k)) int (t_k - s)(t_n - s)^{-alpha-1} ds
inline double bridging_I(const tfch::TimeMesh& m, std::size_t n, std::size_t k,
                         double alpha) {
  const double tk = m.tau(k), g = std::tgamma(1.0 - alpha);
  if (k == n) {
    // (t_n - s)(t_n - s)^{-alpha-1} = v^{-alpha}; same substitution as above
    const double q = 1.0 / (1.0 - alpha);
    return alpha *
           quad([&](double) { return q; }, 0.0, std::pow(tk, 1.0 - alpha)) /
           (tk * g);
  }
  const double tn = m.t(n), tkk = m.t(k);
  return alpha / (g * tk) *
         quad([&](double s) {
           return (tkk - s) * std::pow(tn - s, -alpha - 1.0);
         },
              m.t(k - 1), m.t(k));
}

// J = (alpha/(Gamma(1-alpha) tau_k)) int (s - t_{k-1})(t_n - s)^{-alpha-1} ds
inline double bridging_J(const tfch::TimeMesh& m, std::size_t n, std::size_t k,
                         double alpha) {
  const double tk = m.tau(k), g = std::tgamma(1.0 - alpha);
  const double tn = m.t(n), tkm = m.t(k - 1);
  return alpha / (g * tk) *
         quad([&](double s) {
           return (s - tkm) * std::pow(tn - s, -alpha - 1.0);
         },
              m.t(k - 1), m.t(k));
}

}  // namespace oracle
