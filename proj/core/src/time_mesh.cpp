#include "tfch/time_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tfch {

TimeMesh::TimeMesh(std::vector<double> levels) : t_(std::move(levels)) {
  if (t_.size() < 2) throw std::invalid_argument("TimeMesh: need at least two levels");
  if (t_.front() != 0.0) throw std::invalid_argument("TimeMesh: t_0 must be 0");
  for (std::size_t k = 1; k < t_.size(); ++k)
    if (!(t_[k] > t_[k - 1]))
      throw std::invalid_argument("TimeMesh: levels must be strictly increasing");
}

TimeMesh TimeMesh::uniform(double T, std::size_t N) {
  if (N < 1 || T <= 0) throw std::invalid_argument("TimeMesh::uniform: bad arguments");
  std::vector<double> t(N + 1);
  for (std::size_t k = 0; k <= N; ++k) t[k] = T * static_cast<double>(k) / N;
  return TimeMesh(std::move(t));
}

TimeMesh TimeMesh::graded(double T0, std::size_t N0, double gamma) {
  if (N0 < 2 || T0 <= 0 || gamma < 1)
    throw std::invalid_argument("TimeMesh::graded: bad arguments");
  std::vector<double> t(N0 + 1);
  for (std::size_t k = 0; k <= N0; ++k)
    t[k] = T0 * std::pow(static_cast<double>(k) / N0, gamma);
  return TimeMesh(std::move(t));
}

TimeMesh TimeMesh::graded_then_uniform(double T0, std::size_t N0, double gamma,
                                       double T, double tau_tail,
                                       double r_lo, double r_hi) {
  if (T <= T0) throw std::invalid_argument("graded_then_uniform: T must exceed T0");
  TimeMesh mesh = graded(T0, N0, gamma);
  const double tau_join_min = r_lo * mesh.tau(N0);
  const double tau_join_max = r_hi * mesh.tau(N0) * (1.0 - 1e-9);
  bool first = true;
  while (mesh.final_time() < T - 1e-14 * T) {
    const double tau_prev = mesh.tau(mesh.levels());
    const double tau =
        first ? std::clamp(tau_tail, tau_join_min, tau_join_max)
              : std::clamp(tau_tail, r_lo * tau_prev,
                           r_hi * tau_prev * (1.0 - 1e-9));
    first = false;
    const double R = T - mesh.final_time();
    if (R < (1.0 + r_lo) * tau) {
      // land exactly on T with equal substeps inside the ratio window
      std::size_t m = 1;
      while (m < 100000 &&
             !(R / (m * tau_prev) >= r_lo && R / (m * tau_prev) < r_hi))
        ++m;
      for (std::size_t i = 0; i < m; ++i) mesh.push_step(R / m);
      break;
    }
    mesh.push_step(tau);
  }
  return mesh;
}

void TimeMesh::push_step(double tau) {
  if (!(tau > 0)) throw std::invalid_argument("TimeMesh::push_step: tau must be positive");
  t_.push_back(t_.back() + tau);
}

void TimeMesh::write_csv(std::ostream& os) const {
  os << "k,t_k,tau_k,r_k\n";
  os.precision(17);
  for (std::size_t k = 0; k <= levels(); ++k) {
    os << k << ',' << t_[k] << ',' << (k >= 1 ? tau(k) : 0.0) << ','
       << ratio(k) << '\n';
  }
}

TimeMesh TimeMesh::read_csv(std::istream& is) {
  std::string line;
  std::getline(is, line);  // header
  std::vector<double> t;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    std::getline(ss, cell, ',');
    t.push_back(std::stod(cell));
  }
  return TimeMesh(std::move(t));
}

double g1(double z, double alpha) {
  return 1.0 / alpha + (1.0 + 1.0 / alpha) * z - std::pow(z, 2.0 - 0.5 * alpha);
}

double R_star() {
  const double s5 = std::sqrt(5.0);
  return std::cbrt((189.0 - 81.0 * s5) / 2.0) / 9.0 +
         std::cbrt((7.0 + 3.0 * s5) / 2.0) / 3.0 - 1.0 / 3.0;
}

double r_star(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("r_star: alpha must lie in (0,1)");
  // g1 is increasing then decreasing with a single sign change on the tail;
  // bracket the root by doubling, then bisect with a Newton polish.
  double lo = 1.0, hi = 2.0;
  while (g1(hi, alpha) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw std::runtime_error("r_star: bracketing failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g1(mid, alpha) > 0.0 ? lo : hi) = mid;
  }
  double z = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const double f = g1(z, alpha);
    const double df = 1.0 + 1.0 / alpha -
                      (2.0 - 0.5 * alpha) * std::pow(z, 1.0 - 0.5 * alpha);
    const double z1 = z - f / df;
    if (z1 > lo && z1 < hi) z = z1;
  }
  return z;
}

double gamma_max(double alpha) { return std::log2(1.0 + r_star(alpha)); }

RatioBounds RatioBounds::for_alpha(double alpha, double cap) {
  return RatioBounds{R_star(), std::min(r_star(alpha), cap), alpha};
}

std::vector<RatioViolation> validate_ratios(const TimeMesh& mesh,
                                            const RatioBounds& bounds) {
  std::vector<RatioViolation> out;
  for (std::size_t k = 2; k <= mesh.levels(); ++k) {
    const double r = mesh.ratio(k);
    if (!(r >= bounds.lower && r < bounds.upper)) out.push_back({k, r});
  }
  return out;
}

}  // namespace tfch
