#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <vector>

namespace tfch {

/// Nonuniform time levels 0 = t_0 < t_1 < ... < t_N with step sizes
/// tau_k = t_k - t_{k-1} and adjacent step ratios r_1 = 0, r_k = tau_k/tau_{k-1}.
class TimeMesh {
public:
  TimeMesh() = default;

  /// Build from explicit time levels; levels[0] must be 0 and strictly increasing.
  explicit TimeMesh(std::vector<double> levels);

  static TimeMesh uniform(double T, std::size_t N);

  /// Graded mesh t_k = T0 (k/N0)^gamma, gamma >= 1.
  static TimeMesh graded(double T0, std::size_t N0, double gamma);

  /// Graded prefix on [0,T0] followed by a uniform tail of step tau_tail on
  /// [T0,T]. The junction ratio tau_{N0+1}/tau_{N0} is clamped into
  /// [r_lo, r_hi) by shrinking or stretching the first tail step.
  static TimeMesh graded_then_uniform(double T0, std::size_t N0, double gamma,
                                      double T, double tau_tail,
                                      double r_lo, double r_hi);

  std::size_t levels() const { return t_.empty() ? 0 : t_.size() - 1; }

  double t(std::size_t k) const { return t_[k]; }
  double tau(std::size_t k) const { return t_[k] - t_[k - 1]; }
  double final_time() const { return t_.back(); }

  /// r_1 = 0 by convention, r_k = tau_k/tau_{k-1} for k >= 2.
  double ratio(std::size_t k) const {
    return k < 2 ? 0.0 : tau(k) / tau(k - 1);
  }

  /// Append a level at t_N + tau (adaptive stepping).
  void push_step(double tau);

  void write_csv(std::ostream& os) const;
  static TimeMesh read_csv(std::istream& is);

private:
  std::vector<double> t_;
};

/// g1(z,alpha) = 1/alpha + (1+1/alpha) z - z^{2-alpha/2}; its unique positive
/// root is the step-ratio upper bound r*(alpha).
double g1(double z, double alpha);

/// Lower step-ratio bound, the positive root of 3 - 1/(z^2(1+z)) = 0;
/// approximately 0.4753.
double R_star();

/// Upper step-ratio bound r*(alpha), root of g1 located to 1e-12.
double r_star(double alpha);

/// Largest admissible grading parameter, gamma_max = log2(1 + r*(alpha)).
double gamma_max(double alpha);

struct RatioBounds {
  double lower;  // R_*
  double upper;  // min(r*(alpha), user cap), exclusive
  double alpha;

  static RatioBounds for_alpha(double alpha,
                               double cap = std::numeric_limits<double>::infinity());
};

struct RatioViolation {
  std::size_t k;
  double r;
};

/// Every k >= 2 with r_k outside [bounds.lower, bounds.upper).
std::vector<RatioViolation> validate_ratios(const TimeMesh& mesh,
                                            const RatioBounds& bounds);

}  // namespace tfch
