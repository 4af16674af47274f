#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tfch/dgs.hpp"
#include "tfch/frac_kernels.hpp"
#include "tfch/spectral.hpp"
#include "tfch/time_mesh.hpp"

namespace tfch {

struct ModelParams {
  double alpha = 0.5;  // fractional order in (0,1)
  double kappa = 0.01; // mobility
  double eps = 0.05;   // interface width
  Grid2D grid;
  double fp_tol = 1e-12;
  int fp_max_iters = 500;
};

/// Unique-solvability step bound [4 eps^2 (2-alpha+2r)/(kappa (1+r) G(3-a))]^{1/alpha}.
double solvability_max_step(const ModelParams& p, double r_n);

/// Energy-law step bound [4 eps^2 g(r_n,r_{n+1},alpha)/(kappa G(3-a))]^{1/alpha};
/// NaN when g <= 0 (ratios outside the admissible region).
double energy_step_bound(const ModelParams& p, double r_n, double r_np1);

struct StepRecord {
  std::size_t n = 0;
  double t = 0, tau = 0, r = 0;
  int fp_iters = 0;
  double residual = 0;         // max-norm residual of the discrete equation
  double solv_bound = 0;
  bool solv_ok = true;
  double energy_bound = 0;     // filled one step in arrears (needs r_{n+1})
  bool energy_bound_defined = false;
  bool energy_bound_ok = true;
};

struct LedgerEntry {
  double t = 0;
  double E = 0;
  double E_alpha = 0;  // NaN where r_{n+1} is not yet known
  double tau = 0;
  double volume = 0;
};

class SolverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Implicit variable-step FBDF2 stepper for the time-fractional Cahn-Hilliard
/// flow. Linear stiff terms are implicit and solved exactly in spectral
/// space; the nonlinearity is lagged inside a fixed-point iteration.
class FBDF2Solver {
public:
  FBDF2Solver(ModelParams p, TimeMesh mesh, const Field2D& phi0);

  /// Forcing g(x,t): the scheme solves (d_tau^alpha phi)^n = kappa lap mu - g.
  void set_forcing(std::function<Field2D(const Spectral&, double)> g);

  /// Advance one level along the prescribed mesh; false when exhausted.
  bool step();
  void run_to_mesh_end();

  /// Append tau to the mesh and advance (adaptive mode).
  void step_with(double tau);

  /// Next step from the rate-based controller, clamped into the admissible
  /// ratio window [R_*, r*(alpha)).
  double adaptive_next_tau(double tau_min, double tau_max, double eta) const;

  std::size_t level() const { return n_; }
  double time() const { return mesh_.t(n_); }
  const TimeMesh& mesh() const { return mesh_; }
  const ModelParams& params() const { return p_; }
  const Spectral& spectral() const { return sp_; }
  const Field2D& phi() const { return phi_; }
  Field2D phi_at(std::size_t j) const;
  double volume(std::size_t j) const;   // mean of phi^j
  double energy(std::size_t j) const { return E_[j]; }

  /// Modified energy at level j; requires j >= 1 and j < level() so that
  /// r_{j+1} is known (evaluated one step in arrears).
  double energy_alpha(std::size_t j) const;

  /// History part sum_{k=1}^{n-1} B^{(n)}_{n-k} (phi^k - phi^{k-1}) for the
  /// row at level n (1-based; zero field for n = 1).
  Field2D history_term(std::size_t n) const;

  const std::vector<StepRecord>& records() const { return rec_; }
  std::vector<LedgerEntry> ledger() const;

private:
  ModelParams p_;
  TimeMesh mesh_;
  Spectral sp_;
  Field2D phi_;
  std::size_t n_ = 0;
  double r_upper_;  // cached r*(alpha)
  std::function<Field2D(const Spectral&, double)> forcing_;
  std::vector<std::vector<std::complex<double>>> levels_;  // phi-hat per level
  std::vector<std::vector<std::complex<double>>> hm1_;     // scaled H^-1 coeffs
  std::vector<double> E_;
  std::vector<StepRecord> rec_;
};

/// Variable-step BDF2 stepper for the classical Cahn-Hilliard equation
/// (alpha = 1 reference); first step is backward Euler (r_1 = 0).
class Bdf2Solver {
public:
  Bdf2Solver(ModelParams p, TimeMesh mesh, const Field2D& phi0);

  bool step();
  void run_to_mesh_end();

  std::size_t level() const { return n_; }
  const Field2D& phi() const { return phi_; }
  const Spectral& spectral() const { return sp_; }
  double energy(std::size_t j) const { return E_[j]; }

  /// BDF2 modified energy E + sqrt(r_{j+1}) tau_{j+1} ||d_tau phi^j||_{-1}^2
  /// / (2 kappa (1+r_{j+1})); requires j < level().
  double energy_modified(std::size_t j) const;

private:
  ModelParams p_;
  TimeMesh mesh_;
  Spectral sp_;
  Field2D phi_;
  std::size_t n_ = 0;
  std::vector<std::vector<std::complex<double>>> levels_;
  std::vector<std::vector<std::complex<double>>> hm1_;
  std::vector<double> E_;
};

/// Exact manufactured solution omega_{1+alpha}(t) sin x sin y (zero at t=0).
Field2D manufactured_solution(const Grid2D& g, double alpha, double t);

/// Forcing that makes the manufactured field an exact solution of the forced
/// flow: g = kappa lap mu(Phi) - sin x sin y, chemical potential evaluated
/// pseudo-spectrally from the analytic Phi(.,t).
Field2D manufactured_forcing(const Spectral& sp, const ModelParams& p, double t);

/// Seedable uniform random field in [lo, hi] per grid point.
Field2D random_uniform_field(const Grid2D& g, double lo, double hi,
                             std::uint64_t seed);

}  // namespace tfch
