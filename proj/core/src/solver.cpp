#include "tfch/solver.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace tfch {
namespace {

using Cvec = std::vector<std::complex<double>>;

struct FpResult {
  Cvec chat;
  Field2D phi;
  int iters = 0;
  double residual = 0;
};

// Solve (B0 + kappa eps^2 k^4) phi = rhs0 - kappa k^2 fhat(phi) by lagging the
// nonlinearity f(phi) = phi^3 - phi. Converged when the real-space update
// drops below fp_tol and the equation residual is at (or stuck near) the
// roundoff floor.
FpResult fixed_point(const Spectral& sp, const ModelParams& p, double B0,
                     const Cvec& rhs0, const Field2D& guess) {
  const std::size_t S = sp.spec_size();
  const std::vector<double>& k2 = sp.k2();
  std::vector<double> invden(S);
  for (std::size_t m = 0; m < S; ++m)
    invden[m] = 1.0 / (B0 + p.kappa * p.eps * p.eps * k2[m] * k2[m]);

  FpResult r;
  r.phi = guess;
  r.chat.resize(S);
  Cvec fhat(S);
  Field2D fval(sp.grid());
  Field2D next(sp.grid());

  auto sweep = [&]() {
    for (std::size_t i = 0; i < fval.v.size(); ++i) {
      const double x = r.phi.v[i];
      fval.v[i] = x * x * x - x;
    }
    sp.forward(fval, fhat.data());
    for (std::size_t m = 0; m < S; ++m)
      r.chat[m] = (rhs0[m] - p.kappa * k2[m] * fhat[m]) * invden[m];
    sp.inverse(r.chat.data(), next);
    double upd = 0.0;
    for (std::size_t i = 0; i < next.v.size(); ++i)
      upd = std::max(upd, std::abs(next.v[i] - r.phi.v[i]));
    r.phi.v.swap(next.v);
    return upd;
  };

  auto residual = [&]() {
    for (std::size_t i = 0; i < fval.v.size(); ++i) {
      const double x = r.phi.v[i];
      fval.v[i] = x * x * x - x;
    }
    sp.forward(fval, fhat.data());
    Cvec res(S);
    for (std::size_t m = 0; m < S; ++m)
      res[m] = r.chat[m] / invden[m] - rhs0[m] + p.kappa * k2[m] * fhat[m];
    Field2D rf(sp.grid());
    sp.inverse(res.data(), rf);
    return rf.max_abs();
  };

  double upd = std::numeric_limits<double>::infinity();
  while (upd > p.fp_tol) {
    if (r.iters >= p.fp_max_iters)
      throw SolverError("fixed point stalled: update " + std::to_string(upd) +
                        " after " + std::to_string(r.iters) + " iterations");
    upd = sweep();
    ++r.iters;
  }
  r.residual = residual();
  while (r.residual > 10.0 * p.fp_tol && r.iters < p.fp_max_iters) {
    sweep();
    ++r.iters;
    const double res2 = residual();
    if (res2 >= 0.9 * r.residual) {
      r.residual = std::min(res2, r.residual);
      break;  // roundoff floor reached
    }
    r.residual = res2;
  }
  return r;
}

}  // namespace

double solvability_max_step(const ModelParams& p, double r_n) {
  const double num =
      4.0 * p.eps * p.eps * (2.0 - p.alpha + 2.0 * r_n);
  const double den =
      p.kappa * (1.0 + r_n) * std::tgamma(3.0 - p.alpha);
  return std::pow(num / den, 1.0 / p.alpha);
}

double energy_step_bound(const ModelParams& p, double r_n, double r_np1) {
  const double g = g_func(r_n, r_np1, p.alpha);
  if (!(g > 0)) return std::numeric_limits<double>::quiet_NaN();
  return std::pow(4.0 * p.eps * p.eps * g /
                      (p.kappa * std::tgamma(3.0 - p.alpha)),
                  1.0 / p.alpha);
}

FBDF2Solver::FBDF2Solver(ModelParams p, TimeMesh mesh, const Field2D& phi0)
    : p_(std::move(p)),
      mesh_(std::move(mesh)),
      sp_(p_.grid),
      phi_(phi0),
      r_upper_(r_star(p_.alpha)) {
  if (!(p_.alpha > 0 && p_.alpha < 1))
    throw std::invalid_argument("FBDF2Solver: alpha must lie in (0,1)");
  if (phi0.grid != p_.grid)
    throw std::invalid_argument("FBDF2Solver: phi0 grid mismatch");
  Cvec c(sp_.spec_size());
  sp_.forward(phi_, c.data());
  levels_.push_back(std::move(c));
  hm1_.push_back(sp_.hm1_coeffs(phi_));
  E_.push_back(energy_E(sp_, phi_, p_.eps));
}

void FBDF2Solver::set_forcing(std::function<Field2D(const Spectral&, double)> g) {
  forcing_ = std::move(g);
}

bool FBDF2Solver::step() {
  if (n_ >= mesh_.levels()) return false;
  const std::size_t n = n_ + 1;
  const std::size_t S = sp_.spec_size();

  // The energy bound for the previous step becomes checkable once r_n is known.
  if (n >= 3) {
    StepRecord& prev = rec_[n - 2];
    prev.energy_bound = energy_step_bound(p_, mesh_.ratio(n - 1), mesh_.ratio(n));
    prev.energy_bound_defined = prev.energy_bound == prev.energy_bound;
    prev.energy_bound_ok =
        !prev.energy_bound_defined || mesh_.tau(n - 1) <= prev.energy_bound;
  }

  const KernelRow row = build_kernel_row(mesh_, n, p_.alpha);
  const double B0 = row.B[0];

  Cvec rhs0(S);
  for (std::size_t m = 0; m < S; ++m) rhs0[m] = B0 * levels_[n - 1][m];
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    const double c = row.B[n - k];
    for (std::size_t m = 0; m < S; ++m)
      rhs0[m] -= c * (levels_[k][m] - levels_[k - 1][m]);
  }
  if (forcing_) {
    const Field2D g = forcing_(sp_, mesh_.t(n));
    Cvec ghat(S);
    sp_.forward(g, ghat.data());
    for (std::size_t m = 0; m < S; ++m) rhs0[m] -= ghat[m];
  }

  FpResult fp = fixed_point(sp_, p_, B0, rhs0, phi_);
  phi_ = std::move(fp.phi);
  levels_.push_back(std::move(fp.chat));
  hm1_.push_back(sp_.hm1_coeffs(phi_));
  E_.push_back(energy_E(sp_, phi_, p_.eps));

  StepRecord rec;
  rec.n = n;
  rec.t = mesh_.t(n);
  rec.tau = mesh_.tau(n);
  rec.r = mesh_.ratio(n);
  rec.fp_iters = fp.iters;
  rec.residual = fp.residual;
  rec.solv_bound = solvability_max_step(p_, rec.r);
  rec.solv_ok = rec.tau <= rec.solv_bound;
  rec_.push_back(rec);
  n_ = n;
  return true;
}

void FBDF2Solver::run_to_mesh_end() {
  while (step()) {
  }
}

void FBDF2Solver::step_with(double tau) {
  if (n_ != mesh_.levels())
    throw std::logic_error("step_with: prescribed mesh not yet exhausted");
  mesh_.push_step(tau);
  step();
}

double FBDF2Solver::adaptive_next_tau(double tau_min, double tau_max,
                                      double eta) const {
  if (n_ < 1) throw std::logic_error("adaptive_next_tau: no step taken yet");
  const std::size_t S = sp_.spec_size();
  Cvec d(S);
  const double tau_n = mesh_.tau(n_);
  for (std::size_t m = 0; m < S; ++m)
    d[m] = (levels_[n_][m] - levels_[n_ - 1][m]) / tau_n;
  const double rate2 = sp_.spec_l2_norm2(d);
  const double pi_n = std::sqrt(1.0 + eta * rate2);
  const double tau_ada = std::max(tau_min, tau_max / pi_n);
  const double lo = R_star() * tau_n;
  const double hi = r_upper_ * tau_n * (1.0 - 1e-9);
  return std::min(std::max(tau_ada, lo), hi);
}

Field2D FBDF2Solver::phi_at(std::size_t j) const {
  Field2D f(p_.grid);
  sp_.inverse(levels_.at(j).data(), f);
  return f;
}

double FBDF2Solver::volume(std::size_t j) const {
  return levels_.at(j)[0].real();
}

double FBDF2Solver::energy_alpha(std::size_t j) const {
  if (j < 1 || j > n_ || j + 1 > mesh_.levels())
    throw std::out_of_range("energy_alpha: r_{j+1} not available at level " +
                            std::to_string(j));
  const KernelRow row = build_kernel_row(mesh_, j, p_.alpha);
  double G = g_leading_weight(p_.alpha, mesh_.tau(j), mesh_.ratio(j + 1)) *
             Spectral::hm1_dist2(hm1_[j], hm1_[j - 1]);
  double Y = row.A[j - 1] * Spectral::hm1_dist2(hm1_[j], hm1_[0]);
  for (std::size_t i = 1; i + 1 <= j; ++i)
    Y += (row.A[j - i - 1] - row.A[j - i]) *
         Spectral::hm1_dist2(hm1_[j], hm1_[i]);
  G += 0.5 * Y;
  return E_[j] + G / p_.kappa;
}

Field2D FBDF2Solver::history_term(std::size_t n) const {
  if (n < 1 || n > n_ + 1 || n > mesh_.levels())
    throw std::out_of_range("history_term: level out of range");
  const std::size_t S = sp_.spec_size();
  Cvec acc(S, 0.0);
  const KernelRow row = build_kernel_row(mesh_, n, p_.alpha);
  for (std::size_t k = 1; k + 1 <= n; ++k) {
    const double c = row.B[n - k];
    for (std::size_t m = 0; m < S; ++m)
      acc[m] += c * (levels_.at(k)[m] - levels_.at(k - 1)[m]);
  }
  Field2D f(p_.grid);
  sp_.inverse(acc.data(), f);
  return f;
}

std::vector<LedgerEntry> FBDF2Solver::ledger() const {
  std::vector<LedgerEntry> out;
  out.reserve(n_ + 1);
  for (std::size_t j = 0; j <= n_; ++j) {
    LedgerEntry e;
    e.t = mesh_.t(j);
    e.E = E_[j];
    e.E_alpha = (j >= 1 && j + 1 <= mesh_.levels())
                    ? energy_alpha(j)
                    : std::numeric_limits<double>::quiet_NaN();
    e.tau = j >= 1 ? mesh_.tau(j) : 0.0;
    e.volume = volume(j);
    out.push_back(e);
  }
  return out;
}

Bdf2Solver::Bdf2Solver(ModelParams p, TimeMesh mesh, const Field2D& phi0)
    : p_(std::move(p)), mesh_(std::move(mesh)), sp_(p_.grid), phi_(phi0) {
  if (phi0.grid != p_.grid)
    throw std::invalid_argument("Bdf2Solver: phi0 grid mismatch");
  Cvec c(sp_.spec_size());
  sp_.forward(phi_, c.data());
  levels_.push_back(std::move(c));
  hm1_.push_back(sp_.hm1_coeffs(phi_));
  E_.push_back(energy_E(sp_, phi_, p_.eps));
}

bool Bdf2Solver::step() {
  if (n_ >= mesh_.levels()) return false;
  const std::size_t n = n_ + 1;
  const std::size_t S = sp_.spec_size();
  const double tau = mesh_.tau(n);

  double B0;
  Cvec rhs0(S);
  if (n == 1) {
    B0 = 1.0 / tau;
    for (std::size_t m = 0; m < S; ++m) rhs0[m] = B0 * levels_[0][m];
  } else {
    const double r = mesh_.ratio(n);
    B0 = (1.0 + 2.0 * r) / ((1.0 + r) * tau);
    const double b1 = r * r / ((1.0 + r) * tau);
    for (std::size_t m = 0; m < S; ++m)
      rhs0[m] = B0 * levels_[n - 1][m] +
                b1 * (levels_[n - 1][m] - levels_[n - 2][m]);
  }

  FpResult fp = fixed_point(sp_, p_, B0, rhs0, phi_);
  phi_ = std::move(fp.phi);
  levels_.push_back(std::move(fp.chat));
  hm1_.push_back(sp_.hm1_coeffs(phi_));
  E_.push_back(energy_E(sp_, phi_, p_.eps));
  n_ = n;
  return true;
}

void Bdf2Solver::run_to_mesh_end() {
  while (step()) {
  }
}

double Bdf2Solver::energy_modified(std::size_t j) const {
  if (j >= n_) throw std::out_of_range("energy_modified: r_{j+1} not available");
  if (j == 0) return E_[0];
  const double r = mesh_.ratio(j + 1);
  const double dt2 = Spectral::hm1_dist2(hm1_[j], hm1_[j - 1]) /
                     (mesh_.tau(j) * mesh_.tau(j));
  return E_[j] + std::sqrt(r) * mesh_.tau(j + 1) * dt2 /
                     (2.0 * p_.kappa * (1.0 + r));
}

Field2D manufactured_solution(const Grid2D& g, double alpha, double t) {
  Field2D f(g);
  if (t <= 0) return f;
  const double amp = omega(1.0 + alpha, t);
  for (int iy = 0; iy < g.My; ++iy)
    for (int ix = 0; ix < g.Mx; ++ix)
      f(ix, iy) = amp * std::sin(g.x(ix)) * std::sin(g.y(iy));
  return f;
}

Field2D manufactured_forcing(const Spectral& sp, const ModelParams& p,
                             double t) {
  const Grid2D& g = sp.grid();
  const Field2D Phi = manufactured_solution(g, p.alpha, t);
  Field2D mu(g);
  const Field2D lapPhi = sp.laplacian(Phi);
  for (std::size_t i = 0; i < mu.v.size(); ++i) {
    const double x = Phi.v[i];
    mu.v[i] = x * x * x - x - p.eps * p.eps * lapPhi.v[i];
  }
  Field2D out = sp.laplacian(mu);
  out *= p.kappa;
  for (int iy = 0; iy < g.My; ++iy)
    for (int ix = 0; ix < g.Mx; ++ix)
      out(ix, iy) -= std::sin(g.x(ix)) * std::sin(g.y(iy));
  return out;
}

Field2D random_uniform_field(const Grid2D& g, double lo, double hi,
                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  Field2D f(g);
  for (double& x : f.v) x = dist(rng);
  return f;
}

}  // namespace tfch
