#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfch/config.hpp"
#include "tfch/solver.hpp"
#include "tfch/time_mesh.hpp"
#include "tfch/verify.hpp"

namespace fs = std::filesystem;
using namespace tfch;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file " + path);
  return os;
}

// "lo:hi:n" -> n equally spaced values in [lo, hi].
std::vector<double> parse_range(const std::string& s) {
  double lo, hi;
  int n;
  if (std::sscanf(s.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 1)
    throw std::runtime_error("bad range '" + s + "', expected lo:hi:n");
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

int cmd_bounds(const std::string& range, const std::string& out) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out.empty()) {
    file = open_out(out);
    os = &file;
  }
  *os << "alpha,r_star,gamma_max,three_minus_alpha\n";
  for (double a : parse_range(range))
    *os << a << ',' << r_star(a) << ',' << gamma_max(a) << ',' << 3.0 - a
        << '\n';
  return 0;
}

int cmd_verify(std::uint64_t seed, std::size_t cases, const std::string& out) {
  const VerifyReport rep = run_verification(seed, cases);
  const std::string js = rep.to_json();
  if (!out.empty())
    open_out(out) << js << '\n';
  else
    std::cout << js << '\n';
  for (const auto& s : rep.suites)
    std::cerr << (s.pass ? "pass" : "FAIL") << "  " << s.name << "  worst "
              << s.worst << "  (" << s.cases << " cases)\n";
  return rep.all_pass() ? 0 : 2;
}

int cmd_converge(const std::string& cfg_path, const std::string& out,
                 int levels) {
  const RunConfig c = load_config(cfg_path);
  std::ofstream os = open_out(out);
  os << "N,tau_max,error,order\n";
  double prev_err = 0;
  std::size_t N = c.mesh.N;
  for (int l = 0; l < levels; ++l, N *= 2) {
    const TimeMesh mesh = TimeMesh::graded(c.mesh.T, N, c.mesh.gamma);
    double tau_max = 0;
    for (std::size_t k = 1; k <= mesh.levels(); ++k)
      tau_max = std::max(tau_max, mesh.tau(k));
    FBDF2Solver solver(c.model, mesh,
                       manufactured_solution(c.model.grid, c.model.alpha, 0.0));
    solver.set_forcing([&c](const Spectral& sp, double t) {
      return manufactured_forcing(sp, c.model, t);
    });
    solver.run_to_mesh_end();
    const Field2D exact =
        manufactured_solution(c.model.grid, c.model.alpha, c.mesh.T);
    const double err = solver.spectral().l2_norm(solver.phi() - exact);
    os << N << ',' << tau_max << ',' << err << ',';
    if (l > 0)
      os << std::log2(prev_err / err);
    os << '\n';
    std::cerr << "N=" << N << "  error=" << err << '\n';
    prev_err = err;
  }
  return 0;
}

void write_ledger(const FBDF2Solver& solver, const std::string& path) {
  std::ofstream os = open_out(path);
  os.precision(16);
  os << "t,E,E_alpha,tau,volume\n";
  for (const LedgerEntry& e : solver.ledger())
    os << e.t << ',' << e.E << ',' << e.E_alpha << ',' << e.tau << ','
       << e.volume << '\n';
}

void write_steps(const FBDF2Solver& solver, const std::string& path) {
  std::ofstream os = open_out(path);
  os.precision(16);
  os << "n,t,tau,r,fp_iters,residual,solv_bound,solv_ok,energy_bound,"
        "energy_bound_defined,energy_bound_ok\n";
  for (const StepRecord& s : solver.records())
    os << s.n << ',' << s.t << ',' << s.tau << ',' << s.r << ',' << s.fp_iters
       << ',' << s.residual << ',' << s.solv_bound << ',' << s.solv_ok << ','
       << s.energy_bound << ',' << s.energy_bound_defined << ','
       << s.energy_bound_ok << '\n';
}

int cmd_simulate(const std::string& cfg_path, const std::string& outdir_cli) {
  const RunConfig c = load_config(cfg_path);
  const fs::path outdir = outdir_cli.empty() ? c.output.outdir : outdir_cli;
  fs::create_directories(outdir);

  FBDF2Solver solver(c.model, initial_mesh(c.mesh, c.model.alpha),
                     initial_field(c.init, c.model.grid, c.model.alpha));
  if (c.init.type == "manufactured")
    solver.set_forcing([&c](const Spectral& sp, double t) {
      return manufactured_forcing(sp, c.model, t);
    });

  std::vector<double> snaps = c.output.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  auto snapshot_due = [&]() {
    while (next_snap < snaps.size() &&
           solver.time() >= snaps[next_snap] - 1e-9) {
      char name[64];
      std::snprintf(name, sizeof(name), "snap_t%g.bin", snaps[next_snap]);
      write_snapshot((outdir / name).string(), solver.phi(), solver.time(),
                     c.model.alpha);
      ++next_snap;
    }
  };

  solver.run_to_mesh_end();
  snapshot_due();

  if (c.mesh.mode == "adaptive")
    run_adaptive_tail(solver, c.mesh, snapshot_due);

  write_ledger(solver, (outdir / c.output.ledger_csv).string());
  write_steps(solver, (outdir / c.output.steps_csv).string());
  {
    std::ofstream ms = open_out((outdir / "mesh.csv").string());
    solver.mesh().write_csv(ms);
  }
  std::cerr << "final t = " << solver.time() << ", " << solver.level()
            << " steps, E = " << solver.energy(solver.level()) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable-step FBDF2 integrator for time-fractional Cahn-Hilliard flows"};
  app.require_subcommand(1);

  std::string range = "0.01:0.99:99", out, cfg, outdir;
  std::uint64_t seed = 42;
  std::size_t cases = 200;
  int levels = 4;

  CLI::App* bounds = app.add_subcommand("bounds", "tabulate step-ratio bounds");
  bounds->add_option("--alphas", range, "alpha range lo:hi:n");
  bounds->add_option("--out", out, "output CSV (default stdout)");

  CLI::App* verify = app.add_subcommand("verify", "randomized kernel/DGS self-checks");
  verify->add_option("--seed", seed);
  verify->add_option("--cases", cases, "cases per suite");
  verify->add_option("--out", out, "JSON report path");

  CLI::App* converge = app.add_subcommand("converge", "manufactured-solution convergence study");
  converge->add_option("--config", cfg)->required();
  converge->add_option("--out", out)->required();
  converge->add_option("--levels", levels, "number of mesh refinements");

  CLI::App* simulate = app.add_subcommand("simulate", "run a phase-field simulation");
  simulate->add_option("--config", cfg)->required();
  simulate->add_option("--outdir", outdir, "output directory (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (bounds->parsed()) return cmd_bounds(range, out);
    if (verify->parsed()) return cmd_verify(seed, cases, out);
    if (converge->parsed()) return cmd_converge(cfg, out, levels);
    if (simulate->parsed()) return cmd_simulate(cfg, outdir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
