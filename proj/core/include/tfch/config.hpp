#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tfch/solver.hpp"
#include "tfch/time_mesh.hpp"

namespace tfch {

/// Time-mesh selection for a run. "uniform": N steps on [0,T]. "graded":
/// graded prefix on [0,T0] continued uniformly to T with step tau_tail.
/// "adaptive": graded prefix on [0,T0], then the rate-based controller with
/// window [tau_min, tau_max] and sensitivity eta.
struct MeshConfig {
  std::string mode = "uniform";
  double T = 1.0;
  std::size_t N = 100;
  double T0 = 0.01;
  std::size_t N0 = 30;
  double gamma = 2.0;
  double tau_tail = 1e-2;
  double tau_min = 1e-4;
  double tau_max = 1e-1;
  double eta = 1e3;
};

/// Initial data: "random" uniform in [lo,hi] per grid point, or "manufactured"
/// (zero field, the exact solution at t = 0).
struct InitConfig {
  std::string type = "random";
  double lo = -0.05;
  double hi = 0.05;
  std::uint64_t seed = 42;
};

struct OutputConfig {
  std::string outdir = "out";
  std::string ledger_csv = "ledger.csv";
  std::string steps_csv = "steps.csv";
  std::vector<double> snapshot_times;
};

struct RunConfig {
  ModelParams model;  // grid and fixed-point settings included
  MeshConfig mesh;
  InitConfig init;
  OutputConfig output;
};

/// Parse a JSON run configuration; unknown keys are rejected, missing keys
/// keep their defaults. Throws std::runtime_error with a descriptive message.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text);
std::string dump_config(const RunConfig& c);

/// Prescribed portion of the mesh implied by the config: the full mesh for
/// "uniform"/"graded", the graded prefix only for "adaptive".
TimeMesh initial_mesh(const MeshConfig& m, double alpha);

Field2D initial_field(const InitConfig& init, const Grid2D& g, double alpha);

/// Drive the rate-based controller from the solver's current time to m.T,
/// landing exactly on T with equal substeps chosen inside the admissible
/// ratio window. Optional callback runs after every accepted step.
void run_adaptive_tail(FBDF2Solver& solver, const MeshConfig& m,
                       const std::function<void()>& after_step = {});

}  // namespace tfch
