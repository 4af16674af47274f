#include "tfch/config.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace tfch {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const char* section,
                    std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok)
      throw std::runtime_error(std::string("config: unknown key '") + key +
                               "' in section '" + section + "'");
  }
}

template <class T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config: ") + e.what());
  }
  reject_unknown(j, "<root>", {"model", "grid", "mesh", "init", "output", "solver"});

  RunConfig c;
  if (j.contains("model")) {
    const json& m = j["model"];
    reject_unknown(m, "model", {"alpha", "kappa", "eps"});
    maybe(m, "alpha", c.model.alpha);
    maybe(m, "kappa", c.model.kappa);
    maybe(m, "eps", c.model.eps);
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, "grid", {"Mx", "My", "Lx", "Ly"});
    maybe(g, "Mx", c.model.grid.Mx);
    maybe(g, "My", c.model.grid.My);
    maybe(g, "Lx", c.model.grid.Lx);
    maybe(g, "Ly", c.model.grid.Ly);
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    reject_unknown(s, "solver", {"fp_tol", "fp_max_iters"});
    maybe(s, "fp_tol", c.model.fp_tol);
    maybe(s, "fp_max_iters", c.model.fp_max_iters);
  }
  if (j.contains("mesh")) {
    const json& m = j["mesh"];
    reject_unknown(m, "mesh",
                   {"mode", "T", "N", "T0", "N0", "gamma", "tau_tail",
                    "tau_min", "tau_max", "eta"});
    maybe(m, "mode", c.mesh.mode);
    maybe(m, "T", c.mesh.T);
    maybe(m, "N", c.mesh.N);
    maybe(m, "T0", c.mesh.T0);
    maybe(m, "N0", c.mesh.N0);
    maybe(m, "gamma", c.mesh.gamma);
    maybe(m, "tau_tail", c.mesh.tau_tail);
    maybe(m, "tau_min", c.mesh.tau_min);
    maybe(m, "tau_max", c.mesh.tau_max);
    maybe(m, "eta", c.mesh.eta);
    if (c.mesh.mode != "uniform" && c.mesh.mode != "graded" &&
        c.mesh.mode != "adaptive")
      throw std::runtime_error("config: mesh.mode must be uniform, graded or adaptive");
  }
  if (j.contains("init")) {
    const json& i = j["init"];
    reject_unknown(i, "init", {"type", "lo", "hi", "seed"});
    maybe(i, "type", c.init.type);
    maybe(i, "lo", c.init.lo);
    maybe(i, "hi", c.init.hi);
    maybe(i, "seed", c.init.seed);
    if (c.init.type != "random" && c.init.type != "manufactured")
      throw std::runtime_error("config: init.type must be random or manufactured");
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    reject_unknown(o, "output",
                   {"outdir", "ledger_csv", "steps_csv", "snapshot_times"});
    maybe(o, "outdir", c.output.outdir);
    maybe(o, "ledger_csv", c.output.ledger_csv);
    maybe(o, "steps_csv", c.output.steps_csv);
    maybe(o, "snapshot_times", c.output.snapshot_times);
  }
  if (!(c.model.alpha > 0 && c.model.alpha < 1))
    throw std::runtime_error("config: model.alpha must lie in (0,1)");
  if (!(c.model.kappa > 0) || !(c.model.eps > 0))
    throw std::runtime_error("config: model.kappa and model.eps must be positive");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string dump_config(const RunConfig& c) {
  json j{
      {"model", {{"alpha", c.model.alpha}, {"kappa", c.model.kappa}, {"eps", c.model.eps}}},
      {"grid",
       {{"Mx", c.model.grid.Mx},
        {"My", c.model.grid.My},
        {"Lx", c.model.grid.Lx},
        {"Ly", c.model.grid.Ly}}},
      {"solver", {{"fp_tol", c.model.fp_tol}, {"fp_max_iters", c.model.fp_max_iters}}},
      {"mesh",
       {{"mode", c.mesh.mode},
        {"T", c.mesh.T},
        {"N", c.mesh.N},
        {"T0", c.mesh.T0},
        {"N0", c.mesh.N0},
        {"gamma", c.mesh.gamma},
        {"tau_tail", c.mesh.tau_tail},
        {"tau_min", c.mesh.tau_min},
        {"tau_max", c.mesh.tau_max},
        {"eta", c.mesh.eta}}},
      {"init",
       {{"type", c.init.type}, {"lo", c.init.lo}, {"hi", c.init.hi}, {"seed", c.init.seed}}},
      {"output",
       {{"outdir", c.output.outdir},
        {"ledger_csv", c.output.ledger_csv},
        {"steps_csv", c.output.steps_csv},
        {"snapshot_times", c.output.snapshot_times}}}};
  return j.dump(2);
}

TimeMesh initial_mesh(const MeshConfig& m, double alpha) {
  if (m.mode == "uniform") return TimeMesh::uniform(m.T, m.N);
  if (m.mode == "graded")
    return TimeMesh::graded_then_uniform(m.T0, m.N0, m.gamma, m.T, m.tau_tail,
                                         R_star(), r_star(alpha) * (1.0 - 1e-9));
  return TimeMesh::graded(m.T0, m.N0, m.gamma);  // adaptive prefix
}

Field2D initial_field(const InitConfig& init, const Grid2D& g, double alpha) {
  if (init.type == "manufactured") return manufactured_solution(g, alpha, 0.0);
  return random_uniform_field(g, init.lo, init.hi, init.seed);
}

void run_adaptive_tail(FBDF2Solver& solver, const MeshConfig& m,
                       const std::function<void()>& after_step) {
  const double rlo = R_star();
  const double rhi = r_star(solver.params().alpha) * (1.0 - 1e-9);
  while (solver.time() < m.T - 1e-12) {
    const double tau_n = solver.mesh().tau(solver.level());
    const double tau = solver.adaptive_next_tau(m.tau_min, m.tau_max, m.eta);
    const double R = m.T - solver.time();
    if (R < (1.0 + rlo) * tau) {
      // land exactly on T with equal substeps inside the ratio window
      int k = 1;
      while (k < 100000 && !(R / (k * tau_n) >= rlo && R / (k * tau_n) < rhi))
        ++k;
      const double tl = R / k;
      for (int i = 0; i < k; ++i) {
        solver.step_with(tl);
        if (after_step) after_step();
      }
      return;
    }
    solver.step_with(tau);
    if (after_step) after_step();
  }
}

}  // namespace tfch
