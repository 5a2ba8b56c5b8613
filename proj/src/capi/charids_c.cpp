#include "charids/charids.h"

#include <cinttypes>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "core/freedata.hpp"
#include "hierarchy/solver.hpp"
#include "io/bundle_io.hpp"
#include "io/config.hpp"
#include "io/run.hpp"
#include "residual/residual.hpp"

using namespace charids;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

// Exceptions must not cross the C boundary; every entry point funnels
// through here.
charids_status translate(std::exception_ptr ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const ValidationError& e) {
    std::string msg = e.what();
    for (const auto& v : e.violations()) msg += "\n  " + v.message;
    set_error(msg);
    return CHARIDS_E_VALIDATION;
  } catch (const ConfigError& e) {
    set_error(e.what());
    return CHARIDS_E_VALIDATION;
  } catch (const SolverError& e) {
    set_error(e.what());
    return CHARIDS_E_SOLVER;
  } catch (const IoError& e) {
    set_error(e.what());
    return CHARIDS_E_IO;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return CHARIDS_E_VALIDATION;
  } catch (const std::exception& e) {
    set_error(e.what());
    return CHARIDS_E_SOLVER;
  } catch (...) {
    set_error("unknown failure");
    return CHARIDS_E_SOLVER;
  }
}

charids_status from_exit_code(int rc) {
  switch (rc) {
    case 0: return CHARIDS_OK;
    case 1: return CHARIDS_E_TOLERANCE;
    case 2: return CHARIDS_E_VALIDATION;
    case 3: return CHARIDS_E_SOLVER;
    case 4: return CHARIDS_E_IO;
    default: return CHARIDS_E_ARG;
  }
}

}  // namespace

struct charids_config {
  RunConfig cfg;
};

struct charids_solution {
  RunConfig cfg;
  std::vector<SolvedBundle> bundles;    // I0 then I1
  std::vector<ResidualReport> reports;  // same order
  std::string report_buf;
};

extern "C" {

const char* charids_version(void) { return "charids 1.0.0"; }

const char* charids_last_error(void) { return g_last_error.c_str(); }

charids_status charids_config_load(const char* path, charids_config** out) {
  if (!path || !out) {
    set_error("null argument");
    return CHARIDS_E_ARG;
  }
  *out = nullptr;
  try {
    auto* h = new charids_config{load_config_file(path)};
    *out = h;
    return CHARIDS_OK;
  } catch (...) {
    return translate(std::current_exception());
  }
}

charids_status charids_config_loads(const char* text, charids_config** out) {
  if (!text || !out) {
    set_error("null argument");
    return CHARIDS_E_ARG;
  }
  *out = nullptr;
  try {
    auto* h = new charids_config{parse_config_text(text)};
    *out = h;
    return CHARIDS_OK;
  } catch (...) {
    return translate(std::current_exception());
  }
}

void charids_config_free(charids_config* cfg) { delete cfg; }

const char* charids_config_canonical(const charids_config* cfg) {
  return cfg ? cfg->cfg.canonical.c_str() : "";
}

uint64_t charids_config_hash(const charids_config* cfg) {
  return cfg ? cfg->cfg.hash : 0;
}

charids_status charids_validate(const charids_config* cfg) {
  if (!cfg) {
    set_error("null argument");
    return CHARIDS_E_ARG;
  }
  std::vector<Violation> vs = validate_free_data(cfg->cfg.spec);
  if (vs.empty()) return CHARIDS_OK;
  std::string msg = "free data rejected";
  for (const auto& v : vs) msg += "\n  " + v.message;
  set_error(msg);
  return CHARIDS_E_VALIDATION;
}

charids_status charids_solve(const char* config_path, const char* out_dir, int quiet) {
  if (!config_path || !out_dir) {
    set_error("null argument");
    return CHARIDS_E_ARG;
  }
  try {
    return from_exit_code(cmd_solve(config_path, out_dir, quiet != 0));
  } catch (...) {
    return translate(std::current_exception());
  }
}

charids_status charids_verify(const char* out_dir, int quiet) {
  if (!out_dir) {
    set_error("null argument");
    return CHARIDS_E_ARG;
  }
  try {
    return from_exit_code(cmd_verify(out_dir, quiet != 0));
  } catch (...) {
    return translate(std::current_exception());
  }
}

charids_status charids_convergence(const char* config_path, const char* out_dir,
                                   int levels, int quiet) {
  if (!config_path || !out_dir) {
    set_error("null argument");
    return CHARIDS_E_ARG;
  }
  try {
    return from_exit_code(cmd_convergence(config_path, out_dir, levels, quiet != 0));
  } catch (...) {
    return translate(std::current_exception());
  }
}

charids_status charids_solve_mem(const charids_config* cfg, charids_solution** out) {
  if (!cfg || !out) {
    set_error("null argument");
    return CHARIDS_E_ARG;
  }
  *out = nullptr;
  try {
    auto sol = std::make_unique<charids_solution>();
    sol->cfg = cfg->cfg;
    for (Surface surf : {Surface::I0, Surface::I1}) {
      SurfaceGrid grid = make_surface_grid(surf, sol->cfg.spec.n, sol->cfg.spec.length,
                                           sol->cfg.n_gen, sol->cfg.n_ang,
                                           sol->cfg.spec.ang_extent);
      SolvedBundle b = solve_surface(sol->cfg.spec, surf, grid, sol->cfg.opt);
      b.config_hash = sol->cfg.hash;
      sol->reports.push_back(verify_bundle(sol->cfg.spec, b, sol->cfg.opt.quad_q));
      sol->bundles.push_back(std::move(b));
    }
    *out = sol.release();
    return CHARIDS_OK;
  } catch (...) {
    return translate(std::current_exception());
  }
}

charids_status charids_solution_write(const charids_solution* sol, const char* out_dir) {
  if (!sol || !out_dir) {
    set_error("null argument");
    return CHARIDS_E_ARG;
  }
  try {
    std::vector<std::pair<std::string, std::uint64_t>> files;
    for (const auto& b : sol->bundles) write_bundle(out_dir, b, files);
    std::vector<const SolvedBundle*> bp;
    for (const auto& b : sol->bundles) bp.push_back(&b);
    write_manifest(out_dir, sol->cfg, bp, sol->reports, files);
    return CHARIDS_OK;
  } catch (...) {
    return translate(std::current_exception());
  }
}

const char* charids_solution_report(charids_solution* sol, int surface, int* out_pass) {
  if (!sol || surface < 0 || surface >= int(sol->reports.size())) {
    if (out_pass) *out_pass = 0;
    return "";
  }
  const ResidualReport& rep = sol->reports[surface];
  if (out_pass) *out_pass = rep.pass ? 1 : 0;
  sol->report_buf.clear();
  for (const auto& [k, v] : residual_lines(rep))
    sol->report_buf += k + " = " + v + "\n";
  return sol->report_buf.c_str();
}

void charids_solution_free(charids_solution* sol) { delete sol; }

}  // extern "C"
