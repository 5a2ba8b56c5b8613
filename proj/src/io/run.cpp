#include "io/run.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/freedata.hpp"
#include "core/grid.hpp"
#include "hierarchy/solver.hpp"
#include "io/bundle_io.hpp"
#include "io/config.hpp"
#include "residual/residual.hpp"

namespace charids {
namespace {

SurfaceGrid grid_for(const RunConfig& cfg, Surface surf, int n_gen, int n_ang) {
  return make_surface_grid(surf, cfg.spec.n, cfg.spec.length, n_gen, n_ang,
                           cfg.spec.ang_extent);
}

void print_violations(const ValidationError& e) {
  std::fprintf(stderr, "error: free data rejected\n");
  for (const auto& v : e.violations())
    std::fprintf(stderr, "  %s\n", v.message.c_str());
}

void print_solver_error(const SolverError& e) {
  std::fprintf(stderr, "error: %s\n", e.what());
}

void print_report(const ResidualReport& rep) {
  for (const auto& [k, v] : residual_lines(rep))
    std::fprintf(stdout, "%s = %s\n", k.c_str(), v.c_str());
}

struct SolveProducts {
  std::vector<SolvedBundle> bundles;    // I0 then I1
  std::vector<ResidualReport> reports;  // same order
};

// Solves both surfaces at the given resolution and verifies each bundle.
// Throws ValidationError / SolverError / std::exception upward.
SolveProducts solve_and_check(const RunConfig& cfg, int n_gen, int n_ang, bool quiet) {
  SolveProducts out;
  for (Surface surf : {Surface::I0, Surface::I1}) {
    SurfaceGrid grid = grid_for(cfg, surf, n_gen, n_ang);
    SolvedBundle b = solve_surface(cfg.spec, surf, grid, cfg.opt);
    b.config_hash = cfg.hash;
    if (!quiet)
      for (const auto& st : b.stages)
        std::fprintf(stdout, "%s.%s.ms = %.3f\n", surface_name(surf), st.name.c_str(),
                     st.wall_ms);
    out.reports.push_back(verify_bundle(cfg.spec, b, cfg.opt.quad_q));
    out.bundles.push_back(std::move(b));
  }
  return out;
}

}  // namespace

int cmd_solve(const std::string& config_path, const std::string& out_dir, bool quiet) {
  RunConfig cfg;
  try {
    cfg = load_config_file(config_path);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  SolveProducts prod;
  try {
    prod = solve_and_check(cfg, cfg.n_gen, cfg.n_ang, quiet);
  } catch (const ValidationError& e) {
    print_violations(e);
    return 2;
  } catch (const SolverError& e) {
    print_solver_error(e);
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }

  try {
    std::vector<std::pair<std::string, std::uint64_t>> files;
    for (const auto& b : prod.bundles) write_bundle(out_dir, b, files);
    std::vector<const SolvedBundle*> bp;
    for (const auto& b : prod.bundles) bp.push_back(&b);
    write_manifest(out_dir, cfg, bp, prod.reports, files);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }

  bool all_pass = true;
  for (const auto& rep : prod.reports) {
    if (!quiet) print_report(rep);
    all_pass = all_pass && rep.pass;
  }
  if (!quiet) {
    std::fprintf(stdout, "config_hash = %016" PRIx64 "\n", cfg.hash);
    std::fprintf(stdout, "out = %s\n", out_dir.c_str());
  }
  // Solve succeeded and the bundle is on disk; residual gate failures are
  // reported but re-checking is the verify command's contract.
  if (!all_pass)
    std::fprintf(stderr, "warning: residual gates not met; run verify for details\n");
  return 0;
}

int cmd_verify(const std::string& out_dir, bool quiet) {
  try {
    ManifestData m = read_manifest(out_dir);
    if (manifest_hash(m) != m.hash)
      throw IoError("corrupt manifest (integrity hash mismatch): " + out_dir);

    RunConfig cfg;
    try {
      cfg = parse_config_text(m.config_text);
    } catch (const ConfigError& e) {
      throw IoError(std::string("corrupt manifest config: ") + e.what());
    }

    for (const auto& [rel, recorded] : m.files) {
      std::uint64_t got = hash_file(out_dir + "/" + rel);
      if (got != recorded)
        throw IoError("corrupt field file (hash mismatch): " + rel);
    }

    int rc = 0;
    for (Surface surf : {Surface::I0, Surface::I1}) {
      SolvedBundle b = read_bundle(out_dir, surf, cfg);
      if (b.config_hash != cfg.hash)
        throw IoError(std::string("bundle/config hash mismatch on ") + surface_name(surf));
      ResidualReport rep = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
      if (!quiet) print_report(rep);
      if (!rep.pass) {
        std::fprintf(stderr, "fail: %s %s\n", surface_name(surf), rep.failures.c_str());
        rc = 1;
      }
    }
    if (!quiet) std::fprintf(stdout, "verify = %s\n", rc == 0 ? "pass" : "fail");
    return rc;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    // Anything else at verify time means the stored data is unusable.
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}

int cmd_convergence(const std::string& config_path, const std::string& out_dir, int levels,
                    bool quiet) {
  RunConfig cfg;
  try {
    cfg = load_config_file(config_path);
    if (levels < 3) throw ConfigError("convergence study needs at least 3 levels");
    // The config grid is the finest level; each coarser level halves both
    // resolutions, so the finest grid must support levels-1 halvings.
    for (int k = 0; k < levels; ++k) {
      int factor = 1 << (levels - 1 - k);
      if ((cfg.n_gen - 1) % factor != 0)
        throw ConfigError("grid.n_gen - 1 must be divisible by " + std::to_string(factor));
      if (cfg.n_ang % factor != 0)
        throw ConfigError("grid.n_ang must be divisible by " + std::to_string(factor));
      if ((cfg.n_gen - 1) / factor + 1 < 5 || cfg.n_ang / factor < 5)
        throw ConfigError("coarsest level would drop below 5 points per axis");
    }
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }

  // key -> (h_gen, max-norm) rows, coarse to fine.
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::vector<std::string> key_order;
  try {
    for (int k = 0; k < levels; ++k) {
      int factor = 1 << (levels - 1 - k);
      int n_gen = (cfg.n_gen - 1) / factor + 1;
      int n_ang = cfg.n_ang / factor;
      double h = cfg.spec.length / (n_gen - 1);
      if (!quiet) std::fprintf(stdout, "level %d: n_gen = %d, n_ang = %d\n", k, n_gen, n_ang);
      SolveProducts prod = solve_and_check(cfg, n_gen, n_ang, true);
      for (const auto& rep : prod.reports) {
        std::string pre = std::string(surface_name(rep.surface)) + ".";
        for (const auto& ent : rep.entries) {
          if (ent.tol == 0.0) continue;  // informational entries have no order claim
          std::string key = pre + ent.key;
          if (series.find(key) == series.end()) key_order.push_back(key);
          series[key].push_back({h, ent.norms.max});
        }
      }
    }
  } catch (const ValidationError& e) {
    print_violations(e);
    return 2;
  } catch (const SolverError& e) {
    print_solver_error(e);
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }

  std::string text;
  char line[256];
  std::snprintf(line, sizeof line, "levels = %d\n", levels);
  text += line;
  for (const auto& key : key_order) {
    ConvergenceFit fit;
    fit.rows = series[key];
    fit = estimate_convergence(fit.rows);
    if (fit.saturated)
      std::snprintf(line, sizeof line, "%s.order = saturated\n", key.c_str());
    else
      std::snprintf(line, sizeof line, "%s.order = %.3f\n", key.c_str(), fit.order);
    text += line;
    std::string norms = key + ".norms =";
    for (const auto& [h, v] : series[key]) {
      std::snprintf(line, sizeof line, " %.6g", v);
      norms += line;
    }
    text += norms + "\n";
  }

  try {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);
    write_text_file(out_dir + "/convergence.txt", text);
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  if (!quiet) std::fprintf(stdout, "%s", text.c_str());
  return 0;
}

}  // namespace charids
