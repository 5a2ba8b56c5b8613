// Acceptance gate: every product-level requirement as one pass/fail line.
// Exit code = number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "core/freedata.hpp"
#include "core/smallmat.hpp"
#include "hierarchy/solver.hpp"
#include "io/bundle_io.hpp"
#include "io/config.hpp"
#include "kinetic/quadrature.hpp"
#include "kinetic/sources.hpp"
#include "residual/residual.hpp"
#include "support.hpp"

using namespace charids;
using testsup::exp_vacuum;
using testsup::fresh_dir;
using testsup::grid_for;

namespace {

int g_fail = 0;

void report(int idx, const char* label, bool ok, const std::string& detail) {
  std::printf("[%s] %d. %s%s%s\n", ok ? "PASS" : "FAIL", idx, label,
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_fail;
}

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double field_err(const ScalarField& f, double (*want)(double), const SurfaceGrid& g) {
  double w = 0.0;
  for (int i = 0; i < g.n_gen; ++i)
    for (std::size_t a = 0; a < g.ang_count(); ++a)
      w = std::max(w, std::fabs(f.at(i, a) - want(g.s(i))));
  return w;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// ---- criterion 1 -----------------------------------------------------------

void criterion_closed_form() {
  const double t0 = now_ms();
  FreeDataSpec sp = exp_vacuum(3, 1.0);
  SurfaceGrid g = grid_for(sp, Surface::I0, 65, 8);
  SolvedBundle b = solve_surface(sp, Surface::I0, g);
  const double e11 = field_err(b.psi11, +[](double) { return -0.5; }, g);
  double e1a = 0.0;
  for (int c = 0; c < 2; ++c)
    e1a = std::max(e1a, field_err(b.psi1a.comp(c), +[](double) { return 0.0; }, g));
  const double ech = field_err(b.chi, +[](double s) { return 2.0 * std::exp(1.5 * s); }, g);
  const double eab =
      field_err(b.psi_ab.comp(1, 1), +[](double s) { return std::exp(0.5 * s); }, g);
  const double ms = now_ms() - t0;
  const bool ok = e11 < 1e-12 && e1a < 1e-12 && ech < 1e-8 && eab < 1e-7 && ms < 10000.0;
  report(1, "closed-form vacuum hierarchy", ok,
         fmt("errors %.2e (algebraic) %.2e (trace) %.2e (tensor)", e11, ech, eab) +
             fmt(", %.0f ms", ms));
}

// ---- criteria 2 and 3 ------------------------------------------------------

void criterion_residuals_and_trace() {
  RunConfig cfg = load_config_file(CORPUS_CFG);
  // default resolution gates
  bool gates = true;
  double worst_ode = 0.0, worst_ham = 0.0, worst_trace = 0.0;
  for (Surface surf : {Surface::I0, Surface::I1}) {
    SurfaceGrid g = grid_for(cfg.spec, surf, cfg.n_gen, cfg.n_ang);
    SolvedBundle b = solve_surface(cfg.spec, surf, g, cfg.opt);
    ResidualReport r = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
    for (const auto& e : r.entries) {
      if (e.key == "ham") {
        worst_ham = std::max(worst_ham, e.norms.max);
        gates = gates && e.norms.max <= 1e-8;
      } else if (e.key == "trace_closure") {
        worst_trace = std::max(worst_trace, e.norms.max);
      } else if (e.tol > 0.0) {
        worst_ode = std::max(worst_ode, e.norms.max);
        gates = gates && e.norms.max <= 1e-6;
      }
    }
  }

  // 3-level ladder, finest level chosen so every level supports the stencils
  const double t0 = now_ms();
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (int k = 0; k < 3; ++k) {
    const int factor = 1 << (2 - k);
    const int n_gen = 64 / factor + 1;
    const int n_ang = 20 / factor;
    const double h = cfg.spec.length / (n_gen - 1);
    for (Surface surf : {Surface::I0, Surface::I1}) {
      SurfaceGrid g = grid_for(cfg.spec, surf, n_gen, n_ang);
      SolvedBundle b = solve_surface(cfg.spec, surf, g, cfg.opt);
      ResidualReport r = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
      for (const auto& e : r.entries)
        if (e.tol > 0.0 && e.key != "ham" && e.key != "trace_closure")
          series[std::string(surface_name(surf)) + "." + e.key].push_back(
              {h, e.norms.max});
    }
  }
  double worst_order = 1e9;
  for (const auto& [key, rows] : series) {
    ConvergenceFit fit = estimate_convergence(rows);
    if (!fit.saturated) worst_order = std::min(worst_order, fit.order);
  }
  const double ladder_ms = now_ms() - t0;

  const bool ok2 = gates && worst_order >= 3.0 && ladder_ms < 300000.0;
  report(2, "matter corpus residual gates and convergence", ok2,
         fmt("max transport residual %.2e, algebraic %.2e, min order %.2f", worst_ode,
             worst_ham, worst_order));

  const bool ok3 = worst_trace <= 1e-10;
  report(3, "trace closure on accepted bundles", ok3, fmt("max defect %.2e", worst_trace));
}

// ---- criterion 4 -----------------------------------------------------------

void criterion_stage_order() {
  RunConfig cfg = load_config_file(CORPUS_CFG);
  SurfaceGrid g = grid_for(cfg.spec, Surface::I0, 17, 8);
  auto run = [&](bool pollute) {
    SurfaceSolver s(cfg.spec, Surface::I0, g, cfg.opt);
    s.run_psi11();
    s.run_psi1a();
    s.run_chi();
    if (pollute)
      for (std::size_t i = 0; i < s.bundle().psi01.raw().size(); ++i)
        s.bundle().psi01.raw()[i] = 1e9 * std::cos(double(i));
    s.run_u();
    return s.bundle().u.raw();
  };
  const auto clean = run(false), noisy = run(true);
  const bool ok = clean.size() == noisy.size() &&
                  std::memcmp(clean.data(), noisy.data(),
                              clean.size() * sizeof(double)) == 0;
  report(4, "hierarchy order: transversal scalar ignores later storage", ok,
         ok ? "bit-identical" : "differs");
}

// ---- criterion 5 -----------------------------------------------------------

void criterion_mirror() {
  RunConfig cfg = load_config_file(CORPUS_CFG);
  FreeDataSpec A = cfg.spec, B = cfg.spec;
  std::swap(B.theta[0], B.theta[1]);
  std::swap(B.phi[0], B.phi[1]);
  std::swap(B.density[0], B.density[1]);
  B.gamma.lambda = -A.gamma.lambda;
  B.gamma.gen_phase = -A.gamma.gen_phase;
  SolvedBundle a = solve_surface(A, Surface::I0, grid_for(A, Surface::I0, 17, 8), cfg.opt);
  SolvedBundle b = solve_surface(B, Surface::I1, grid_for(B, Surface::I1, 17, 8), cfg.opt);
  double w = 0.0;
  auto acc = [&](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t i = 0; i < x.size(); ++i) w = std::max(w, std::fabs(x[i] - y[i]));
  };
  acc(a.psi11.raw(), b.psi11.raw());
  for (int c = 0; c < a.psi1a.dim(); ++c) acc(a.psi1a.comp(c).raw(), b.psi1a.comp(c).raw());
  acc(a.chi.raw(), b.chi.raw());
  acc(a.u.raw(), b.u.raw());
  for (int k = 0; k < a.psi_ab.comp_count(); ++k)
    acc(a.psi_ab.comp_flat(k).raw(), b.psi_ab.comp_flat(k).raw());
  acc(a.psi01.raw(), b.psi01.raw());
  report(5, "mirror data swap between the surfaces", w < 1e-12,
         fmt("max component difference %.2e", w));
}

// ---- criterion 6 -----------------------------------------------------------

void criterion_quadrature() {
  bool ok = true;
  std::string why;
  const int n = 3, d = 2;
  DensityProfile f;
  f.amp = 2e-3;
  f.s_lo = 0.2;
  f.s_hi = 0.9;
  f.ang_amp = 0.4;
  f.ang_k = {1, 1};
  f.ang_phase = 0.3;
  f.p_lo = {0.6, 0.25, 0.28};
  f.p_hi = {1.8, 1.45, 1.4};
  std::vector<double> kappa(d, 1.0);
  SourceEvaluator ev(f, build_quadrature(f, n, 24), n, kappa);
  SourceEvaluator ev4(f, build_quadrature(f, n, 96), n, kappa);
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  auto spd = [&](int dim) {
    SmallSym m = SmallSym::identity(dim);
    for (int a = 0; a < dim; ++a)
      for (int b = a; b < dim; ++b) m.set_sym(a, b, (a == b ? 1.0 : 0.0) + 0.3 * u(rng));
    return m;
  };
  double y[2] = {0.4, 1.9};
  double worst_rel = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    SmallSym Th = spd(d);
    SourceTensors a, b;
    ev.eval(0.5, y, -0.6, Th, std::sqrt(sym_det(Th)), 1.0, a);
    ev4.eval(0.5, y, -0.6, Th, std::sqrt(sym_det(Th)), 1.0, b);
    auto rel = [](double p, double q) {
      return std::fabs(p - q) / std::max({1e-30, std::fabs(p), std::fabs(q)});
    };
    worst_rel = std::max({worst_rel, rel(a.ham, b.ham), rel(a.tr, b.tr), rel(a.fin, b.fin)});
    for (int c = 0; c < d; ++c) worst_rel = std::max(worst_rel, rel(a.mom[c], b.mom[c]));
    for (int k = 0; k < sym_count(d); ++k)
      worst_rel = std::max(worst_rel, rel(a.ab[k], b.ab[k]));
  }
  if (worst_rel >= 1e-8) {
    ok = false;
    why += fmt("refinement defect %.2e; ", worst_rel);
  }

  // parity
  DensityProfile fp = f;
  fp.p_lo = {0.6, -0.9, -0.9};
  fp.p_hi = {1.8, 0.9, 0.9};
  SourceEvaluator evp(fp, build_quadrature(fp, n, 16), n, kappa);
  double worst_par = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    SmallSym Th = spd(d);
    SourceTensors out;
    evp.eval(0.5, y, -0.7, Th, std::sqrt(sym_det(Th)), 1.0, out);
    for (int c = 0; c < d; ++c) worst_par = std::max(worst_par, std::fabs(out.mom[c]));
  }
  if (worst_par >= 1e-12) {
    ok = false;
    why += fmt("parity defect %.2e; ", worst_par);
  }

  // randomized linearity + signs
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    DensityProfile rf = f;
    rf.amp = 1e-4 + 4e-3 * u01(rng);
    rf.ang_amp = 0.8 * (2.0 * u01(rng) - 1.0);
    rf.p_lo[0] = 0.3 + 0.4 * u01(rng);
    rf.p_hi[0] = rf.p_lo[0] + 0.4 + u01(rng);
    for (int a2 = 1; a2 < n; ++a2) {
      rf.p_lo[a2] = -1.0 + u01(rng);
      rf.p_hi[a2] = rf.p_lo[a2] + 0.3 + u01(rng);
    }
    SourceEvaluator e1(rf, build_quadrature(rf, n, 10), n, kappa);
    DensityProfile rf2 = rf;
    rf2.amp *= 2.0;
    SourceEvaluator e2(rf2, build_quadrature(rf2, n, 10), n, kappa);
    SmallSym Th = spd(d);
    const double th = -(0.2 + u01(rng));
    SourceTensors a, b;
    e1.eval(0.5, y, th, Th, std::sqrt(sym_det(Th)), 0.8, a);
    e2.eval(0.5, y, th, Th, std::sqrt(sym_det(Th)), 0.8, b);
    if (a.ham < 0.0 || a.fin < 0.0 || a.tr > 0.0) ++bad;
    if (std::fabs(b.ham - 2.0 * a.ham) > 1e-12 * std::max(1.0, a.ham)) ++bad;
  }
  if (bad > 0) {
    ok = false;
    why += fmt("%g randomized failures; ", double(bad));
  }
  report(6, "kinetic source integrals", ok,
         ok ? fmt("refinement %.2e, parity %.2e, 100 randomized profiles", worst_rel,
                  worst_par)
            : why);
}

// ---- criterion 7 -----------------------------------------------------------

void criterion_validator() {
  FreeDataSpec base = exp_vacuum(3, 0.5);
  for (int slot = 0; slot < 2; ++slot) {
    DensityProfile& f = base.density[slot];
    f.amp = 1e-3;
    f.s_lo = 0.2;
    f.s_hi = 0.8;
    f.ang_k = {0, 0};
    f.p_lo = {0.6, 0.3, 0.3};
    f.p_hi = {1.5, 1.2, 1.2};
  }
  bool ok = validate_free_data(base).empty();
  std::string why = ok ? "" : "valid config rejected; ";

  struct Probe {
    ViolationCode code;
    void (*mutate)(FreeDataSpec&);
  };
  const Probe probes[] = {
      {ViolationCode::theta_sign,
       +[](FreeDataSpec& s) { s.theta[0].base = s.theta[1].base = 0.4; }},
      {ViolationCode::gamma_spd,
       +[](FreeDataSpec& s) {
         s.gamma.pert_amp = 1.5;
         s.gamma.pert_k = {1, 1};
       }},
      {ViolationCode::expansion_zero, +[](FreeDataSpec& s) { s.gamma.lambda = 0.0; }},
      {ViolationCode::momentum_support,
       +[](FreeDataSpec& s) { s.density[0].p_lo[0] = 0.1; }},
      {ViolationCode::massless_support,
       +[](FreeDataSpec& s) {
         s.mass = 0.0;
         s.density[0].p_lo = {0.6, -0.5, -0.5};
         s.density[0].p_hi = {1.5, 0.5, 0.5};
       }},
      {ViolationCode::corner_collar, +[](FreeDataSpec& s) { s.density[0].s_lo = 0.01; }},
      {ViolationCode::corner_mismatch, +[](FreeDataSpec& s) { s.theta[1].base = -0.7; }},
  };
  for (const Probe& p : probes) {
    FreeDataSpec s = base;
    p.mutate(s);
    auto v = validate_free_data(s);
    bool hit = !v.empty();
    for (const auto& viol : v) hit = hit && viol.code == p.code;
    if (!hit) {
      ok = false;
      why += fmt("code %g misreported; ", double(int(p.code)));
    }
  }
  report(7, "free-data validator completeness", ok,
         ok ? "seven single-violation probes plus the valid case" : why);
}

// ---- criterion 8 -----------------------------------------------------------

std::string run_capture(const std::string& cmd, int* exit_code) {
  std::string out;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) {
    *exit_code = -1;
    return out;
  }
  char buf[512];
  while (fgets(buf, sizeof buf, p)) out += buf;
  const int rc = pclose(p);
  *exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return out;
}

std::map<std::string, std::string> parse_lines(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    const std::size_t eq = line.find(" = ");
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

void criterion_cli() {
  const std::string cli = CHARIDS_CLI_PATH;
  const std::string d1 = fresh_dir("accept_cli_a");
  const std::string d2 = fresh_dir("accept_cli_b");
  bool ok = true;
  std::string why;
  int rc = 0;

  run_capture(cli + " solve --config " + CORPUS_CFG + " --out " + d1 + " --quiet", &rc);
  if (rc != 0) {
    ok = false;
    why += fmt("solve exit %g; ", double(rc));
  }
  run_capture(cli + " solve --config " + CORPUS_CFG + " --out " + d2 + " --quiet", &rc);
  if (rc != 0) {
    ok = false;
    why += fmt("second solve exit %g; ", double(rc));
  }

  ManifestData m1, m2;
  try {
    m1 = read_manifest(d1);
    m2 = read_manifest(d2);
  } catch (const std::exception& e) {
    report(8, "command-line round-trip and determinism", false, e.what());
    return;
  }
  if (m1.hash != m2.hash) {
    ok = false;
    why += "manifest hashes differ between identical runs; ";
  }

  const std::string vout = run_capture(cli + " verify --out " + d1, &rc);
  if (rc != 0) {
    ok = false;
    why += fmt("verify exit %g; ", double(rc));
  }
  // recomputed norms agree with the recorded ones to 1e-14 relative
  auto recorded = std::map<std::string, std::string>(m1.residuals.begin(), m1.residuals.end());
  auto recomputed = parse_lines(vout);
  int compared = 0;
  double worst = 0.0;
  for (const auto& [k, v] : recorded) {
    if (k.find(".max") == std::string::npos && k.find(".rms") == std::string::npos) continue;
    auto it = recomputed.find(k);
    if (it == recomputed.end()) {
      ok = false;
      why += "missing " + k + "; ";
      continue;
    }
    const double a = std::strtod(v.c_str(), nullptr);
    const double b = std::strtod(it->second.c_str(), nullptr);
    const double rel = std::fabs(a - b) / std::max({1e-300, std::fabs(a), std::fabs(b)});
    worst = std::max(worst, rel);
    ++compared;
  }
  if (compared < 20) {
    ok = false;
    why += fmt("only %g norms compared; ", double(compared));
  }
  if (worst > 1e-14) {
    ok = false;
    why += fmt("norm reproduction defect %.2e; ", worst);
  }
  report(8, "command-line round-trip and determinism", ok,
         ok ? fmt("%g norms reproduced, defect %.2e", double(compared), worst) : why);
}

}  // namespace

int main() {
  criterion_closed_form();
  criterion_residuals_and_trace();
  criterion_stage_order();
  criterion_mirror();
  criterion_quadrature();
  criterion_validator();
  criterion_cli();
  if (g_fail == 0)
    std::printf("all acceptance criteria hold\n");
  else
    std::printf("%d criteria failing\n", g_fail);
  return g_fail;
}
