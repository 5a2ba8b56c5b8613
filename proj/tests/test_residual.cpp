#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "hierarchy/solver.hpp"
#include "io/config.hpp"
#include "residual/residual.hpp"
#include "support.hpp"

using namespace charids;
using testsup::grid_for;

namespace {

RunConfig corpus_config() { return load_config_file(CORPUS_CFG); }

SolvedBundle corpus_small(Surface surf) {
  RunConfig cfg = corpus_config();
  SurfaceGrid g = grid_for(cfg.spec, surf, 17, 8);
  return solve_surface(cfg.spec, surf, g, cfg.opt);
}

const ResidualEntry& entry(const ResidualReport& r, const std::string& key) {
  for (const auto& e : r.entries)
    if (e.key == key) return e;
  REQUIRE(false);
  static ResidualEntry dummy;
  return dummy;
}

void add_noise(ScalarField& f, double amp) {
  for (std::size_t i = 0; i < f.raw().size(); ++i)
    f.raw()[i] += amp * std::sin(2.3 * double(i) + 0.4);
}

}  // namespace

TEST_CASE("clean corpus bundle passes; every key is reported") {
  RunConfig cfg = corpus_config();
  SolvedBundle b = corpus_small(Surface::I0);
  ResidualReport r = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
  // coarse grid: gates are for the default grid, here just check structure
  for (const char* key :
       {"ham", "mom_2", "mom_3", "chi", "ang_22", "ang_23", "ang_33", "final",
        "trace_closure"}) {
    const ResidualEntry& e = entry(r, key);
    CHECK(std::isfinite(e.norms.max));
    CHECK(e.norms.rms <= e.norms.max);
  }
  CHECK(entry(r, "trace_closure").pass);
  CHECK(entry(r, "ham").norms.max < 1e-6);  // coarse but honest
}

// The verifier must catch corruption of each solved field through the
// constraint that determines it.
TEST_CASE("injected errors are detected by the matching residual") {
  RunConfig cfg = corpus_config();
  SolvedBundle clean = corpus_small(Surface::I0);
  ResidualReport base = verify_bundle(cfg.spec, clean, cfg.opt.quad_q);

  SUBCASE("scalar transversal derivative of the metric") {
    SolvedBundle b = clean;
    add_noise(b.psi11, 1e-3);
    ResidualReport r = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
    CHECK(entry(r, "ham").norms.max > 100.0 * entry(base, "ham").norms.max);
    CHECK(entry(r, "ham").norms.max > 1e-4);
  }
  SUBCASE("angular one-form") {
    SolvedBundle b = clean;
    add_noise(b.psi1a.comp(0), 1e-3);
    ResidualReport r = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
    CHECK(entry(r, "mom_2").norms.max > 1e-4);
    CHECK(!r.pass);
    CHECK(r.failures.find("mom_2") != std::string::npos);
  }
  SUBCASE("trace") {
    SolvedBundle b = clean;
    add_noise(b.chi, 1e-3);
    ResidualReport r = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
    CHECK(entry(r, "chi").norms.max > 1e-4);
    CHECK(entry(r, "trace_closure").norms.max > 1e-5);
  }
  SUBCASE("angular tensor") {
    SolvedBundle b = clean;
    add_noise(b.psi_ab.comp(0, 1), 1e-3);
    ResidualReport r = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
    CHECK(entry(r, "ang_23").norms.max > 1e-4);
    // off-diagonal pollution reaches the trace only through the (tiny)
    // off-diagonal inverse metric, but still lands far above the clean level
    CHECK(entry(r, "trace_closure").norms.max >
          1e3 * entry(base, "trace_closure").norms.max);
  }
  SUBCASE("transversal scalar slope") {
    SolvedBundle b = clean;
    // u enters the final constraint only through scalar-matter products, so
    // the coupling is weak on this corpus; a large poke still must register.
    add_noise(b.u, 1e-1);
    ResidualReport r = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
    CHECK(entry(r, "final").norms.max > 5.0 * entry(base, "final").norms.max);
  }
  SUBCASE("final transversal derivative") {
    SolvedBundle b = clean;
    add_noise(b.psi01, 1e-3);
    ResidualReport r = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
    CHECK(entry(r, "final").norms.max > 1e-4);
    CHECK(!r.pass);
  }
}

TEST_CASE("curvature route discrepancy is published but never gated") {
  RunConfig cfg = corpus_config();
  SolvedBundle b = corpus_small(Surface::I1);
  ResidualReport r = verify_bundle(cfg.spec, b, cfg.opt.quad_q);
  // the two evaluation routes genuinely disagree on this data
  CHECK(r.ricci_route_gap.max > 1e-6);
  // yet no entry gates on it
  for (const auto& e : r.entries) CHECK(e.key != "ricci_route_gap");
}

TEST_CASE("incomplete bundles are rejected") {
  RunConfig cfg = corpus_config();
  SolvedBundle b = corpus_small(Surface::I0);
  SolvedBundle empty;
  empty.surface = b.surface;
  empty.grid = b.grid;
  CHECK_THROWS_AS(verify_bundle(cfg.spec, empty, 8), std::invalid_argument);
}

TEST_CASE("convergence fit: clean fourth-order data") {
  std::vector<std::pair<double, double>> rows;
  for (double h : {0.1, 0.05, 0.025, 0.0125}) rows.push_back({h, 3.0 * h * h * h * h});
  ConvergenceFit fit = estimate_convergence(rows);
  CHECK(!fit.saturated);
  CHECK(fit.order == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("convergence fit: saturation and input checks") {
  CHECK_THROWS_AS(estimate_convergence({{0.1, 1e-3}, {0.05, 1e-4}}), std::invalid_argument);
  ConvergenceFit sat =
      estimate_convergence({{0.1, 1e-15}, {0.05, 2e-15}, {0.025, 1e-16}});
  CHECK(sat.saturated);
}
