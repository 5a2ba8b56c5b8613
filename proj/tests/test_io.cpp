#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hierarchy/solver.hpp"
#include "io/bundle_io.hpp"
#include "io/config.hpp"
#include "residual/residual.hpp"
#include "support.hpp"

using namespace charids;
using testsup::fresh_dir;
using testsup::grid_for;

TEST_CASE("content hash: reference values and sensitivity") {
  CHECK(fnv1a64("") == 14695981039346656037ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("ab") != fnv1a64("ba"));
}

TEST_CASE("empty config text yields the documented defaults") {
  RunConfig c = parse_config_text("");
  CHECK(c.spec.n == 3);
  CHECK(c.n_gen == 65);
  CHECK(c.n_ang == 16);
  CHECK(c.spec.length == 1.0);
  CHECK(c.opt.quad_q == 24);
  CHECK(c.opt.rk_substeps == 2);
  CHECK(!c.opt.euler_debug);
  CHECK(c.spec.gamma.lambda == 1.0);
  CHECK(c.spec.theta[0].base == -0.5);
  CHECK(c.spec.mass == 1.0);
  CHECK(c.spec.ang_extent.size() == 2);
  // wave vectors are always sized to the angular axis count
  CHECK(c.spec.gamma.pert_k.size() == 2);
  CHECK(c.spec.theta[1].ang_k.size() == 2);
  CHECK(c.spec.phi[0].ang_k.size() == 2);
  // densities default to vacuum
  CHECK(c.spec.density[0].vacuum());
  CHECK(c.spec.density[1].vacuum());
}

TEST_CASE("canonical form is closed under reparsing") {
  RunConfig a = parse_config_text("run.n = 4\ngamma.lambda = 0.25\ngrid.n_ang = 10\n");
  CHECK(a.spec.n == 4);
  CHECK(a.spec.gamma.pert_k.size() == 3);
  RunConfig b = parse_config_text(a.canonical);
  CHECK(b.canonical == a.canonical);
  CHECK(b.hash == a.hash);
  // canonical text is sorted and complete
  CHECK(a.canonical.find("run.quad_q = 24") != std::string::npos);
  CHECK(a.canonical.find("gamma.lambda = 0.25") != std::string::npos);
}

TEST_CASE("config schema violations carry the offending key") {
  auto rejects = [](const std::string& text, const std::string& needle) {
    try {
      parse_config_text(text);
      FAIL_CHECK("accepted: " << text);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  rejects("run.n = 7\n", "run.n");
  rejects("run.n = 2\n", "run.n");
  rejects("grid.n_gen = 3\n", "grid.n_gen");
  rejects("run.integrator = leapfrog\n", "run.integrator");
  rejects("matter.potential = cubic\n", "matter.potential");
  rejects("grid.length = 0\n", "grid.length");
  rejects("run.n = 3\nrun.n = 4\n", "duplicate");
  rejects("no.such.key = 1\n", "unknown key");
  rejects("run.n\n", "expected key = value");  // malformed lines report position
  rejects("run.quad_q = 1\n", "run.quad_q");
  rejects("f0.p_lo = 0.5, 0.5\n", "f0.p_lo");   // must give n intervals
  rejects("gamma.pert_k = 1, 2, 3\n", "gamma.pert_k");  // d = 2 here
  rejects("theta0.base = abc\n", "theta0.base");
}

TEST_CASE("comments, blank lines, and list broadcast") {
  RunConfig c = parse_config_text(
      "# leading comment\n"
      "\n"
      "run.n = 5\n"
      "grid.extent = 3.0   # one value serves every axis\n");
  CHECK(c.spec.n == 5);
  REQUIRE(c.spec.ang_extent.size() == 4);
  for (double e : c.spec.ang_extent) CHECK(e == 3.0);
  RunConfig c2 = parse_config_text("run.n = 4\ngrid.extent = 1.0, 2.0, 3.0\n");
  CHECK(c2.spec.ang_extent == std::vector<double>{1.0, 2.0, 3.0});
}

TEST_CASE("missing config file raises an io failure, not a parse failure") {
  CHECK_THROWS_AS(load_config_file("/nonexistent/path.cfg"), IoError);
}

TEST_CASE("bundle files round-trip bit-exactly") {
  RunConfig cfg = load_config_file(CORPUS_CFG);
  cfg.n_gen = 17;
  cfg.n_ang = 8;
  const std::string dir = fresh_dir("roundtrip");

  std::vector<SolvedBundle> bundles;
  std::vector<ResidualReport> reports;
  std::vector<std::pair<std::string, std::uint64_t>> files;
  for (Surface surf : {Surface::I0, Surface::I1}) {
    SurfaceGrid g = grid_for(cfg.spec, surf, cfg.n_gen, cfg.n_ang);
    SolvedBundle b = solve_surface(cfg.spec, surf, g, cfg.opt);
    b.config_hash = cfg.hash;
    reports.push_back(verify_bundle(cfg.spec, b, cfg.opt.quad_q));
    bundles.push_back(std::move(b));
    write_bundle(dir, bundles.back(), files);
  }
  CHECK(files.size() == 18);  // nine fields per surface
  std::vector<const SolvedBundle*> bp{&bundles[0], &bundles[1]};
  write_manifest(dir, cfg, bp, reports, files);

  for (int which = 0; which < 2; ++which) {
    const SolvedBundle& a = bundles[which];
    SolvedBundle r = read_bundle(dir, a.surface, cfg);
    CHECK(r.config_hash == cfg.hash);
    auto same = [](const std::vector<double>& x, const std::vector<double>& y) {
      REQUIRE(x.size() == y.size());
      return std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
    };
    CHECK(same(a.theta.raw(), r.theta.raw()));
    CHECK(same(a.phi.raw(), r.phi.raw()));
    for (int k = 0; k < a.Theta.comp_count(); ++k)
      CHECK(same(a.Theta.comp_flat(k).raw(), r.Theta.comp_flat(k).raw()));
    CHECK(same(a.psi11.raw(), r.psi11.raw()));
    for (int c = 0; c < a.psi1a.dim(); ++c)
      CHECK(same(a.psi1a.comp(c).raw(), r.psi1a.comp(c).raw()));
    CHECK(same(a.chi.raw(), r.chi.raw()));
    CHECK(same(a.u.raw(), r.u.raw()));
    for (int k = 0; k < a.psi_ab.comp_count(); ++k)
      CHECK(same(a.psi_ab.comp_flat(k).raw(), r.psi_ab.comp_flat(k).raw()));
    CHECK(same(a.psi01.raw(), r.psi01.raw()));

    // verification on the read-back bundle reproduces the norms exactly
    ResidualReport rr = verify_bundle(cfg.spec, r, cfg.opt.quad_q);
    REQUIRE(rr.entries.size() == reports[which].entries.size());
    for (std::size_t e = 0; e < rr.entries.size(); ++e) {
      CHECK(rr.entries[e].norms.max == reports[which].entries[e].norms.max);
      CHECK(rr.entries[e].norms.rms == reports[which].entries[e].norms.rms);
    }
  }
}

TEST_CASE("manifest records config, hashes, and residual lines") {
  RunConfig cfg = load_config_file(CORPUS_CFG);
  cfg.n_gen = 9;
  cfg.n_ang = 8;
  const std::string dir = fresh_dir("manifest");
  std::vector<SolvedBundle> bundles;
  std::vector<ResidualReport> reports;
  std::vector<std::pair<std::string, std::uint64_t>> files;
  for (Surface surf : {Surface::I0, Surface::I1}) {
    SurfaceGrid g = grid_for(cfg.spec, surf, cfg.n_gen, cfg.n_ang);
    bundles.push_back(solve_surface(cfg.spec, surf, g, cfg.opt));
    bundles.back().config_hash = cfg.hash;
    reports.push_back(verify_bundle(cfg.spec, bundles.back(), cfg.opt.quad_q));
    write_bundle(dir, bundles.back(), files);
  }
  write_manifest(dir, cfg, {&bundles[0], &bundles[1]}, reports, files);

  ManifestData m = read_manifest(dir);
  CHECK(m.config_text == cfg.canonical);
  CHECK(m.files.size() == 18);
  CHECK(manifest_hash(m) == m.hash);
  // recorded per-file hashes match what is on disk
  for (const auto& [rel, h] : m.files) CHECK(hash_file(dir + "/" + rel) == h);
  // residual lines carry both surfaces
  bool saw0 = false, saw1 = false;
  for (const auto& [k, v] : m.residuals) {
    if (k.rfind("I0.", 0) == 0) saw0 = true;
    if (k.rfind("I1.", 0) == 0) saw1 = true;
  }
  CHECK(saw0);
  CHECK(saw1);

  SUBCASE("tampering is visible") {
    std::ofstream(dir + "/I0/u.csv", std::ios::app) << "tail\n";
    bool caught = false;
    for (const auto& [rel, h] : m.files)
      if (rel == "I0/u.csv" && hash_file(dir + "/" + rel) != h) caught = true;
    CHECK(caught);
  }
  SUBCASE("manifest tampering breaks the integrity hash") {
    ManifestData t = m;
    t.residuals[0].second = "0.5";
    CHECK(manifest_hash(t) != m.hash);
  }
  SUBCASE("missing and malformed field files") {
    CHECK_THROWS_AS(read_bundle(dir + "_nope", Surface::I0, cfg), IoError);
    std::filesystem::remove(dir + "/I1/chi.csv");
    CHECK_THROWS_AS(read_bundle(dir, Surface::I1, cfg), IoError);
    // truncated file
    {
      std::ifstream in(dir + "/I0/chi.csv");
      std::string all((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
      std::ofstream out(dir + "/I0/chi.csv", std::ios::trunc);
      out << all.substr(0, all.size() / 2);
    }
    CHECK_THROWS_AS(read_bundle(dir, Surface::I0, cfg), IoError);
  }
}

TEST_CASE("solved bundles are deterministic across repeated runs") {
  RunConfig cfg = load_config_file(CORPUS_CFG);
  SurfaceGrid g = grid_for(cfg.spec, Surface::I0, 17, 8);
  SolvedBundle a = solve_surface(cfg.spec, Surface::I0, g, cfg.opt);
  SolvedBundle b = solve_surface(cfg.spec, Surface::I0, g, cfg.opt);
  CHECK(std::memcmp(a.psi01.raw().data(), b.psi01.raw().data(),
                    a.psi01.raw().size() * sizeof(double)) == 0);
  CHECK(std::memcmp(a.u.raw().data(), b.u.raw().data(),
                    a.u.raw().size() * sizeof(double)) == 0);
}
