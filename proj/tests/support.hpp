#pragma once
// Builders shared across the test suites.
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "core/freedata.hpp"
#include "core/grid.hpp"

namespace testsup {
using namespace charids;

// gamma = e^{lambda x} delta, constant theta, phi = 0, no matter. The whole
// hierarchy reduces to scalar ODEs with closed-form solutions.
inline FreeDataSpec exp_vacuum(int n = 3, double lambda = 1.0, double theta_base = -0.5) {
  FreeDataSpec s;
  s.n = n;
  s.length = 1.0;
  s.ang_extent.assign(n - 1, 2.0 * M_PI);
  s.gamma.lambda = lambda;
  s.gamma.pert_k.assign(n - 1, 0);
  for (int slot = 0; slot < 2; ++slot) {
    s.theta[slot].base = theta_base;
    s.theta[slot].ang_k.assign(n - 1, 0);
    s.phi[slot].ang_k.assign(n - 1, 0);
  }
  return s;
}

inline SurfaceGrid grid_for(const FreeDataSpec& s, Surface surf, int n_gen, int n_ang) {
  return make_surface_grid(surf, s.n, s.length, n_gen, n_ang, s.ang_extent);
}

// Fresh empty scratch directory; wiped if a previous run left one behind.
inline std::string fresh_dir(const std::string& tag) {
  auto base = std::filesystem::temp_directory_path() / ("charids_test_" + tag);
  std::filesystem::remove_all(base);
  std::filesystem::create_directories(base);
  return base.string();
}

}  // namespace testsup
