#include "core/grid.hpp"

namespace charids {

SurfaceGrid make_surface_grid(Surface surface, int n, double length, int n_gen,
                              int n_ang, std::vector<double> ang_extent) {
  if (n < 3 || n > 6)
    throw std::invalid_argument("spatial dimension n must lie in [3, 6], got " +
                                std::to_string(n));
  if (!(length > 0.0))
    throw std::invalid_argument("generator length must be positive");
  if (n_gen < 5)
    throw std::invalid_argument("need at least 5 generator stations for the interior stencils");
  if (n_ang < 5)
    throw std::invalid_argument("need at least 5 angular nodes per axis for the interior stencils");
  if (int(ang_extent.size()) != n - 1)
    throw std::invalid_argument("ang_extent must supply one period per angular axis (n-1 values)");
  for (double e : ang_extent)
    if (!(e > 0.0)) throw std::invalid_argument("angular periods must be positive");

  SurfaceGrid g;
  g.surface = surface;
  g.n = n;
  g.length = length;
  g.n_gen = n_gen;
  g.n_ang = n_ang;
  g.ang_extent = std::move(ang_extent);
  return g;
}

}  // namespace charids
