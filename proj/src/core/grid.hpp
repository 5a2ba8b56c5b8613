#pragma once
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace charids {

// The two null hypersurfaces carrying the initial data. The generator
// coordinate s runs along the null generators away from the corner surface:
// s = y^1 on I0 = {y^0 = 0}, s = y^0 on I1 = {y^1 = 0}.
enum class Surface { I0, I1 };

inline const char* surface_name(Surface s) { return s == Surface::I0 ? "I0" : "I1"; }

// Discretization of one null surface: N_gen stations along the generator,
// a periodic lattice of N_ang nodes per angular axis (n-1 axes for spatial
// dimension n). Angular axes wrap; the generator interval [0, L] does not.
struct SurfaceGrid {
  Surface surface = Surface::I0;
  int n = 3;                        // spatial dimension, >= 3
  double length = 1.0;              // generator extent L
  int n_gen = 0;                    // stations on [0, L], >= 5
  int n_ang = 0;                    // nodes per angular axis, >= 5
  std::vector<double> ang_extent;   // per-axis period, size n-1

  int ang_axes() const { return n - 1; }
  double h_gen() const { return length / (n_gen - 1); }
  double h_ang(int axis) const { return ang_extent[axis] / n_ang; }
  double s(int i) const { return i * h_gen(); }
  double y(int axis, int j) const { return j * h_ang(axis); }

  std::size_t ang_count() const {
    std::size_t c = 1;
    for (int a = 0; a < ang_axes(); ++a) c *= std::size_t(n_ang);
    return c;
  }
  std::size_t node_count() const { return std::size_t(n_gen) * ang_count(); }

  // Flattening convention: first angular axis slowest.
  std::size_t ang_flat(const std::vector<int>& j) const {
    std::size_t idx = 0;
    for (int a = 0; a < ang_axes(); ++a) idx = idx * n_ang + std::size_t(j[a]);
    return idx;
  }
  void ang_unflat(std::size_t idx, std::vector<int>& j) const {
    j.resize(ang_axes());
    for (int a = ang_axes() - 1; a >= 0; --a) {
      j[a] = int(idx % n_ang);
      idx /= n_ang;
    }
  }
  void ang_coords(std::size_t idx, std::vector<double>& yv) const {
    yv.resize(ang_axes());
    for (int a = ang_axes() - 1; a >= 0; --a) {
      yv[a] = double(idx % n_ang) * h_ang(a);
      idx /= n_ang;
    }
  }
};

// Throws std::invalid_argument on malformed parameters.
SurfaceGrid make_surface_grid(Surface surface, int n, double length, int n_gen,
                              int n_ang, std::vector<double> ang_extent);

}  // namespace charids
