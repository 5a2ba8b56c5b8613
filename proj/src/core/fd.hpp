#pragma once
#include <cstdint>
#include <vector>

#include "core/fields.hpp"
#include "core/grid.hpp"

namespace charids {

// Fourth-order finite differences on the surface lattice. Angular axes are
// periodic and use centered stencils everywhere; the generator axis is not
// periodic and switches to one-sided 5-point stencils at the two stations
// nearest each end.

class AngDeriv {
 public:
  explicit AngDeriv(const SurfaceGrid& g);

  // Derivative of one angular slab (fixed generator station). f and out must
  // hold ang_count() values and must not alias.
  void d1_slab(const double* f, int axis, double* out) const;
  void d2_slab(const double* f, int axis, double* out) const;

  void d1(const ScalarField& f, int axis, ScalarField& out) const;
  void d2(const ScalarField& f, int axis, ScalarField& out) const;
  // Mixed second derivative by composing two first-derivative stencils;
  // axes may coincide (then prefer d2).
  void d1d1(const ScalarField& f, int axis_a, int axis_b, ScalarField& out) const;

  const SurfaceGrid& grid() const { return *g_; }

 private:
  const SurfaceGrid* g_;
  int n_gen_;
  std::size_t ang_;
  // shift_[axis][(off+2)*ang_ + aflat] = flat index of the node displaced by
  // `off` steps along `axis`, wrapped. Offsets stored: -2,-1,+1,+2.
  std::vector<std::vector<std::uint32_t>> shift_;
  std::size_t shifted(int axis, int off, std::size_t aflat) const {
    const int slot = off < 0 ? off + 2 : off + 1;
    return shift_[axis][std::size_t(slot) * ang_ + aflat];
  }
  mutable std::vector<double> tmp_;
};

// First derivative along the generator for every station. f and out must not
// alias.
void gen_d1(const SurfaceGrid& g, const ScalarField& f, ScalarField& out);

// Same stencil applied to a sampled 1-d profile of length n_gen with spacing h.
void gen_d1_line(const std::vector<double>& f, double h, std::vector<double>& out);

// Second derivative along the generator, fourth order, as a single stencil.
// Composing gen_d1 twice is not equivalent: the stencil switch near the ends
// makes the first-derivative error non-smooth there, and differentiating it
// again costs an order locally. One-sided ends use 6 stations, so full
// accuracy needs n_gen >= 6; at n_gen = 5 the end stations fall back to the
// widest stencil available and drop to third order.
void gen_d2(const SurfaceGrid& g, const ScalarField& f, ScalarField& out);
void gen_d2_line(const std::vector<double>& f, double h, std::vector<double>& out);

}  // namespace charids
