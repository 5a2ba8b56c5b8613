#include "core/fd.hpp"

#include <cassert>

namespace charids {

AngDeriv::AngDeriv(const SurfaceGrid& g) : g_(&g), n_gen_(g.n_gen), ang_(g.ang_count()) {
  const int d = g.ang_axes();
  shift_.resize(d);
  std::vector<int> j;
  for (int axis = 0; axis < d; ++axis) {
    shift_[axis].resize(4 * ang_);
    for (std::size_t aflat = 0; aflat < ang_; ++aflat) {
      g.ang_unflat(aflat, j);
      const int j0 = j[axis];
      int slot = 0;
      for (int off : {-2, -1, 1, 2}) {
        j[axis] = ((j0 + off) % g.n_ang + g.n_ang) % g.n_ang;
        shift_[axis][std::size_t(slot) * ang_ + aflat] = std::uint32_t(g.ang_flat(j));
        ++slot;
      }
      j[axis] = j0;
    }
  }
  tmp_.resize(ang_);
}

void AngDeriv::d1_slab(const double* f, int axis, double* out) const {
  const double inv12h = 1.0 / (12.0 * g_->h_ang(axis));
  for (std::size_t a = 0; a < ang_; ++a) {
    const double fm2 = f[shifted(axis, -2, a)];
    const double fm1 = f[shifted(axis, -1, a)];
    const double fp1 = f[shifted(axis, +1, a)];
    const double fp2 = f[shifted(axis, +2, a)];
    out[a] = (8.0 * (fp1 - fm1) - (fp2 - fm2)) * inv12h;
  }
}

void AngDeriv::d2_slab(const double* f, int axis, double* out) const {
  const double h = g_->h_ang(axis);
  const double inv12h2 = 1.0 / (12.0 * h * h);
  for (std::size_t a = 0; a < ang_; ++a) {
    const double fm2 = f[shifted(axis, -2, a)];
    const double fm1 = f[shifted(axis, -1, a)];
    const double fp1 = f[shifted(axis, +1, a)];
    const double fp2 = f[shifted(axis, +2, a)];
    out[a] = (-(fp2 + fm2) + 16.0 * (fp1 + fm1) - 30.0 * f[a]) * inv12h2;
  }
}

void AngDeriv::d1(const ScalarField& f, int axis, ScalarField& out) const {
  for (int i = 0; i < n_gen_; ++i) d1_slab(f.slab(i), axis, out.slab(i));
}

void AngDeriv::d2(const ScalarField& f, int axis, ScalarField& out) const {
  for (int i = 0; i < n_gen_; ++i) d2_slab(f.slab(i), axis, out.slab(i));
}

void AngDeriv::d1d1(const ScalarField& f, int axis_a, int axis_b, ScalarField& out) const {
  for (int i = 0; i < n_gen_; ++i) {
    double* t = tmp_.data();
    d1_slab(f.slab(i), axis_b, t);
    d1_slab(t, axis_a, out.slab(i));
  }
}

namespace {

// One-sided 5-point first-derivative weights (times 12h) at offsets 0..4
// from the boundary station.
constexpr double kEdge0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
constexpr double kEdge1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};

}  // namespace

void gen_d1(const SurfaceGrid& g, const ScalarField& f, ScalarField& out) {
  const int n = g.n_gen;
  const std::size_t ang = g.ang_count();
  const double inv12h = 1.0 / (12.0 * g.h_gen());
  assert(n >= 5);

  for (int i = 0; i < n; ++i) {
    double* o = out.slab(i);
    if (i >= 2 && i <= n - 3) {
      const double* fm2 = f.slab(i - 2);
      const double* fm1 = f.slab(i - 1);
      const double* fp1 = f.slab(i + 1);
      const double* fp2 = f.slab(i + 2);
      for (std::size_t a = 0; a < ang; ++a)
        o[a] = (8.0 * (fp1[a] - fm1[a]) - (fp2[a] - fm2[a])) * inv12h;
    } else {
      const bool low = i < 2;
      const double* w = (i == 0 || i == n - 1) ? kEdge0 : kEdge1;
      const int base = low ? 0 : n - 1;
      const int step = low ? 1 : -1;
      const double sgn = low ? 1.0 : -1.0;
      for (std::size_t a = 0; a < ang; ++a) o[a] = 0.0;
      for (int k = 0; k < 5; ++k) {
        const double* fk = f.slab(base + step * k);
        const double wk = sgn * w[k] * inv12h;
        for (std::size_t a = 0; a < ang; ++a) o[a] += wk * fk[a];
      }
    }
  }
}

namespace {

// One-sided second-derivative weights (times 12h^2): 6-point at offsets 0..5
// for the boundary station and its neighbour, and the 5-point fallback pair
// used when the grid only has five stations.
constexpr double kD2Edge0[6] = {45.0, -154.0, 214.0, -156.0, 61.0, -10.0};
constexpr double kD2Edge1[6] = {10.0, -15.0, -4.0, 14.0, -6.0, 1.0};
constexpr double kD2Edge0w5[5] = {35.0, -104.0, 114.0, -56.0, 11.0};
constexpr double kD2Edge1w5[5] = {11.0, -20.0, 6.0, 4.0, -1.0};

void d2_edge(const double* w, int pts, const double* const* slabs, std::size_t ang,
             double scale, double* o) {
  for (std::size_t a = 0; a < ang; ++a) o[a] = 0.0;
  for (int k = 0; k < pts; ++k) {
    const double wk = w[k] * scale;
    const double* fk = slabs[k];
    for (std::size_t a = 0; a < ang; ++a) o[a] += wk * fk[a];
  }
}

}  // namespace

void gen_d2(const SurfaceGrid& g, const ScalarField& f, ScalarField& out) {
  const int n = g.n_gen;
  const std::size_t ang = g.ang_count();
  const double h = g.h_gen();
  const double inv12h2 = 1.0 / (12.0 * h * h);
  assert(n >= 5);
  const int pts = n >= 6 ? 6 : 5;

  for (int i = 0; i < n; ++i) {
    double* o = out.slab(i);
    if (i >= 2 && i <= n - 3) {
      const double* fm2 = f.slab(i - 2);
      const double* fm1 = f.slab(i - 1);
      const double* f0 = f.slab(i);
      const double* fp1 = f.slab(i + 1);
      const double* fp2 = f.slab(i + 2);
      for (std::size_t a = 0; a < ang; ++a)
        o[a] = (-(fp2[a] + fm2[a]) + 16.0 * (fp1[a] + fm1[a]) - 30.0 * f0[a]) * inv12h2;
    } else {
      const bool low = i < 2;
      const bool outer = (i == 0 || i == n - 1);
      const double* w = pts == 6 ? (outer ? kD2Edge0 : kD2Edge1)
                                 : (outer ? kD2Edge0w5 : kD2Edge1w5);
      const int base = low ? 0 : n - 1;
      const int step = low ? 1 : -1;
      const double* slabs[6];
      for (int k = 0; k < pts; ++k) slabs[k] = f.slab(base + step * k);
      d2_edge(w, pts, slabs, ang, inv12h2, o);
    }
  }
}

void gen_d2_line(const std::vector<double>& f, double h, std::vector<double>& out) {
  const int n = int(f.size());
  assert(n >= 5);
  out.assign(f.size(), 0.0);
  const double inv12h2 = 1.0 / (12.0 * h * h);
  const int pts = n >= 6 ? 6 : 5;
  for (int i = 0; i < n; ++i) {
    if (i >= 2 && i <= n - 3) {
      out[i] = (-(f[i + 2] + f[i - 2]) + 16.0 * (f[i + 1] + f[i - 1]) - 30.0 * f[i]) * inv12h2;
    } else {
      const bool low = i < 2;
      const bool outer = (i == 0 || i == n - 1);
      const double* w = pts == 6 ? (outer ? kD2Edge0 : kD2Edge1)
                                 : (outer ? kD2Edge0w5 : kD2Edge1w5);
      const int base = low ? 0 : n - 1;
      const int step = low ? 1 : -1;
      double acc = 0.0;
      for (int k = 0; k < pts; ++k) acc += w[k] * f[base + step * k];
      out[i] = acc * inv12h2;
    }
  }
}

void gen_d1_line(const std::vector<double>& f, double h, std::vector<double>& out) {
  const int n = int(f.size());
  assert(n >= 5);
  out.assign(f.size(), 0.0);
  const double inv12h = 1.0 / (12.0 * h);
  for (int i = 0; i < n; ++i) {
    if (i >= 2 && i <= n - 3) {
      out[i] = (8.0 * (f[i + 1] - f[i - 1]) - (f[i + 2] - f[i - 2])) * inv12h;
    } else {
      const bool low = i < 2;
      const double* w = (i == 0 || i == n - 1) ? kEdge0 : kEdge1;
      const int base = low ? 0 : n - 1;
      const int step = low ? 1 : -1;
      const double sgn = low ? 1.0 : -1.0;
      double acc = 0.0;
      for (int k = 0; k < 5; ++k) acc += w[k] * f[base + step * k];
      out[i] = sgn * acc * inv12h;
    }
  }
}

}  // namespace charids
