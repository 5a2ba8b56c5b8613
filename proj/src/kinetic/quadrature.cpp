#include "kinetic/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace charids {

GaussLegendre gauss_legendre(int q) {
  if (q < 1) throw std::invalid_argument("quadrature order must be >= 1");
  GaussLegendre r;
  r.x.assign(q, 0.0);
  r.w.assign(q, 0.0);
  for (int i = 0; i < (q + 1) / 2; ++i) {
    // Newton on P_q from the Chebyshev-like initial guess; converges in a
    // handful of steps to full double precision.
    double z = std::cos(M_PI * (i + 0.75) / (q + 0.5));
    double p0 = 0.0, pp = 0.0;
    for (int it = 0; it < 64; ++it) {
      p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < q; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = q * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::fabs(dz) < 1e-15) break;
    }
    // refresh the derivative at the converged root for the weight
    {
      p0 = 1.0;
      double p1 = 0.0;
      for (int j = 0; j < q; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = q * (z * p0 - p1) / (z * z - 1.0);
    }
    r.x[i] = -z;
    r.x[q - 1 - i] = z;
    r.w[i] = r.w[q - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return r;
}

AxisRule mapped_rule(int q, double lo, double hi) {
  const GaussLegendre g = gauss_legendre(q);
  AxisRule r;
  r.p.resize(q);
  r.w.resize(q);
  const double mid = 0.5 * (hi + lo), half = 0.5 * (hi - lo);
  for (int i = 0; i < q; ++i) {
    r.p[i] = mid + half * g.x[i];
    r.w[i] = half * g.w[i];
  }
  return r;
}

MomentumQuadrature build_quadrature(const DensityProfile& f, int n, int q) {
  MomentumQuadrature mq;
  mq.q = q;
  if (f.vacuum()) return mq;
  if (q < 4) throw std::invalid_argument("momentum quadrature needs at least 4 points per axis");
  if (int(f.p_lo.size()) != n || int(f.p_hi.size()) != n)
    throw std::invalid_argument("momentum box does not match the momentum dimension");
  for (int i = 0; i < n; ++i) {
    if (!(f.p_lo[i] < f.p_hi[i]))
      throw std::invalid_argument("momentum box interval is empty");
    mq.axes.push_back(mapped_rule(q, f.p_lo[i], f.p_hi[i]));
  }
  return mq;
}

}  // namespace charids
