#pragma once
#include <vector>

#include "core/freedata.hpp"

namespace charids {

// Gauss-Legendre rule on [-1, 1], nodes ascending.
struct GaussLegendre {
  std::vector<double> x, w;
};
GaussLegendre gauss_legendre(int q);

// One momentum axis mapped onto its support interval.
struct AxisRule {
  std::vector<double> p, w;
};
AxisRule mapped_rule(int q, double lo, double hi);

// Tensor-product quadrature over the declared momentum support box.
// Axis 0 is the generator momentum; axes 1..n-1 are angular momenta.
struct MomentumQuadrature {
  int q = 0;
  std::vector<AxisRule> axes;  // empty for a vacuum profile
  bool empty() const { return axes.empty(); }
};

// Throws std::invalid_argument when q < 4 or the box is malformed.
MomentumQuadrature build_quadrature(const DensityProfile& f, int n, int q);

}  // namespace charids
