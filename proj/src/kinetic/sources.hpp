#pragma once
#include <array>

#include "core/freedata.hpp"
#include "kinetic/quadrature.hpp"

namespace charids {

// The five Vlasov source integrals at one surface node. "ab" is stored as the
// upper triangle of a symmetric angular 2-tensor.
struct SourceTensors {
  double ham = 0.0;   // weight |theta| sqrt|Theta| (m^2 + Theta_ab p^a p^b)^2 / (p1)^2
  double tr = 0.0;    // weight  theta sqrt|Theta| (m^2 + Theta_ab p^a p^b) / p1
  double fin = 0.0;   // weight |theta|^3 sqrt|Theta| p1
  std::array<double, kMaxAxes> mom{};  // weight |th| sqrt|Th| (m^2+Q) Theta_ab p^b / (p1)^2
  std::array<double, kMaxSym> ab{};    // weight 2 theta sqrt|Th| Theta_ae Theta_bf p^e p^f / p1
};

// Evaluates the integrals by per-axis moment factorization: the density is a
// tensor product, every integrand is a polynomial in the momenta times a
// power of p1, so the full tensor-product Gauss-Legendre sum collapses into
// products of one-dimensional moments. This equals the brute-force sum to
// round-off and costs O((n-1)^4) per node instead of O(Q^n).
class SourceEvaluator {
 public:
  // Inert evaluator (vacuum): every integral is zero.
  SourceEvaluator() = default;
  SourceEvaluator(const DensityProfile& f, const MomentumQuadrature& quad, int n,
                  std::vector<double> kappa);

  bool vacuum() const { return vacuum_; }

  // theta < 0 and Th SPD assumed (validated free data). sqdet = sqrt(det Th).
  void eval(double s, const double* y, double theta, const SmallSym& Th, double sqdet,
            double mass, SourceTensors& out) const;

 private:
  bool vacuum_ = true;
  const DensityProfile* f_ = nullptr;
  std::vector<double> kappa_;
  int d_ = 0;
  double mu_m2_ = 0.0, mu_m1_ = 0.0, mu_p1_ = 0.0;       // generator-momentum moments
  std::array<std::array<double, 5>, kMaxAxes> mom_{};    // angular moments, exponents 0..4
  double mono2(int a, int b) const;                      // <p^a p^b>
  double mono3(int a, int b, int c) const;
  double mono4(int a, int b, int c, int e) const;
};

// Reference path for tests and refinement oracles: the full tensor-product
// summation over every quadrature node, evaluating the density pointwise.
SourceTensors eval_sources_brute(const DensityProfile& f, const MomentumQuadrature& quad, int n,
                                 const std::vector<double>& kappa, double s, const double* y,
                                 double theta, const SmallSym& Th, double sqdet, double mass);

// Matter side of the trace constraint: Theta^{cd} d_c phi d_d phi + V(phi)
// plus twice the trace integral.
double matter_scalar_rhs(const SmallSym& Thi, const double* daphi, double Vval, double S_tr);

// Angular stress tensor: d_a\phi d_b\phi - (1/2) Theta_ab [ (2/theta) u d1phi
// + Theta^{cd} d_c phi d_d phi + V ] minus the rank-2 source integral.
void assemble_T_ab(const SmallSym& Th, const SmallSym& Thi, const double* daphi, double d1phi,
                   double u, double theta, double Vval,
                   const std::array<double, kMaxSym>& S_ab, std::array<double, kMaxSym>& T_out);

}  // namespace charids
