#pragma once
#include <array>
#include <cmath>

#include "core/freedata.hpp"
#include "core/smallmat.hpp"
#include "kinetic/sources.hpp"

// Pointwise constraint algebra shared by the marching solver and the
// a-posteriori verifier. Everything here is plain arithmetic on one node's
// jet values: the two callers differ only in how those jets are produced
// (closed-form evaluation during the solve, finite differences of the stored
// fields during verification).

namespace charids {

// Jet values of the on-surface data at one node. d1 means the derivative
// along the surface's own generator coordinate, da the angular gradient.
struct RawJets {
  double th = 0, d1th = 0;
  std::array<double, kMaxAxes> dath{};
  std::array<double, kMaxAxes> d1dath{};
  std::array<double, kMaxSym> dabth{};
  double phi = 0, d1phi = 0;
  std::array<double, kMaxAxes> daphi{};
  std::array<double, kMaxSym> dabphi{};
  SmallSym Th, d1Th, d11Th;
  std::array<SmallSym, kMaxAxes> daTh{};
  std::array<SmallSym, kMaxAxes> d1daTh{};
  std::array<SmallSym, kMaxSym> dabTh{};
};

// Derived per-node geometry. Retains the raw pieces the constraint
// expressions consume directly; everything metric-contracted is precomputed
// once here so the stage assemblies stay readable.
struct NodeGeom {
  int d = 0;
  // retained raw data
  double th = 0, d1th = 0, phi = 0, d1phi = 0;
  std::array<double, kMaxAxes> dath{};
  std::array<double, kMaxAxes> d1dath{};
  std::array<double, kMaxAxes> daphi{};
  SmallSym Th, d1Th;
  std::array<SmallSym, kMaxAxes> daTh{};
  // inverse metric and volume factor
  SmallSym Thi;
  double sqdet = 0;
  // expansion family: E = Th^{ab} d1Th_ab, A^b_a = Th^{bc} d1Th_ca (row b,
  // col a), K = tr A^2, d1E = -K + Th^{ab} d11Th_ab, Aup = Thi d1Th Thi.
  double E = 0, K = 0, d1E = 0;
  std::array<double, kMaxAxes * kMaxAxes> A{};
  std::array<double, kMaxSym> Aup{};
  // conformal connection of Th on the angular slice
  std::array<std::array<double, kMaxSym>, kMaxAxes> Gam{};  // Gam[c][ab]
  std::array<double, kMaxAxes> Gtr{};                       // Gam^d_{dc}
  std::array<double, kMaxSym> divGam{};                     // d_c Gam^c_{ab}
  std::array<double, kMaxAxes> diTh{};                      // d_c Th^{cd}
  std::array<double, kMaxSym> GG{};                         // Gam^c_{ad} Gam^d_{cb}
  std::array<double, kMaxSym> lgG{};   // (d_c ln|th| + Gtr_c) Gam^c_{ab}
  // log-lapse gradients
  std::array<double, kMaxAxes> lth{};
  std::array<double, kMaxSym> llth{};
  // Dab = d_a(Th^{cd} d_b Th_cd); symmetric
  std::array<double, kMaxSym> Dab{};
  // divA_a = d_c(Th^{cb} d1Th_{ab})
  std::array<double, kMaxAxes> divA{};
  // trace-constraint prefabs: w1[e] carries the psi_1e coefficient
  // (1/2) Th^{ce} Th^{ab} (2 d_a Th_cb - d_c Th_ab); x10_geo the
  // psi-independent remainder of the trace equation's left side.
  std::array<double, kMaxAxes> w1{};
  double x10_geo = 0;
  // scalar-field contractions
  double trddphi = 0;  // Th^{ab} d2_ab phi
  double gamdphi = 0;  // Th^{ab} Gam^c_{ab} d_c phi
  double trddth = 0;   // Th^{cd} d2_cd theta
  // matter
  double V = 0, Vp = 0;
  SourceTensors S;
  double M = 0;  // Th^{cd} d_c phi d_d phi + V + 2 S.tr
  // algebraic stage value; the solver stores the closed-form solve here, the
  // verifier the field value read back from the bundle.
  double psi11 = 0;
};

// Builds NodeGeom from one node's jets. Returns false when the angular
// metric fails to invert (impossible on validated data; callers attach
// location context).
bool derive_node_geom(const RawJets& j, int d, double mass, const Potential& pot,
                      const SourceEvaluator& src, double s, const double* y, NodeGeom& g);

// Hamiltonian stage. solve form: the unique psi11 making x8_residual vanish.
// Caller guards |E| >= eps before dividing.
inline double solve_node_psi11(const NodeGeom& g) {
  const double num = 4.0 * g.d1phi * g.d1phi - 2.0 * g.S.ham - 2.0 * g.th * g.d1E -
                     g.th * g.K + 2.0 * g.d1th * g.E;
  return num / g.E;
}
inline double x8_residual(const NodeGeom& g) {
  return g.psi11 * g.E + 2.0 * g.th * g.d1E + g.th * g.K - 2.0 * g.d1th * g.E -
         4.0 * g.d1phi * g.d1phi + 2.0 * g.S.ham;
}

// Momentum stage: d1 psi1a = x9_rhs_a. psi1 has d entries; dapsi11[c] is the
// angular gradient of psi11 at this node.
void x9_rhs(const NodeGeom& g, const double* psi1, const double* dapsi11, double* out);

// Trace stage: d1 chi = x10_rhs. dpsi1 is row-major [c * d + b] = d_c psi1_b.
double x10_rhs(const NodeGeom& g, double chi, const double* psi1, const double* dpsi1);

// Transversal scalar-derivative stage, d1 u = -(th/2)(A u + B).
void u_coeffs(const NodeGeom& g, double chi, const double* psi1, double& A, double& B);

// Angular stage: d1 psi_ab = x11_rhs_ab for every symmetric component
// (closure component included; the solver integrates the others and closes
// the trace, the verifier checks all of them). dpsi1sym holds the
// symmetrized angular gradient (1/2)(d_a psi1_b + d_b psi1_a); psi the full
// symmetric component set.
void x11_rhs(const NodeGeom& g, double chi, const double* psi1, const double* dpsi1sym,
             double u, const double* psi, double* out);

// Final stage: d1 psi01 = x12_rhs. d1-prefixed arguments are generator
// derivatives of earlier-stage fields, obtained outside (the solver by FD on
// its own output, the verifier by FD on the bundle).
double x12_rhs(const NodeGeom& g, double psi01, double chi, double d1chi, const double* psi1,
               double d1psi11, const double* psi, const double* d1psi, double u);

// The printed closed form of the slice curvature scalar, taken verbatim
// including its dangling-index term, which we evaluate under a free-sum
// convention over all four indices. Reported against the matter-side route
// M/th; the verifier publishes the gap without adjudicating it.
double a17_literal(const NodeGeom& g, double chi, double d1chi, const double* psi1,
                   const double* dpsi1);

// Angular stress tensor and the tangential trace combination entering the
// angular and final stages.
void stress_T_ab(const NodeGeom& g, double u, std::array<double, kMaxSym>& T_out);
double sym_contract(const SmallSym& m, const double* sym_vals, int d);
double sym_pair_contract(const double* m, const double* v, int d);

}  // namespace charids
