#pragma once
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "core/fields.hpp"
#include "core/grid.hpp"
#include "core/smallmat.hpp"

namespace charids {

// Parametric free-data catalogue. Every profile is analytic, so the solver
// evaluates exact derivatives at arbitrary points along the generator; the
// verifier never sees these closed forms (it differences the sampled fields).

struct Potential {
  enum class Kind { zero, quadratic, quartic };
  Kind kind = Kind::zero;
  double coef = 0.0;  // mu^2 for quadratic, lambda for quartic

  double value(double phi) const {
    switch (kind) {
      case Kind::zero: return 0.0;
      case Kind::quadratic: return coef * phi * phi;
      case Kind::quartic: return coef * phi * phi * phi * phi;
    }
    return 0.0;
  }
  double deriv(double phi) const {
    switch (kind) {
      case Kind::zero: return 0.0;
      case Kind::quadratic: return 2.0 * coef * phi;
      case Kind::quartic: return 4.0 * coef * phi * phi * phi;
    }
    return 0.0;
  }
};

// Plane wave over the periodic angular box: cos(sum_a 2*pi*k_a*y_a/P_a + phase).
struct AngWave {
  std::vector<int> k;     // integer mode per angular axis
  double phase = 0.0;

  // kappa_a = 2*pi*k_a/P_a precomputed against a grid's extents
  double arg(const std::vector<double>& kappa, const double* y) const {
    double w = phase;
    for (std::size_t a = 0; a < kappa.size(); ++a) w += kappa[a] * y[a];
    return w;
  }
};

// Conformal-exponential angular-metric family:
//   gamma_ab(x, y) = exp(lambda*x) * (delta_ab + pert_amp * T_ab(x, y)),
//   T_ab = cos(wave_arg(y) + pert_dphase * tri(a,b)) * cos(gen_freq*x + gen_phase).
// The x^1-independent part keeps the expansion trace at lambda*(n-1); the
// gen_freq factor adds genuinely x-dependent anisotropy when nonzero.
struct GammaProfile {
  double lambda = 1.0;
  double pert_amp = 0.0;
  std::vector<int> pert_k;    // shared wave vector
  double pert_phase = 0.0;    // base phase
  double pert_dphase = 0.0;   // per-component phase offset scale
  double gen_freq = 0.0;
  double gen_phase = 0.0;
};

// theta(s, y) = base * (1 + s_amp*sin(s_freq*s + s_phase))
//             * (1 + ang_amp*cos(ang wave)).  base < 0 everywhere valid.
struct ThetaProfile {
  double base = -0.5;
  double s_amp = 0.0, s_freq = 0.0, s_phase = 0.0;
  double ang_amp = 0.0;
  std::vector<int> ang_k;
  double ang_phase = 0.0;
};

// phi(s, y) = mean + (s_amp + mix_amp*cos(w)) * sin(s_freq*s + s_phase)
//           + ang_amp*cos(w),  w = angular wave argument.
struct PhiProfile {
  double mean = 0.0;
  double s_amp = 0.0, s_freq = 0.0, s_phase = 0.0;
  double ang_amp = 0.0, mix_amp = 0.0;
  std::vector<int> ang_k;
  double ang_phase = 0.0;
};

// Smooth compactly supported mollifier on (0,1), peak value 1 at t = 1/2.
// All derivatives vanish at the endpoints.
double bump01(double t);

// Phase-space density: tensor-product bump over a generator-coordinate
// window, an angular cosine modulation, and a momentum box. Momentum axis 0
// is the generator momentum (p^1 on the first surface, p^0 on the second);
// axes 1..n-1 are angular momenta.
struct DensityProfile {
  double amp = 0.0;  // >= 0; 0 means vacuum on this surface
  double s_lo = 0.0, s_hi = 0.0;
  double ang_amp = 0.0;
  std::vector<int> ang_k;
  double ang_phase = 0.0;
  std::vector<double> p_lo, p_hi;  // size n

  bool vacuum() const { return amp == 0.0; }
  // amp * bump(s window) * (1 + ang_amp*cos(wave)); the momentum factor is
  // split off so quadrature can integrate it once.
  double spatial_factor(double s, const std::vector<double>& kappa, const double* y) const;
  double momentum_factor(const double* p, int n) const;
};

struct Margins {
  double c0 = 0.25, c1 = 0.25, c2 = 0.01, c2p = 0.01;
  double collar = 0.05;
  double eps_exp = 1e-6;
};

struct FreeDataSpec {
  int n = 3;
  double length = 1.0;
  std::vector<double> ang_extent;  // size n-1
  double mass = 1.0;
  Potential potential;
  GammaProfile gamma;
  ThetaProfile theta[2];   // [0] = first surface, [1] = second
  PhiProfile phi[2];
  DensityProfile density[2];
  Margins margins;

  std::vector<double> kappa() const {  // 2*pi*k per unit extent, per axis
    std::vector<double> out(ang_extent.size());
    for (std::size_t a = 0; a < out.size(); ++a) out[a] = 2.0 * M_PI / ang_extent[a];
    return out;
  }
};

// ---- analytic jets ---------------------------------------------------------

inline constexpr int kMaxAxes = SmallSym::kMaxDim;
inline constexpr int kMaxSym = kMaxAxes * (kMaxAxes + 1) / 2;

// Second-order jet of a scalar profile at one surface point.
struct ScalarJet {
  double v = 0, ds = 0;
  std::array<double, kMaxAxes> da{};
  std::array<double, kMaxAxes> dsda{};
  std::array<double, kMaxSym> dab{};  // upper-tri angular Hessian
};

// Jet of the pulled-back angular metric at one surface point.
struct MetricJet {
  SmallSym v, ds, dss;
  std::array<SmallSym, kMaxAxes> da;
  std::array<SmallSym, kMaxAxes> dsda;
  std::array<SmallSym, kMaxSym> dab;
};

// gamma family evaluated at coordinate x (the profile variable), full jet in
// (x, y). d = number of angular axes.
void eval_gamma_jet(const GammaProfile& g, const std::vector<double>& kappa, int d,
                    double x, const double* y, MetricJet& out);

// Pullback to a surface: x = -s on the first surface, x = +s on the second,
// with the chain-rule signs applied to the s-derivatives.
void eval_pullback_jet(const FreeDataSpec& spec, Surface surf, double s, const double* y,
                       MetricJet& out);

void eval_theta_jet(const ThetaProfile& t, const std::vector<double>& kappa, int d,
                    double s, const double* y, ScalarJet& out);
void eval_phi_jet(const PhiProfile& p, const std::vector<double>& kappa, int d,
                  double s, const double* y, ScalarJet& out);

// Profile selection helpers: the generator data of a surface come from its own
// slot; corner data for the transversal derivative come from the other slot.
inline int own_slot(Surface s) { return s == Surface::I0 ? 0 : 1; }
inline int other_slot(Surface s) { return s == Surface::I0 ? 1 : 0; }

// ---- validation ------------------------------------------------------------

enum class ViolationCode {
  domain,            // malformed dimensions/extents/margins
  theta_sign,        // theta >= 0 somewhere
  gamma_spd,         // gamma not positive definite somewhere
  expansion_zero,    // |gamma^{ab} d gamma_ab/dx| below the floor somewhere
  momentum_support,  // generator-momentum support not inside {p > c} with c > 0
  massless_support,  // m = 0 and angular-momentum support box reaches the origin
  density_sign,      // density profile can go negative
  corner_collar,     // density support touches the corner
  corner_mismatch,   // theta or phi disagree between the surfaces at the corner
};

const char* violation_name(ViolationCode c);

struct Violation {
  ViolationCode code;
  std::string message;
};

// Probes profiles on a sampling lattice; returns every violation found (empty
// means valid). Probe density is chosen so the catalogue's smooth profiles
// cannot hide a sign flip between probes at sane parameters.
std::vector<Violation> validate_free_data(const FreeDataSpec& spec);

}  // namespace charids
