#pragma once
#include <string>
#include <utility>
#include <vector>

#include "core/freedata.hpp"
#include "hierarchy/solver.hpp"

namespace charids {

// A-posteriori verification: the solved bundle is plugged back into the
// constraint set with every derivative taken by finite differences on the
// stored node values. Nothing here reuses the solver's marching internals;
// the shared ground is the pointwise constraint algebra and the FD
// primitives.

// Pass thresholds on the max norms. The algebraic constraint sits at FD
// truncation level by construction; the marched stages carry integrator
// error on top, hence the looser gate. Trace closure is enforced relative
// to the field scale.
inline constexpr double kTolHam = 1e-8;
inline constexpr double kTolOde = 1e-6;
inline constexpr double kTolTrace = 1e-10;

struct ResidualNorms {
  double max = 0.0;
  double rms = 0.0;
};

struct ResidualEntry {
  std::string key;  // ham, mom_2.., chi, ang_22.., final, trace_closure
  ResidualNorms norms;
  double tol = 0.0;  // gate on max norm; 0 = informational
  bool pass = true;
};

struct ResidualReport {
  Surface surface = Surface::I0;
  std::vector<ResidualEntry> entries;
  // Discrepancy between the literal closed form of the slice curvature
  // scalar and the substitution route through the matter side. Published,
  // never gated: the two routes differ by a modeling gap, not discretization.
  ResidualNorms ricci_route_gap;
  bool pass = true;
  std::string failures;  // empty when pass
};

// Full verification of one surface bundle. quad_q = Gauss-Legendre points
// per momentum axis for the source integrals. Throws std::invalid_argument
// on an incomplete bundle.
ResidualReport verify_bundle(const FreeDataSpec& spec, const SolvedBundle& b, int quad_q = 24);

// Least-squares fitted convergence order from (h, norm) pairs across
// refinement levels. Requires at least 3 levels. Norms at round-off are
// reported as saturated instead of fitting noise.
struct ConvergenceFit {
  std::vector<std::pair<double, double>> rows;  // (h, norm)
  double order = 0.0;
  bool saturated = false;
};

ConvergenceFit estimate_convergence(const std::vector<std::pair<double, double>>& h_norm);

}  // namespace charids
