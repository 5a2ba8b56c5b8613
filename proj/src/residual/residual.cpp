#include "residual/residual.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "core/fd.hpp"
#include "hierarchy/terms.hpp"
#include "kinetic/quadrature.hpp"
#include "kinetic/sources.hpp"

namespace charids {
namespace {

struct Accum {
  double mx = 0.0, sq = 0.0;
  std::size_t n = 0;
  void add(double r) {
    const double a = std::fabs(r);
    if (a > mx) mx = a;
    sq += r * r;
    ++n;
  }
  ResidualNorms norms() const {
    ResidualNorms o;
    o.max = mx;
    o.rms = n ? std::sqrt(sq / double(n)) : 0.0;
    return o;
  }
};

void check_sized(const ScalarField& f, const SurfaceGrid& g, const char* what) {
  if (f.raw().size() != g.node_count())
    throw std::invalid_argument(std::string("bundle incomplete: ") + what);
}

}  // namespace

ResidualReport verify_bundle(const FreeDataSpec& spec, const SolvedBundle& b, int quad_q) {
  const SurfaceGrid& grid = b.grid;
  const int d = grid.ang_axes();
  const int nsym = sym_count(d);
  const int N = grid.n_gen;
  const std::size_t ang = grid.ang_count();

  check_sized(b.theta, grid, "theta");
  check_sized(b.phi, grid, "phi");
  check_sized(b.psi11, grid, "psi11");
  check_sized(b.chi, grid, "chi");
  check_sized(b.u, grid, "u");
  check_sized(b.psi01, grid, "psi01");
  if (b.Theta.comp_count() != nsym || b.psi_ab.comp_count() != nsym || b.psi1a.dim() != d)
    throw std::invalid_argument("bundle incomplete: tensor component counts");
  for (int k = 0; k < nsym; ++k) {
    check_sized(b.Theta.comp_flat(k), grid, "Theta");
    check_sized(b.psi_ab.comp_flat(k), grid, "psi_ab");
  }
  for (int a = 0; a < d; ++a) check_sized(b.psi1a.comp(a), grid, "psi1a");

  // flat symmetric component bookkeeping
  std::array<int, kMaxSym> sym_a{}, sym_b{};
  std::array<double, kMaxSym> sym_mult{};
  {
    int k = 0;
    for (int a = 0; a < d; ++a)
      for (int bb = a; bb < d; ++bb, ++k) {
        sym_a[k] = a;
        sym_b[k] = bb;
        sym_mult[k] = (a == bb) ? 1.0 : 2.0;
      }
  }

  const std::vector<double> kappa = spec.kappa();
  SourceEvaluator src;
  const DensityProfile& f = spec.density[own_slot(b.surface)];
  if (!f.vacuum()) {
    MomentumQuadrature quad = build_quadrature(f, spec.n, quad_q);
    src = SourceEvaluator(f, quad, spec.n, kappa);
  }

  AngDeriv angd(grid);

  // every derivative below is FD on the stored node values
  ScalarField d1th(grid), d1phi(grid), d1psi11(grid), d1chi(grid), d1psi01(grid);
  gen_d1(grid, b.theta, d1th);
  gen_d1(grid, b.phi, d1phi);
  gen_d1(grid, b.psi11, d1psi11);
  gen_d1(grid, b.chi, d1chi);
  gen_d1(grid, b.psi01, d1psi01);

  std::vector<ScalarField> dath(d, ScalarField(grid)), daphi(d, ScalarField(grid)),
      d1dath(d, ScalarField(grid)), dapsi11(d, ScalarField(grid));
  for (int a = 0; a < d; ++a) {
    angd.d1(b.theta, a, dath[a]);
    angd.d1(b.phi, a, daphi[a]);
    angd.d1(d1th, a, d1dath[a]);  // generator first, then angle
    angd.d1(b.psi11, a, dapsi11[a]);
  }
  std::vector<ScalarField> dabth(nsym, ScalarField(grid)), dabphi(nsym, ScalarField(grid));
  for (int k = 0; k < nsym; ++k) {
    const int a = sym_a[k], bb = sym_b[k];
    if (a == bb) {
      angd.d2(b.theta, a, dabth[k]);
      angd.d2(b.phi, a, dabphi[k]);
    } else {
      angd.d1d1(b.theta, a, bb, dabth[k]);
      angd.d1d1(b.phi, a, bb, dabphi[k]);
    }
  }

  std::vector<ScalarField> d1Th(nsym, ScalarField(grid)), d11Th(nsym, ScalarField(grid)),
      d1psiab(nsym, ScalarField(grid));
  for (int k = 0; k < nsym; ++k) {
    gen_d1(grid, b.Theta.comp_flat(k), d1Th[k]);
    gen_d2(grid, b.Theta.comp_flat(k), d11Th[k]);
    gen_d1(grid, b.psi_ab.comp_flat(k), d1psiab[k]);
  }
  // daTh[a][k], d1daTh[a][k], dabTh[kab][k]
  std::vector<std::vector<ScalarField>> daTh(d), d1daTh(d), dabTh(nsym);
  for (int a = 0; a < d; ++a) {
    daTh[a].assign(nsym, ScalarField(grid));
    d1daTh[a].assign(nsym, ScalarField(grid));
    for (int k = 0; k < nsym; ++k) {
      angd.d1(b.Theta.comp_flat(k), a, daTh[a][k]);
      angd.d1(d1Th[k], a, d1daTh[a][k]);
    }
  }
  for (int kab = 0; kab < nsym; ++kab) {
    dabTh[kab].assign(nsym, ScalarField(grid));
    const int a = sym_a[kab], bb = sym_b[kab];
    for (int k = 0; k < nsym; ++k) {
      if (a == bb)
        angd.d2(b.Theta.comp_flat(k), a, dabTh[kab][k]);
      else
        angd.d1d1(b.Theta.comp_flat(k), a, bb, dabTh[kab][k]);
    }
  }

  std::vector<ScalarField> d1psi1a(d, ScalarField(grid));
  std::vector<ScalarField> dpsi1(std::size_t(d) * d, ScalarField(grid));
  for (int bb = 0; bb < d; ++bb) {
    gen_d1(grid, b.psi1a.comp(bb), d1psi1a[bb]);
    for (int c = 0; c < d; ++c) angd.d1(b.psi1a.comp(bb), c, dpsi1[c * d + bb]);
  }

  Accum acc_ham, acc_chi, acc_fin, acc_tr, acc_gap;
  std::vector<Accum> acc_mom(d), acc_ang(nsym);

  std::vector<double> yv;
  RawJets rj;
  NodeGeom g;
  for (int i = 0; i < N; ++i) {
    const double s = grid.s(i);
    for (std::size_t af = 0; af < ang; ++af) {
      grid.ang_coords(af, yv);
      rj.th = b.theta.at(i, af);
      rj.d1th = d1th.at(i, af);
      rj.phi = b.phi.at(i, af);
      rj.d1phi = d1phi.at(i, af);
      for (int a = 0; a < d; ++a) {
        rj.dath[a] = dath[a].at(i, af);
        rj.d1dath[a] = d1dath[a].at(i, af);
        rj.daphi[a] = daphi[a].at(i, af);
      }
      for (int k = 0; k < nsym; ++k) {
        rj.dabth[k] = dabth[k].at(i, af);
        rj.dabphi[k] = dabphi[k].at(i, af);
      }
      rj.Th.d = rj.d1Th.d = rj.d11Th.d = d;
      for (int k = 0; k < nsym; ++k) {
        rj.Th.set_sym(sym_a[k], sym_b[k], b.Theta.comp_flat(k).at(i, af));
        rj.d1Th.set_sym(sym_a[k], sym_b[k], d1Th[k].at(i, af));
        rj.d11Th.set_sym(sym_a[k], sym_b[k], d11Th[k].at(i, af));
      }
      for (int a = 0; a < d; ++a) {
        rj.daTh[a].d = rj.d1daTh[a].d = d;
        for (int k = 0; k < nsym; ++k) {
          rj.daTh[a].set_sym(sym_a[k], sym_b[k], daTh[a][k].at(i, af));
          rj.d1daTh[a].set_sym(sym_a[k], sym_b[k], d1daTh[a][k].at(i, af));
        }
      }
      for (int kab = 0; kab < nsym; ++kab) {
        rj.dabTh[kab].d = d;
        for (int k = 0; k < nsym; ++k)
          rj.dabTh[kab].set_sym(sym_a[k], sym_b[k], dabTh[kab][k].at(i, af));
      }

      if (!derive_node_geom(rj, d, spec.mass, spec.potential, src, s, yv.data(), g))
        throw std::invalid_argument("bundle verification: angular metric not invertible");
      g.psi11 = b.psi11.at(i, af);  // the stored algebraic stage value

      acc_ham.add(x8_residual(g));

      double psi1v[kMaxAxes], dap11[kMaxAxes], dp1[kMaxAxes * kMaxAxes];
      for (int a = 0; a < d; ++a) {
        psi1v[a] = b.psi1a.comp(a).at(i, af);
        dap11[a] = dapsi11[a].at(i, af);
      }
      for (int c = 0; c < d; ++c)
        for (int bb = 0; bb < d; ++bb) dp1[c * d + bb] = dpsi1[c * d + bb].at(i, af);

      double rhs9[kMaxAxes];
      x9_rhs(g, psi1v, dap11, rhs9);
      for (int a = 0; a < d; ++a) acc_mom[a].add(d1psi1a[a].at(i, af) - rhs9[a]);

      const double chi_v = b.chi.at(i, af);
      acc_chi.add(d1chi.at(i, af) - x10_rhs(g, chi_v, psi1v, dp1));

      double dpsym[kMaxSym], psi[kMaxSym], dpsiab[kMaxSym], rhs11[kMaxSym];
      for (int k = 0; k < nsym; ++k) {
        dpsym[k] = 0.5 * (dp1[sym_a[k] * d + sym_b[k]] + dp1[sym_b[k] * d + sym_a[k]]);
        psi[k] = b.psi_ab.comp_flat(k).at(i, af);
        dpsiab[k] = d1psiab[k].at(i, af);
      }
      const double u_v = b.u.at(i, af);
      x11_rhs(g, chi_v, psi1v, dpsym, u_v, psi, rhs11);
      for (int k = 0; k < nsym; ++k) acc_ang[k].add(dpsiab[k] - rhs11[k]);

      acc_fin.add(d1psi01.at(i, af) -
                  x12_rhs(g, b.psi01.at(i, af), chi_v, d1chi.at(i, af), psi1v,
                          d1psi11.at(i, af), psi, dpsiab, u_v));

      double trc = 0.0;
      for (int k = 0; k < nsym; ++k)
        trc += sym_mult[k] * g.Thi(sym_a[k], sym_b[k]) * psi[k];
      acc_tr.add((trc - chi_v) / (1.0 + std::fabs(chi_v)));

      acc_gap.add(a17_literal(g, chi_v, d1chi.at(i, af), psi1v, dp1) - g.M / g.th);
    }
  }

  ResidualReport rep;
  rep.surface = b.surface;
  auto push = [&rep](std::string key, const Accum& a, double tol) {
    ResidualEntry e;
    e.key = std::move(key);
    e.norms = a.norms();
    e.tol = tol;
    e.pass = (tol == 0.0) || (e.norms.max <= tol);
    rep.entries.push_back(std::move(e));
  };
  push("ham", acc_ham, kTolHam);
  for (int a = 0; a < d; ++a) push("mom_" + std::to_string(a + 2), acc_mom[a], kTolOde);
  push("chi", acc_chi, kTolOde);
  for (int k = 0; k < nsym; ++k)
    push("ang_" + std::to_string(sym_a[k] + 2) + std::to_string(sym_b[k] + 2), acc_ang[k],
         kTolOde);
  push("final", acc_fin, kTolOde);
  push("trace_closure", acc_tr, kTolTrace);
  rep.ricci_route_gap = acc_gap.norms();

  rep.pass = true;
  for (const auto& e : rep.entries) {
    if (!e.pass) {
      rep.pass = false;
      char buf[128];
      std::snprintf(buf, sizeof buf, "%s: max %.6g exceeds %.3g; ", e.key.c_str(),
                    e.norms.max, e.tol);
      rep.failures += buf;
    }
  }
  if (!rep.failures.empty()) rep.failures.erase(rep.failures.size() - 2);
  return rep;
}

ConvergenceFit estimate_convergence(const std::vector<std::pair<double, double>>& h_norm) {
  if (h_norm.size() < 3)
    throw std::invalid_argument("convergence fit needs at least 3 refinement levels");
  ConvergenceFit fit;
  fit.rows = h_norm;
  double top = 0.0;
  for (const auto& r : h_norm) top = std::max(top, r.second);
  if (top < 1e-13) {
    fit.saturated = true;  // norms at round-off: a slope would fit noise
    fit.order = 0.0;
    return fit;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(h_norm.size());
  for (const auto& r : h_norm) {
    const double x = std::log(r.first);
    const double y = std::log(std::max(r.second, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  fit.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

}  // namespace charids
