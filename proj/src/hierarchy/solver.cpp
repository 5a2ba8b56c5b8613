#include "hierarchy/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "core/fd.hpp"
#include "hierarchy/terms.hpp"
#include "kinetic/quadrature.hpp"
#include "kinetic/sources.hpp"

namespace charids {
namespace {

std::string join_violations(const std::vector<Violation>& v) {
  std::string s = "free data rejected:";
  for (const auto& x : v) {
    s += ' ';
    s += violation_name(x.code);
    s += ": ";
    s += x.message;
    s += ';';
  }
  if (!v.empty()) s.pop_back();
  return s;
}

// One generator position, all angular nodes: derived geometry plus the
// algebraic stage value and its angular gradient (exact slab, FD in angle).
struct GeomSlab {
  double s = 0.0;
  std::vector<NodeGeom> nodes;
  std::vector<double> dapsi11;  // [axis * ang_count + aflat]
};

// Cubic interpolation along the generator in station units. Weights are
// Lagrange, so a query landing exactly on a station reproduces the stored
// value bit for bit.
struct Interp {
  int base = 0;
  double w[4] = {0, 0, 0, 0};
};

Interp make_interp(double t, int n_gen) {
  int base = int(std::floor(t)) - 1;
  base = std::max(0, std::min(base, n_gen - 4));
  Interp it;
  it.base = base;
  const double xi = t - base;
  for (int k = 0; k < 4; ++k) {
    double w = 1.0;
    for (int l = 0; l < 4; ++l)
      if (l != k) w *= (xi - l) / double(k - l);
    it.w[k] = w;
  }
  return it;
}

inline double ipol(const ScalarField& f, const Interp& it, std::size_t aflat) {
  return it.w[0] * f.at(it.base, aflat) + it.w[1] * f.at(it.base + 1, aflat) +
         it.w[2] * f.at(it.base + 2, aflat) + it.w[3] * f.at(it.base + 3, aflat);
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> v)
    : std::runtime_error(join_violations(v)), v_(std::move(v)) {}

SolverError::SolverError(std::string stage, int last_station, double s_fail,
                         const std::string& what)
    : std::runtime_error(what),
      stage_(std::move(stage)),
      last_station_(last_station),
      s_fail_(s_fail) {}

struct SurfaceSolver::Impl {
  FreeDataSpec spec;
  Surface surf;
  SurfaceGrid grid;
  SolveOptions opt;
  int d, nsym;
  std::vector<double> kappa;
  SourceEvaluator src;
  AngDeriv angd;
  SolvedBundle out;
  int stage_done = 0;

  // flat symmetric component bookkeeping
  std::array<int, kMaxSym> sym_a{}, sym_b{};
  std::array<double, kMaxSym> sym_mult{};

  // node fields derived from solved stages
  std::vector<ScalarField> dpsi1;     // [c*d+b] = d_c psi1_b
  std::vector<ScalarField> dpsi1sym;  // symmetrized, flat sym layout
  ScalarField d1chi, d1psi11;
  std::vector<ScalarField> d1psi;     // generator derivative of psi_ab comps

  using RhsFn = std::function<void(const GeomSlab&, const Interp&, const double*, double*)>;
  using StoreFn = std::function<void(int, const double*)>;

  Impl(const FreeDataSpec& sp, Surface sf, const SurfaceGrid& g, const SolveOptions& o)
      : spec(sp), surf(sf), grid(g), opt(o), angd(grid) {
    auto viol = validate_free_data(spec);
    if (!viol.empty()) throw ValidationError(std::move(viol));
    d = grid.ang_axes();
    nsym = sym_count(d);
    kappa = spec.kappa();
    const DensityProfile& f = spec.density[own_slot(surf)];
    if (!f.vacuum()) {
      MomentumQuadrature quad = build_quadrature(f, spec.n, opt.quad_q);
      src = SourceEvaluator(f, quad, spec.n, kappa);
    }
    int k = 0;
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b, ++k) {
        sym_a[k] = a;
        sym_b[k] = b;
        sym_mult[k] = (a == b) ? 1.0 : 2.0;
      }
    out.surface = surf;
    out.grid = grid;
    out.theta = ScalarField(grid);
    out.phi = ScalarField(grid);
    out.Theta = SymTensorField(grid, d);
    out.psi11 = ScalarField(grid);
    out.psi1a = AngularVecField(grid, d);
    out.chi = ScalarField(grid);
    out.u = ScalarField(grid);
    out.psi_ab = SymTensorField(grid, d);
    out.psi01 = ScalarField(grid);
  }

  void require_stage(int have, const char* next) const {
    if (stage_done != have)
      throw std::logic_error(std::string(next) + ": stages must run in order");
  }

  std::string note() const {
    if (opt.euler_debug) return "euler";
    return "rk4 x" + std::to_string(std::max(1, opt.rk_substeps));
  }

  void record(const char* name, double ms, std::string n) {
    out.stages.push_back(StageRecord{name, ms, std::move(n)});
  }

  // Analytic free data and derived geometry at generator position s.
  // station: context for error reports (data valid through it).
  void eval_slab(const char* stage, int station, double s, GeomSlab& slab) {
    const std::size_t ang = grid.ang_count();
    slab.s = s;
    slab.nodes.resize(ang);
    slab.dapsi11.assign(std::size_t(d) * ang, 0.0);
    std::vector<double> yv;
    const int slot = own_slot(surf);
    MetricJet mj;
    ScalarJet tj, pj;
    RawJets rj;
    for (std::size_t aflat = 0; aflat < ang; ++aflat) {
      grid.ang_coords(aflat, yv);
      eval_pullback_jet(spec, surf, s, yv.data(), mj);
      eval_theta_jet(spec.theta[slot], kappa, d, s, yv.data(), tj);
      eval_phi_jet(spec.phi[slot], kappa, d, s, yv.data(), pj);
      rj.th = tj.v;
      rj.d1th = tj.ds;
      rj.dath = tj.da;
      rj.d1dath = tj.dsda;
      rj.dabth = tj.dab;
      rj.phi = pj.v;
      rj.d1phi = pj.ds;
      rj.daphi = pj.da;
      rj.dabphi = pj.dab;
      rj.Th = mj.v;
      rj.d1Th = mj.ds;
      rj.d11Th = mj.dss;
      rj.daTh = mj.da;
      rj.d1daTh = mj.dsda;
      rj.dabTh = mj.dab;
      NodeGeom& g = slab.nodes[aflat];
      char buf[160];
      if (!derive_node_geom(rj, d, spec.mass, spec.potential, src, s, yv.data(), g)) {
        std::snprintf(buf, sizeof buf,
                      "%s on %s: angular metric not invertible at s = %.9g", stage,
                      surface_name(surf), s);
        throw SolverError(stage, station, s, buf);
      }
      if (std::fabs(g.E) < spec.margins.eps_exp) {
        std::snprintf(buf, sizeof buf,
                      "%s on %s: expansion contraction below floor at s = %.9g", stage,
                      surface_name(surf), s);
        throw SolverError(stage, station, s, buf);
      }
      g.psi11 = solve_node_psi11(g);
    }
    std::vector<double> p11(ang);
    for (std::size_t aflat = 0; aflat < ang; ++aflat) p11[aflat] = slab.nodes[aflat].psi11;
    for (int a = 0; a < d; ++a)
      angd.d1_slab(p11.data(), a, slab.dapsi11.data() + std::size_t(a) * ang);
  }

  // RK4 (or Euler) march of a k-component-per-node state along the
  // generator. Geometry is evaluated analytically at every substep point;
  // earlier-stage fields reach the right-hand side through station-cubic
  // interpolation. Every substep is capped: a non-finite or oversized
  // component aborts with the last healthy station.
  void march(const char* stage, int k, std::vector<double> st, const RhsFn& rhs,
             const StoreFn& store) {
    const int N = grid.n_gen;
    const std::size_t ang = grid.ang_count();
    const std::size_t dim = ang * std::size_t(k);
    const int m = opt.euler_debug ? 1 : std::max(1, opt.rk_substeps);
    const double H = grid.h_gen() / m;
    const int nslab = 2 * m + 1;
    std::vector<GeomSlab> slabs(nslab);
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    std::vector<Interp> itp(nslab);

    store(0, st.data());
    for (int i = 0; i + 1 < N; ++i) {
      for (int j = 0; j < nslab; ++j) {
        eval_slab(stage, i, grid.s(i) + j * (H / 2.0), slabs[j]);
        itp[j] = make_interp(double(i) + double(j) / (2.0 * m), N);
      }
      for (int sub = 0; sub < m; ++sub) {
        const GeomSlab& sa = slabs[2 * sub];
        const GeomSlab& sm = slabs[2 * sub + 1];
        const GeomSlab& sc = slabs[2 * sub + 2];
        const Interp& ia = itp[2 * sub];
        const Interp& im = itp[2 * sub + 1];
        const Interp& ic = itp[2 * sub + 2];
        if (opt.euler_debug) {
          rhs(sa, ia, st.data(), k1.data());
          for (std::size_t x = 0; x < dim; ++x) st[x] += H * k1[x];
        } else {
          rhs(sa, ia, st.data(), k1.data());
          for (std::size_t x = 0; x < dim; ++x) tmp[x] = st[x] + 0.5 * H * k1[x];
          rhs(sm, im, tmp.data(), k2.data());
          for (std::size_t x = 0; x < dim; ++x) tmp[x] = st[x] + 0.5 * H * k2[x];
          rhs(sm, im, tmp.data(), k3.data());
          for (std::size_t x = 0; x < dim; ++x) tmp[x] = st[x] + H * k3[x];
          rhs(sc, ic, tmp.data(), k4.data());
          for (std::size_t x = 0; x < dim; ++x)
            st[x] += (H / 6.0) * (k1[x] + 2.0 * k2[x] + 2.0 * k3[x] + k4[x]);
        }
        for (std::size_t x = 0; x < dim; ++x) {
          if (!std::isfinite(st[x]) || std::fabs(st[x]) > opt.field_cap) {
            char buf[200];
            const double sf = grid.s(i) + (sub + 1) * H;
            std::snprintf(buf, sizeof buf,
                          "%s on %s: field magnitude exceeded %.3g near s = %.9g; data "
                          "valid through station %d (s = %.9g), domain truncated there",
                          stage, surface_name(surf), opt.field_cap, sf, i, grid.s(i));
            throw SolverError(stage, i, sf, buf);
          }
        }
      }
      store(i + 1, st.data());
    }
  }

  void run_psi11() {
    require_stage(0, "psi11");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t ang = grid.ang_count();
    GeomSlab slab;
    for (int i = 0; i < grid.n_gen; ++i) {
      eval_slab("psi11", i, grid.s(i), slab);
      for (std::size_t aflat = 0; aflat < ang; ++aflat) {
        const NodeGeom& g = slab.nodes[aflat];
        out.theta.at(i, aflat) = g.th;
        out.phi.at(i, aflat) = g.phi;
        for (int k = 0; k < nsym; ++k)
          out.Theta.comp_flat(k).at(i, aflat) = g.Th(sym_a[k], sym_b[k]);
        out.psi11.at(i, aflat) = g.psi11;
      }
    }
    stage_done = 1;
    record("psi11", elapsed_ms(t0), "algebraic");
  }

  void run_psi1a() {
    require_stage(1, "psi1a");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t ang = grid.ang_count();
    const int k = d;
    std::vector<double> st(ang * std::size_t(k), 0.0);  // corner value
    march(
        "psi1a", k,
        std::move(st),
        [&](const GeomSlab& sl, const Interp&, const double* x, double* dx) {
          double dap[kMaxAxes];
          for (std::size_t aflat = 0; aflat < ang; ++aflat) {
            for (int a = 0; a < d; ++a) dap[a] = sl.dapsi11[std::size_t(a) * ang + aflat];
            x9_rhs(sl.nodes[aflat], x + aflat * std::size_t(k), dap,
                   dx + aflat * std::size_t(k));
          }
        },
        [&](int i, const double* x) {
          for (std::size_t aflat = 0; aflat < ang; ++aflat)
            for (int a = 0; a < d; ++a)
              out.psi1a.comp(a).at(i, aflat) = x[aflat * std::size_t(k) + a];
        });
    dpsi1.assign(std::size_t(d) * d, ScalarField(grid));
    for (int c = 0; c < d; ++c)
      for (int b = 0; b < d; ++b) angd.d1(out.psi1a.comp(b), c, dpsi1[c * d + b]);
    dpsi1sym.assign(nsym, ScalarField(grid));
    for (int kk = 0; kk < nsym; ++kk) {
      const int a = sym_a[kk], b = sym_b[kk];
      auto& dst = dpsi1sym[kk].raw();
      const auto& f1 = dpsi1[a * d + b].raw();
      const auto& f2 = dpsi1[b * d + a].raw();
      for (std::size_t x = 0; x < dst.size(); ++x) dst[x] = 0.5 * (f1[x] + f2[x]);
    }
    stage_done = 2;
    record("psi1a", elapsed_ms(t0), note());
  }

  void run_chi() {
    require_stage(2, "chi");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t ang = grid.ang_count();
    GeomSlab corner;
    eval_slab("chi", 0, 0.0, corner);
    std::vector<double> st(ang, 0.0);
    for (std::size_t aflat = 0; aflat < ang; ++aflat) {
      const NodeGeom& g = corner.nodes[aflat];
      double acc = 0.0;
      for (int kk = 0; kk < nsym; ++kk)
        acc += sym_mult[kk] * g.Thi(sym_a[kk], sym_b[kk]) * (-g.d1Th(sym_a[kk], sym_b[kk]));
      st[aflat] = acc;
    }
    march(
        "chi", 1, std::move(st),
        [&](const GeomSlab& sl, const Interp& it, const double* x, double* dx) {
          double p1[kMaxAxes], dp1[kMaxAxes * kMaxAxes];
          for (std::size_t aflat = 0; aflat < ang; ++aflat) {
            for (int a = 0; a < d; ++a) p1[a] = ipol(out.psi1a.comp(a), it, aflat);
            for (int c = 0; c < d; ++c)
              for (int b = 0; b < d; ++b) dp1[c * d + b] = ipol(dpsi1[c * d + b], it, aflat);
            dx[aflat] = x10_rhs(sl.nodes[aflat], x[aflat], p1, dp1);
          }
        },
        [&](int i, const double* x) {
          for (std::size_t aflat = 0; aflat < ang; ++aflat) out.chi.at(i, aflat) = x[aflat];
        });
    stage_done = 3;
    record("chi", elapsed_ms(t0), note());
  }

  void run_u() {
    require_stage(3, "u");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t ang = grid.ang_count();
    std::vector<double> st(ang, 0.0);
    {
      std::vector<double> yv;
      ScalarJet pj;
      const int slot = other_slot(surf);
      for (std::size_t aflat = 0; aflat < ang; ++aflat) {
        grid.ang_coords(aflat, yv);
        eval_phi_jet(spec.phi[slot], kappa, d, 0.0, yv.data(), pj);
        st[aflat] = pj.ds;
      }
    }
    march(
        "u", 1, std::move(st),
        [&](const GeomSlab& sl, const Interp& it, const double* x, double* dx) {
          double p1[kMaxAxes];
          for (std::size_t aflat = 0; aflat < ang; ++aflat) {
            const NodeGeom& g = sl.nodes[aflat];
            for (int a = 0; a < d; ++a) p1[a] = ipol(out.psi1a.comp(a), it, aflat);
            const double chi_v = ipol(out.chi, it, aflat);
            double A, B;
            u_coeffs(g, chi_v, p1, A, B);
            dx[aflat] = -0.5 * g.th * (A * x[aflat] + B);
          }
        },
        [&](int i, const double* x) {
          for (std::size_t aflat = 0; aflat < ang; ++aflat) out.u.at(i, aflat) = x[aflat];
        });
    stage_done = 4;
    record("u", elapsed_ms(t0), note());
  }

  void run_psi_ab() {
    require_stage(4, "psi_ab");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t ang = grid.ang_count();
    const int k = nsym - 1;  // component (0,0) closed by the trace
    GeomSlab corner;
    eval_slab("psi_ab", 0, 0.0, corner);
    std::vector<double> st(ang * std::size_t(k), 0.0);
    for (std::size_t aflat = 0; aflat < ang; ++aflat)
      for (int kk = 1; kk < nsym; ++kk)
        st[aflat * std::size_t(k) + (kk - 1)] =
            -corner.nodes[aflat].d1Th(sym_a[kk], sym_b[kk]);
    march(
        "psi_ab", k, std::move(st),
        [&](const GeomSlab& sl, const Interp& it, const double* x, double* dx) {
          double p1[kMaxAxes], dps[kMaxSym], full[kMaxSym], od[kMaxSym];
          for (std::size_t aflat = 0; aflat < ang; ++aflat) {
            const NodeGeom& g = sl.nodes[aflat];
            for (int a = 0; a < d; ++a) p1[a] = ipol(out.psi1a.comp(a), it, aflat);
            for (int kk = 0; kk < nsym; ++kk) dps[kk] = ipol(dpsi1sym[kk], it, aflat);
            const double chi_v = ipol(out.chi, it, aflat);
            const double u_v = ipol(out.u, it, aflat);
            double acc = 0.0;
            for (int kk = 1; kk < nsym; ++kk) {
              full[kk] = x[aflat * std::size_t(k) + (kk - 1)];
              acc += sym_mult[kk] * g.Thi(sym_a[kk], sym_b[kk]) * full[kk];
            }
            full[0] = (chi_v - acc) / g.Thi(0, 0);
            x11_rhs(g, chi_v, p1, dps, u_v, full, od);
            for (int kk = 1; kk < nsym; ++kk) dx[aflat * std::size_t(k) + (kk - 1)] = od[kk];
          }
        },
        [&](int i, const double* x) {
          for (std::size_t aflat = 0; aflat < ang; ++aflat) {
            for (int kk = 1; kk < nsym; ++kk)
              out.psi_ab.comp_flat(kk).at(i, aflat) = x[aflat * std::size_t(k) + (kk - 1)];
            SmallSym Th = SmallSym::zero(d), Thi;
            for (int kk = 0; kk < nsym; ++kk)
              Th.set_sym(sym_a[kk], sym_b[kk], out.Theta.comp_flat(kk).at(i, aflat));
            sym_inverse(Th, Thi);
            double acc = 0.0;
            for (int kk = 1; kk < nsym; ++kk)
              acc += sym_mult[kk] * Thi(sym_a[kk], sym_b[kk]) *
                     out.psi_ab.comp_flat(kk).at(i, aflat);
            out.psi_ab.comp_flat(0).at(i, aflat) =
                (out.chi.at(i, aflat) - acc) / Thi(0, 0);
          }
        });
    stage_done = 5;
    record("psi_ab", elapsed_ms(t0), note());
  }

  void run_psi01() {
    require_stage(5, "psi01");
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t ang = grid.ang_count();
    // generator derivatives of the solved fields, by finite differences on
    // their node values
    d1chi = ScalarField(grid);
    gen_d1(grid, out.chi, d1chi);
    d1psi11 = ScalarField(grid);
    gen_d1(grid, out.psi11, d1psi11);
    d1psi.assign(nsym, ScalarField(grid));
    for (int kk = 0; kk < nsym; ++kk) gen_d1(grid, out.psi_ab.comp_flat(kk), d1psi[kk]);

    std::vector<double> st(ang, 0.0);
    {
      std::vector<double> yv;
      ScalarJet tj;
      const int slot = other_slot(surf);
      for (std::size_t aflat = 0; aflat < ang; ++aflat) {
        grid.ang_coords(aflat, yv);
        eval_theta_jet(spec.theta[slot], kappa, d, 0.0, yv.data(), tj);
        st[aflat] = tj.ds;
      }
    }
    march(
        "psi01", 1, std::move(st),
        [&](const GeomSlab& sl, const Interp& it, const double* x, double* dx) {
          double p1[kMaxAxes], psi[kMaxSym], dpsi[kMaxSym];
          for (std::size_t aflat = 0; aflat < ang; ++aflat) {
            const NodeGeom& g = sl.nodes[aflat];
            for (int a = 0; a < d; ++a) p1[a] = ipol(out.psi1a.comp(a), it, aflat);
            for (int kk = 0; kk < nsym; ++kk) {
              psi[kk] = ipol(out.psi_ab.comp_flat(kk), it, aflat);
              dpsi[kk] = ipol(d1psi[kk], it, aflat);
            }
            const double chi_v = ipol(out.chi, it, aflat);
            const double d1chi_v = ipol(d1chi, it, aflat);
            const double d1p11_v = ipol(d1psi11, it, aflat);
            const double u_v = ipol(out.u, it, aflat);
            dx[aflat] =
                x12_rhs(g, x[aflat], chi_v, d1chi_v, p1, d1p11_v, psi, dpsi, u_v);
          }
        },
        [&](int i, const double* x) {
          for (std::size_t aflat = 0; aflat < ang; ++aflat) out.psi01.at(i, aflat) = x[aflat];
        });
    stage_done = 6;
    record("psi01", elapsed_ms(t0), note());
  }
};

SurfaceSolver::SurfaceSolver(const FreeDataSpec& spec, Surface surf, const SurfaceGrid& grid,
                             const SolveOptions& opt)
    : impl_(new Impl(spec, surf, grid, opt)) {}
SurfaceSolver::~SurfaceSolver() = default;
SurfaceSolver::SurfaceSolver(SurfaceSolver&&) noexcept = default;
SurfaceSolver& SurfaceSolver::operator=(SurfaceSolver&&) noexcept = default;

void SurfaceSolver::run_psi11() { impl_->run_psi11(); }
void SurfaceSolver::run_psi1a() { impl_->run_psi1a(); }
void SurfaceSolver::run_chi() { impl_->run_chi(); }
void SurfaceSolver::run_u() { impl_->run_u(); }
void SurfaceSolver::run_psi_ab() { impl_->run_psi_ab(); }
void SurfaceSolver::run_psi01() { impl_->run_psi01(); }

const SolvedBundle& SurfaceSolver::bundle() const { return impl_->out; }
SolvedBundle& SurfaceSolver::bundle() { return impl_->out; }
SolvedBundle SurfaceSolver::take() { return std::move(impl_->out); }

SolvedBundle solve_surface(const FreeDataSpec& spec, Surface surf, const SurfaceGrid& grid,
                           const SolveOptions& opt) {
  SurfaceSolver s(spec, surf, grid, opt);
  s.run_psi11();
  s.run_psi1a();
  s.run_chi();
  s.run_u();
  s.run_psi_ab();
  s.run_psi01();
  return s.take();
}

}  // namespace charids
