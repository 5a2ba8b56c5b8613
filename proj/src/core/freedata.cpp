#include "core/freedata.hpp"

#include <cmath>
#include <cstdio>

namespace charids {

double bump01(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  // exp(8 - 2/(t(1-t))): peak 1 at t=1/2. The exponent scale is tuned so the
  // default 24-point Gauss-Legendre rule resolves box moments to ~5e-9
  // relative; sharper mollifiers push the quadrature error past 1e-8.
  return std::exp(8.0 - 2.0 / (t * (1.0 - t)));
}

double DensityProfile::spatial_factor(double s, const std::vector<double>& kappa,
                                      const double* y) const {
  if (amp == 0.0) return 0.0;
  const double w = s_hi - s_lo;
  const double b = bump01((s - s_lo) / w);
  if (b == 0.0) return 0.0;
  double arg = ang_phase;
  for (std::size_t a = 0; a < kappa.size(); ++a) arg += kappa[a] * ang_k[a] * y[a];
  return amp * b * (1.0 + ang_amp * std::cos(arg));
}

double DensityProfile::momentum_factor(const double* p, int n) const {
  double v = 1.0;
  for (int i = 0; i < n; ++i) {
    const double t = (p[i] - p_lo[i]) / (p_hi[i] - p_lo[i]);
    v *= bump01(t);
    if (v == 0.0) return 0.0;
  }
  return v;
}

namespace {

double wave_arg(const std::vector<int>& k, double phase, const std::vector<double>& kappa,
                int d, const double* y) {
  double w = phase;
  for (int a = 0; a < d; ++a) w += kappa[a] * k[a] * y[a];
  return w;
}

}  // namespace

void eval_gamma_jet(const GammaProfile& g, const std::vector<double>& kappa, int d,
                    double x, const double* y, MetricJet& out) {
  const double ex = std::exp(g.lambda * x);
  const double dex = g.lambda * ex;
  const double ddex = g.lambda * dex;

  // generator modulation cos(nu*x + beta) of the perturbation
  const double cg = std::cos(g.gen_freq * x + g.gen_phase);
  const double sg = std::sin(g.gen_freq * x + g.gen_phase);
  const double dcg = -g.gen_freq * sg;
  const double ddcg = -g.gen_freq * g.gen_freq * cg;

  out.v = SmallSym::zero(d);
  out.ds = SmallSym::zero(d);
  out.dss = SmallSym::zero(d);
  for (int a = 0; a < d; ++a) {
    out.da[a] = SmallSym::zero(d);
    out.dsda[a] = SmallSym::zero(d);
  }
  for (int k = 0; k < sym_count(d); ++k) out.dab[k] = SmallSym::zero(d);

  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      const double delta = (a == b) ? 1.0 : 0.0;
      double t = 0.0, dt_x = 0.0, ddt_x = 0.0;                 // T_ab and x-derivs
      std::array<double, kMaxAxes> dt_y{}, ddt_xy{};
      std::array<double, kMaxSym> ddt_yy{};
      if (g.pert_amp != 0.0) {
        const double w = wave_arg(g.pert_k, g.pert_phase + g.pert_dphase * sym_index(a, b, d),
                                  kappa, d, y);
        const double cw = std::cos(w), sw = std::sin(w);
        t = cw * cg;
        dt_x = cw * dcg;
        ddt_x = cw * ddcg;
        for (int c = 0; c < d; ++c) {
          const double kap = kappa[c] * g.pert_k[c];
          dt_y[c] = -kap * sw * cg;
          ddt_xy[c] = -kap * sw * dcg;
          for (int e = c; e < d; ++e) {
            const double kap2 = kappa[e] * g.pert_k[e];
            ddt_yy[sym_index(c, e, d)] = -kap * kap2 * cw * cg;
          }
        }
      }
      const double base = delta + g.pert_amp * t;
      out.v.set_sym(a, b, ex * base);
      out.ds.set_sym(a, b, dex * base + ex * g.pert_amp * dt_x);
      out.dss.set_sym(a, b,
                      ddex * base + 2.0 * dex * g.pert_amp * dt_x + ex * g.pert_amp * ddt_x);
      for (int c = 0; c < d; ++c) {
        out.da[c].set_sym(a, b, ex * g.pert_amp * dt_y[c]);
        out.dsda[c].set_sym(a, b, dex * g.pert_amp * dt_y[c] + ex * g.pert_amp * ddt_xy[c]);
      }
      for (int c = 0; c < d; ++c)
        for (int e = c; e < d; ++e)
          out.dab[sym_index(c, e, d)].set_sym(a, b, ex * g.pert_amp * ddt_yy[sym_index(c, e, d)]);
    }
}

void eval_pullback_jet(const FreeDataSpec& spec, Surface surf, double s, const double* y,
                       MetricJet& out) {
  const int d = spec.n - 1;
  const auto kappa = spec.kappa();
  // Theta(s,y) = gamma(-s,y) on the first surface, gamma(+s,y) on the second.
  const double sign = (surf == Surface::I0) ? -1.0 : 1.0;
  eval_gamma_jet(spec.gamma, kappa, d, sign * s, y, out);
  if (sign < 0.0) {
    // chain rule: odd s-derivative orders flip
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        out.ds.set_sym(a, b, -out.ds(a, b));
        for (int c = 0; c < d; ++c) out.dsda[c].set_sym(a, b, -out.dsda[c](a, b));
      }
  }
}

void eval_theta_jet(const ThetaProfile& t, const std::vector<double>& kappa, int d,
                    double s, const double* y, ScalarJet& out) {
  const double ss = std::sin(t.s_freq * s + t.s_phase);
  const double cs = std::cos(t.s_freq * s + t.s_phase);
  const double g = 1.0 + t.s_amp * ss;          // generator factor
  const double dg = t.s_amp * t.s_freq * cs;
  const double w = wave_arg(t.ang_k, t.ang_phase, kappa, d, y);
  const double cw = std::cos(w), sw = std::sin(w);
  const double h = 1.0 + t.ang_amp * cw;        // angular factor
  out.v = t.base * g * h;
  out.ds = t.base * dg * h;
  for (int a = 0; a < d; ++a) {
    const double kap = kappa[a] * t.ang_k[a];
    const double dh = -t.ang_amp * kap * sw;
    out.da[a] = t.base * g * dh;
    out.dsda[a] = t.base * dg * dh;
    for (int b = a; b < d; ++b) {
      const double kap2 = kappa[b] * t.ang_k[b];
      out.dab[sym_index(a, b, d)] = t.base * g * (-t.ang_amp * kap * kap2 * cw);
    }
  }
}

void eval_phi_jet(const PhiProfile& p, const std::vector<double>& kappa, int d,
                  double s, const double* y, ScalarJet& out) {
  const double ss = std::sin(p.s_freq * s + p.s_phase);
  const double cs = std::cos(p.s_freq * s + p.s_phase);
  const double w = wave_arg(p.ang_k, p.ang_phase, kappa, d, y);
  const double cw = std::cos(w), sw = std::sin(w);
  // phi = mean + (s_amp + mix_amp*cw)*ss + ang_amp*cw
  out.v = p.mean + (p.s_amp + p.mix_amp * cw) * ss + p.ang_amp * cw;
  out.ds = (p.s_amp + p.mix_amp * cw) * p.s_freq * cs;
  for (int a = 0; a < d; ++a) {
    const double kap = kappa[a] * p.ang_k[a];
    out.da[a] = -kap * sw * (p.mix_amp * ss + p.ang_amp);
    out.dsda[a] = -kap * sw * p.mix_amp * p.s_freq * cs;
    for (int b = a; b < d; ++b) {
      const double kap2 = kappa[b] * p.ang_k[b];
      out.dab[sym_index(a, b, d)] = -kap * kap2 * cw * (p.mix_amp * ss + p.ang_amp);
    }
  }
}

// ---- validation ------------------------------------------------------------

const char* violation_name(ViolationCode c) {
  switch (c) {
    case ViolationCode::domain: return "domain";
    case ViolationCode::theta_sign: return "theta_sign";
    case ViolationCode::gamma_spd: return "gamma_spd";
    case ViolationCode::expansion_zero: return "expansion_zero";
    case ViolationCode::momentum_support: return "momentum_support";
    case ViolationCode::massless_support: return "massless_support";
    case ViolationCode::density_sign: return "density_sign";
    case ViolationCode::corner_collar: return "corner_collar";
    case ViolationCode::corner_mismatch: return "corner_mismatch";
  }
  return "?";
}

namespace {

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

bool wave_sized(const std::vector<int>& k, int d) { return int(k.size()) == d; }

}  // namespace

std::vector<Violation> validate_free_data(const FreeDataSpec& spec) {
  std::vector<Violation> out;
  auto add = [&](ViolationCode c, std::string m) { out.push_back({c, std::move(m)}); };

  const int d = spec.n - 1;
  bool shape_ok = true;
  if (spec.n < 3 || spec.n > 6) {
    add(ViolationCode::domain, fmt("spatial dimension n=%g outside supported range [3,6]",
                                   double(spec.n)));
    shape_ok = false;
  }
  if (!(spec.length > 0.0)) {
    add(ViolationCode::domain, "generator extent must be positive");
    shape_ok = false;
  }
  if (int(spec.ang_extent.size()) != d) {
    add(ViolationCode::domain, "angular extents must supply one period per angular axis");
    shape_ok = false;
  } else {
    for (double e : spec.ang_extent)
      if (!(e > 0.0)) {
        add(ViolationCode::domain, "angular periods must be positive");
        shape_ok = false;
      }
  }
  if (!(spec.mass >= 0.0)) add(ViolationCode::domain, "particle mass must be >= 0");
  const Margins& mg = spec.margins;
  if (!(mg.c0 > 0.0 && mg.c1 > 0.0 && mg.c2 > 0.0 && mg.c2p > 0.0 && mg.collar > 0.0 &&
        mg.eps_exp > 0.0))
    add(ViolationCode::domain, "support margins and the expansion floor must all be positive");
  if (shape_ok) {
    if (!wave_sized(spec.gamma.pert_k, d)) {
      add(ViolationCode::domain, "gamma perturbation wave vector has wrong axis count");
      shape_ok = false;
    }
    for (int s = 0; s < 2 && shape_ok; ++s) {
      if (!wave_sized(spec.theta[s].ang_k, d) || !wave_sized(spec.phi[s].ang_k, d) ||
          (!spec.density[s].vacuum() && !wave_sized(spec.density[s].ang_k, d))) {
        add(ViolationCode::domain, "profile wave vector has wrong axis count");
        shape_ok = false;
      }
      const DensityProfile& f = spec.density[s];
      if (!f.vacuum() &&
          (int(f.p_lo.size()) != spec.n || int(f.p_hi.size()) != spec.n)) {
        add(ViolationCode::domain, "momentum box must declare one interval per momentum axis");
        shape_ok = false;
      }
    }
  }
  if (!shape_ok) return out;  // probing below needs consistent shapes

  const auto kappa = spec.kappa();

  // Probe lattice: 17 generator stations, 12 nodes per angular axis. The
  // catalogue's profiles carry at most a few oscillations per period at sane
  // parameters, so this cannot straddle a sign flip unnoticed.
  const int kGen = 17, kAng = 12;
  std::vector<double> y(d, 0.0);
  std::size_t ang_probes = 1;
  for (int a = 0; a < d; ++a) ang_probes *= kAng;

  bool bad_theta = false, bad_spd = false, bad_exp = false, bad_corner = false;
  double worst_theta = -1e300, worst_exp = 1e300, worst_corner = 0.0;

  for (std::size_t ai = 0; ai < ang_probes; ++ai) {
    std::size_t r = ai;
    for (int a = d - 1; a >= 0; --a) {
      y[a] = double(r % kAng) * spec.ang_extent[a] / kAng;
      r /= kAng;
    }
    // corner compatibility at s = 0
    {
      ScalarJet t0, t1, p0, p1;
      eval_theta_jet(spec.theta[0], kappa, d, 0.0, y.data(), t0);
      eval_theta_jet(spec.theta[1], kappa, d, 0.0, y.data(), t1);
      eval_phi_jet(spec.phi[0], kappa, d, 0.0, y.data(), p0);
      eval_phi_jet(spec.phi[1], kappa, d, 0.0, y.data(), p1);
      const double dm = std::max(std::fabs(t0.v - t1.v) / std::max(1.0, std::fabs(t0.v)),
                                 std::fabs(p0.v - p1.v) / std::max(1.0, std::fabs(p0.v)));
      if (dm > 1e-10) {
        bad_corner = true;
        worst_corner = std::max(worst_corner, dm);
      }
    }
    for (int gi = 0; gi < kGen; ++gi) {
      const double s = spec.length * gi / (kGen - 1);
      for (int slot = 0; slot < 2; ++slot) {
        ScalarJet th;
        eval_theta_jet(spec.theta[slot], kappa, d, s, y.data(), th);
        if (!(th.v < 0.0)) {
          bad_theta = true;
          worst_theta = std::max(worst_theta, th.v);
        }
      }
      // gamma over x in [-L, L] is covered by the two pullbacks
      for (double sign : {-1.0, 1.0}) {
        MetricJet gj;
        eval_gamma_jet(spec.gamma, kappa, d, sign * s, y.data(), gj);
        if (!sym_positive_definite(gj.v)) {
          bad_spd = true;
          continue;
        }
        SmallSym inv;
        sym_inverse(gj.v, inv);
        const double expn = sym_trace_product(inv, gj.ds);
        if (!(std::fabs(expn) > mg.eps_exp)) {
          bad_exp = true;
          worst_exp = std::min(worst_exp, std::fabs(expn));
        }
        if (sign > 0.0 && s == 0.0) break;  // x = 0 probed once
      }
    }
  }

  if (bad_theta)
    add(ViolationCode::theta_sign,
        fmt("theta must be negative everywhere; probe found max value %.3g", worst_theta));
  if (bad_spd)
    add(ViolationCode::gamma_spd,
        "gamma fails positive definiteness at a probe point (perturbation amplitude too large)");
  if (bad_exp)
    add(ViolationCode::expansion_zero,
        fmt("|trace expansion of gamma| fell to %.3g, below the %.3g floor", worst_exp,
            mg.eps_exp));
  if (bad_corner)
    add(ViolationCode::corner_mismatch,
        fmt("theta or phi disagree between the two surfaces at the corner (rel %.3g); "
            "the corner compatibility conditions require equality",
            worst_corner));

  // density support conditions
  for (int slot = 0; slot < 2; ++slot) {
    const DensityProfile& f = spec.density[slot];
    const std::string which = slot == 0 ? "first-surface" : "second-surface";
    const std::string paxis = slot == 0 ? "p^1" : "p^0";
    if (f.vacuum()) continue;
    if (f.amp < 0.0 || std::fabs(f.ang_amp) >= 1.0)
      add(ViolationCode::density_sign,
          which + " density can go negative (amplitude or angular modulation out of range)");
    for (int i = 0; i < spec.n; ++i)
      if (!(f.p_lo[i] < f.p_hi[i]))
        add(ViolationCode::domain, "momentum box interval is empty or reversed");
    const double cgen = slot == 0 ? mg.c1 : mg.c0;
    if (!(f.p_lo[0] > cgen) || !(f.p_lo[0] > 0.0))
      add(ViolationCode::momentum_support,
          which + " density support must be contained in {" + paxis + " > c > 0}: " +
              fmt("box starts at %.3g with margin c=%.3g", f.p_lo[0], cgen));
    if (spec.mass == 0.0) {
      double min_sq = 0.0;
      for (int a = 1; a < spec.n; ++a) {
        const double lo = f.p_lo[a], hi = f.p_hi[a];
        double m2 = 0.0;
        if (lo > 0.0) m2 = lo * lo;
        else if (hi < 0.0) m2 = hi * hi;
        min_sq += m2;
      }
      const double cang = slot == 0 ? mg.c2p : mg.c2;
      if (!(min_sq > cang))
        add(ViolationCode::massless_support,
            which + " density, massless case: angular momentum support must stay off the origin " +
                fmt("(min sum of squares %.3g <= margin %.3g)", min_sq, cang));
    }
    if (!(f.s_lo >= mg.collar))
      add(ViolationCode::corner_collar,
          which + " density " +
              fmt("support window starts at s=%.3g, inside the corner collar of width %.3g; "
                  "supports must be disjoint from the corner",
                  f.s_lo, mg.collar));
    if (!(f.s_hi > f.s_lo))
      add(ViolationCode::domain, "density generator window is empty");
  }

  return out;
}

}  // namespace charids
