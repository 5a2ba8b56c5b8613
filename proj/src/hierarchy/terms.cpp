#include "hierarchy/terms.hpp"

namespace charids {

double sym_contract(const SmallSym& m, const double* sym_vals, int d) {
  double acc = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      const double mult = (a == b) ? 1.0 : 2.0;
      acc += mult * m(a, b) * sym_vals[sym_index(a, b, d)];
    }
  return acc;
}

double sym_pair_contract(const double* m, const double* v, int d) {
  double acc = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      const double mult = (a == b) ? 1.0 : 2.0;
      const int k = sym_index(a, b, d);
      acc += mult * m[k] * v[k];
    }
  return acc;
}

bool derive_node_geom(const RawJets& j, int d, double mass, const Potential& pot,
                      const SourceEvaluator& src, double s, const double* y, NodeGeom& g) {
  g.d = d;
  g.th = j.th;
  g.d1th = j.d1th;
  g.phi = j.phi;
  g.d1phi = j.d1phi;
  g.dath = j.dath;
  g.d1dath = j.d1dath;
  g.daphi = j.daphi;
  g.Th = j.Th;
  g.d1Th = j.d1Th;
  g.daTh = j.daTh;

  if (!sym_inverse(j.Th, g.Thi)) return false;
  const double det = sym_det(j.Th);
  if (!(det > 0.0)) return false;
  g.sqdet = std::sqrt(det);

  const SmallSym& Thi = g.Thi;
  const SmallSym& dTh = j.d1Th;

  // expansion family
  g.E = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) g.E += Thi(a, b) * dTh(a, b);
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) {
      double acc = 0.0;
      for (int c = 0; c < d; ++c) acc += Thi(b, c) * dTh(c, a);
      g.A[b * d + a] = acc;
    }
  g.K = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) g.K += g.A[a * d + b] * g.A[b * d + a];
  double trd11 = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) trd11 += Thi(a, b) * j.d11Th(a, b);
  g.d1E = -g.K + trd11;
  for (int c = 0; c < d; ++c)
    for (int e = c; e < d; ++e) {
      double acc = 0.0;
      for (int b = 0; b < d; ++b) acc += g.A[c * d + b] * Thi(b, e);
      g.Aup[sym_index(c, e, d)] = acc;
    }

  // angular gradient of the inverse metric: dThi[c] = -Thi daTh[c] Thi
  std::array<SmallSym, kMaxAxes> dThi;
  for (int c = 0; c < d; ++c) {
    dThi[c].d = d;
    for (int p = 0; p < d; ++p)
      for (int q = p; q < d; ++q) {
        double acc = 0.0;
        for (int e = 0; e < d; ++e)
          for (int f = 0; f < d; ++f) acc += Thi(p, e) * j.daTh[c](e, f) * Thi(f, q);
        dThi[c].set_sym(p, q, -acc);
      }
  }

  // connection of Th on the slice
  for (int c = 0; c < d; ++c) {
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        double acc = 0.0;
        for (int e = 0; e < d; ++e)
          acc += Thi(c, e) * (j.daTh[a](b, e) + j.daTh[b](a, e) - j.daTh[e](a, b));
        g.Gam[c][sym_index(a, b, d)] = 0.5 * acc;
      }
    double tr = 0.0;
    for (int e = 0; e < d; ++e)
      for (int f = 0; f < d; ++f) tr += Thi(e, f) * j.daTh[c](e, f);
    g.Gtr[c] = 0.5 * tr;
  }

  for (int dd = 0; dd < d; ++dd) {
    double acc = 0.0;
    for (int c = 0; c < d; ++c) acc += dThi[c](c, dd);
    g.diTh[dd] = acc;
  }

  // d_c Gam^c_{ab}
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      double acc = 0.0;
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) {
          const double bra = j.daTh[a](b, e) + j.daTh[b](a, e) - j.daTh[e](a, b);
          const double dbra = j.dabTh[sym_index(c, a, d)](b, e) +
                              j.dabTh[sym_index(c, b, d)](a, e) -
                              j.dabTh[sym_index(c, e, d)](a, b);
          acc += 0.5 * (dThi[c](c, e) * bra + Thi(c, e) * dbra);
        }
      g.divGam[sym_index(a, b, d)] = acc;
    }

  for (int a = 0; a < d; ++a) g.lth[a] = j.dath[a] / j.th;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      const int k = sym_index(a, b, d);
      g.llth[k] = j.dabth[k] / j.th - j.dath[a] * j.dath[b] / (j.th * j.th);
      double gg = 0.0;
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e)
          gg += g.Gam[e][sym_index(a, c, d)] * g.Gam[c][sym_index(e, b, d)];
      g.GG[k] = gg;
      double lg = 0.0;
      for (int c = 0; c < d; ++c) lg += (g.lth[c] + g.Gtr[c]) * g.Gam[c][k];
      g.lgG[k] = lg;
    }

  // Dab = d_a(Th^{cd} d_b Th_cd)
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      double acc = 0.0;
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e)
          acc += dThi[a](c, e) * j.daTh[b](c, e) +
                 Thi(c, e) * j.dabTh[sym_index(a, b, d)](c, e);
      g.Dab[sym_index(a, b, d)] = acc;
    }

  // divA_a = d_c(Th^{cb} d1Th_{ab})
  for (int a = 0; a < d; ++a) {
    double acc = 0.0;
    for (int b = 0; b < d; ++b) {
      acc += g.diTh[b] * dTh(b, a);
      for (int c = 0; c < d; ++c) acc += Thi(c, b) * j.d1daTh[c](b, a);
    }
    g.divA[a] = acc;
  }

  // trace-equation prefabs
  for (int e = 0; e < d; ++e) {
    double acc = 0.0;
    for (int c = 0; c < d; ++c)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          acc += Thi(c, e) * Thi(a, b) * (2.0 * j.daTh[a](c, b) - j.daTh[c](a, b));
    g.w1[e] = 0.5 * acc;
  }
  {
    const double th = j.th;
    double tll = 0.0, tD = 0.0, X = 0.0, tdth = 0.0, tGG = 0.0, tlgG = 0.0;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const int k = sym_index(a, b, d);
        tll += Thi(a, b) * g.llth[k];
        tD += Thi(a, b) * g.Dab[k];
        tdth += Thi(a, b) * j.dath[a] * j.dath[b];
        tGG += Thi(a, b) * g.GG[k];
        tlgG += Thi(a, b) * g.lgG[k];
        double xc = 0.0;
        for (int dd = 0; dd < d; ++dd) {
          xc += g.diTh[dd] * (2.0 * j.daTh[a](b, dd) - j.daTh[dd](a, b));
          for (int c = 0; c < d; ++c)
            xc += Thi(c, dd) * (2.0 * j.dabTh[sym_index(c, a, d)](b, dd) -
                                j.dabTh[sym_index(c, dd, d)](a, b));
        }
        X += Thi(a, b) * xc;
      }
    g.x10_geo = th * tll + 0.5 * th * tD - 0.5 * th * X + tdth / (2.0 * th) + th * tGG -
                th * tlgG;
  }

  // scalar-field contractions
  g.trddphi = 0.0;
  g.trddth = 0.0;
  g.gamdphi = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const int k = sym_index(a, b, d);
      g.trddphi += Thi(a, b) * j.dabphi[k];
      g.trddth += Thi(a, b) * j.dabth[k];
      double gd = 0.0;
      for (int c = 0; c < d; ++c) gd += g.Gam[c][k] * j.daphi[c];
      g.gamdphi += Thi(a, b) * gd;
    }

  // matter
  g.V = pot.value(j.phi);
  g.Vp = pot.deriv(j.phi);
  src.eval(s, y, j.th, j.Th, g.sqdet, mass, g.S);
  g.M = matter_scalar_rhs(g.Thi, j.daphi.data(), g.V, g.S.tr);
  g.psi11 = 0.0;
  return true;
}

void x9_rhs(const NodeGeom& g, const double* psi1, const double* dapsi11, double* out) {
  const int d = g.d;
  const double th = g.th;
  const double coef = (g.psi11 + th * g.E - g.d1th) / (2.0 * th);
  for (int a = 0; a < d; ++a) {
    double G = g.psi11 * g.dath[a] / (2.0 * th);
    for (int b = 0; b < d; ++b) G += g.A[b * d + a] * g.dath[b];
    G += -1.5 * g.d1th * g.dath[a] / th;
    G += g.d1dath[a];
    G += -th * g.divA[a];
    // the written angular gradient of Th^{cd} Th_cd: the trace is the
    // constant d, so the term contributes zero; kept to mirror the
    // constraint's printed form.
    G += 0.0;
    G += -th * th * dapsi11[a];
    for (int c = 0; c < d; ++c)
      for (int b = 0; b < d; ++b) G += -g.Thi(c, b) * g.dath[c] * g.d1Th(b, a);
    for (int c = 0; c < d; ++c)
      for (int b = 0; b < d; ++b)
        G += -0.5 * th * g.Thi(c, b) * g.d1Th(b, a) * 2.0 * g.Gtr[c];
    for (int dd = 0; dd < d; ++dd)
      for (int e = 0; e < d; ++e)
        for (int c = 0; c < d; ++c)
          for (int b = 0; b < d; ++b)
            G += 0.5 * th * g.Thi(dd, e) * g.Thi(c, b) * g.d1Th(dd, b) *
                 (g.daTh[a](e, c) + g.daTh[c](e, a) - g.daTh[e](a, c));
    const double matter = 2.0 * th * (g.d1phi * g.daphi[a] + g.S.mom[a]);
    out[a] = -coef * psi1[a] - G + matter;
  }
}

double x10_rhs(const NodeGeom& g, double chi, const double* psi1, const double* dpsi1) {
  const int d = g.d;
  const double th = g.th;
  double F = g.x10_geo;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) F += -g.Thi(a, b) * dpsi1[a * d + b];
  for (int e = 0; e < d; ++e) F += g.w1[e] * psi1[e];
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) F += g.Thi(a, b) * psi1[a] * psi1[b] / (2.0 * th);
  return -0.5 * (g.E - g.psi11 / th) * chi - F + g.M;
}

void u_coeffs(const NodeGeom& g, double chi, const double* psi1, double& A, double& B) {
  const int d = g.d;
  const double th = g.th;
  A = -g.psi11 / (th * th) + g.E / (2.0 * th);
  double drift = 0.0;
  for (int c = 0; c < d; ++c) {
    double up = 0.0;
    for (int dd = 0; dd < d; ++dd) up += g.Thi(c, dd) * (psi1[dd] - g.dath[dd]);
    drift += (up / th) * g.daphi[c];
  }
  B = g.trddphi + chi * g.d1phi / (2.0 * th) - drift - g.gamdphi - g.Vp;
}

void stress_T_ab(const NodeGeom& g, double u, std::array<double, kMaxSym>& T_out) {
  assemble_T_ab(g.Th, g.Thi, g.daphi.data(), g.d1phi, u, g.th, g.V, g.S.ab, T_out);
}

void x11_rhs(const NodeGeom& g, double chi, const double* psi1, const double* dpsi1sym,
             double u, const double* psi, double* out) {
  const int d = g.d;
  const double th = g.th;
  std::array<double, kMaxSym> T{};
  stress_T_ab(g, u, T);
  const double trT = sym_contract(g.Thi, T.data(), d);
  const double scal = (g.M / th - trT) / double(d);

  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      const int k = sym_index(a, b, d);
      double r = th * (scal * g.Th(a, b) + T[k]);
      r += g.psi11 * psi[k] / (2.0 * th);
      r += -0.25 * g.E * psi[k];
      double mix = 0.0;
      for (int e = 0; e < d; ++e)
        mix += g.A[e * d + a] * psi[sym_index(e, b, d)] +
               psi[sym_index(a, e, d)] * g.A[e * d + b];
      r += 0.5 * mix;
      r += -0.25 * chi * g.d1Th(a, b);
      r += dpsi1sym[k];
      for (int e = 0; e < d; ++e) r += -psi1[e] * g.Gam[e][k];
      r += -(psi1[a] * psi1[b] + g.dath[a] * g.dath[b]) / (2.0 * th);
      r += -th * g.llth[k];
      r += -0.5 * th * g.Dab[k];
      r += th * g.divGam[k];
      r += th * g.lgG[k];
      r += -th * g.GG[k];
      out[k] = r;
    }
}

double x12_rhs(const NodeGeom& g, double psi01, double chi, double d1chi, const double* psi1,
               double d1psi11, const double* psi, const double* d1psi, double u) {
  const int d = g.d;
  const double th = g.th;
  const double psi11 = g.psi11;
  const double d1lth = g.d1th / th;

  double W = 0.5 * th * d1chi;
  for (int c = 0; c < d; ++c)
    for (int dd = 0; dd < d; ++dd) W += -1.5 * th * g.Thi(c, dd) * psi1[dd] * g.dath[c];
  for (int c = 0; c < d; ++c) W += 0.5 * th * g.diTh[c] * g.dath[c];
  W += 0.5 * th * g.trddth;
  for (int c = 0; c < d; ++c)
    for (int b = 0; b < d; ++b) W += -0.75 * g.Thi(c, b) * psi1[b] * psi1[c];
  for (int c = 0; c < d; ++c)
    for (int b = 0; b < d; ++b) W += 0.25 * g.Thi(c, b) * g.dath[b] * g.dath[c];
  W += -0.25 * chi * psi11;
  for (int c = 0; c < d; ++c)
    for (int b = 0; b < d; ++b) W += 0.5 * th * g.Thi(c, b) * g.Gtr[c] * g.dath[b];
  W += -0.5 * d1lth * psi11;
  W += -0.125 * g.E * psi11;
  W += 0.5 * d1psi11;
  W += -psi11 * psi11 / (2.0 * th);
  W += -0.25 * th * sym_contract(g.Thi, d1psi, d);
  W += -psi11 * g.d1th / (2.0 * th);
  for (int a = 0; a < d; ++a)
    for (int dd = 0; dd < d; ++dd) W += -g.Thi(a, dd) * psi1[dd] * psi1[a];
  W += 0.5 * th * sym_pair_contract(g.Aup.data(), psi, d);

  std::array<double, kMaxSym> T{};
  stress_T_ab(g, u, T);
  const double trT = sym_contract(g.Thi, T.data(), d);
  const double rhs12 =
      0.5 * th * (u * u - 2.0 * g.S.fin) - 0.5 * th * th * (g.M / th + 2.0 * trT / double(d));

  return 0.5 * (0.5 * chi + d1lth) * psi01 - W + rhs12;
}

double a17_literal(const NodeGeom& g, double chi, double d1chi, const double* psi1,
                   const double* dpsi1) {
  const int d = g.d;
  const double th = g.th;
  double r = d1chi / th;
  r += (g.E - g.psi11 / th) * chi / (2.0 * th);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) r += -g.Thi(a, b) * dpsi1[a * d + b] / th;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) r += g.Thi(a, b) * g.llth[sym_index(a, b, d)];
  for (int e = 0; e < d; ++e) r += g.w1[e] * psi1[e] / th;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) r += 0.5 * g.Thi(a, b) * g.Dab[sym_index(a, b, d)];
  // printed with a dangling index: no derivative acts on the bracket and the
  // index c appears only once. Evaluated under a free sum over all four
  // indices and reported as-is.
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int dd = 0; dd < d; ++dd)
          r += -0.5 * g.Thi(a, b) * g.Thi(c, dd) *
               (2.0 * g.daTh[a](b, dd) - g.daTh[dd](a, b));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      r += g.Thi(a, b) * (psi1[a] * psi1[b] + g.dath[a] * g.dath[b]) / (2.0 * th * th);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const int k = sym_index(a, b, d);
      r += g.Thi(a, b) * g.GG[k];
      r += -g.Thi(a, b) * g.lgG[k];
    }
  return r;
}

}  // namespace charids
