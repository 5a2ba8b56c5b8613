#include "kinetic/sources.hpp"

#include <cmath>

namespace charids {

SourceEvaluator::SourceEvaluator(const DensityProfile& f, const MomentumQuadrature& quad, int n,
                                 std::vector<double> kappa)
    : vacuum_(f.vacuum()), f_(&f), kappa_(std::move(kappa)), d_(n - 1) {
  if (vacuum_) return;
  // axis 0: moments of bump * p^k for the k appearing in the integrand
  // denominators/numerators
  {
    const AxisRule& ax = quad.axes[0];
    const double lo = f.p_lo[0], hi = f.p_hi[0];
    for (std::size_t i = 0; i < ax.p.size(); ++i) {
      const double p = ax.p[i];
      const double bw = ax.w[i] * bump01((p - lo) / (hi - lo));
      mu_m2_ += bw / (p * p);
      mu_m1_ += bw / p;
      mu_p1_ += bw * p;
    }
  }
  for (int a = 0; a < d_; ++a) {
    const AxisRule& ax = quad.axes[1 + a];
    const double lo = f.p_lo[1 + a], hi = f.p_hi[1 + a];
    for (std::size_t i = 0; i < ax.p.size(); ++i) {
      const double p = ax.p[i];
      const double bw = ax.w[i] * bump01((p - lo) / (hi - lo));
      double pk = 1.0;
      for (int e = 0; e < 5; ++e) {
        mom_[a][e] += bw * pk;
        pk *= p;
      }
    }
  }
}

double SourceEvaluator::mono2(int a, int b) const {
  double r = 1.0;
  for (int i = 0; i < d_; ++i) {
    const int e = (i == a) + (i == b);
    r *= mom_[i][e];
  }
  return r;
}

double SourceEvaluator::mono3(int a, int b, int c) const {
  double r = 1.0;
  for (int i = 0; i < d_; ++i) {
    const int e = (i == a) + (i == b) + (i == c);
    r *= mom_[i][e];
  }
  return r;
}

double SourceEvaluator::mono4(int a, int b, int c, int e4) const {
  double r = 1.0;
  for (int i = 0; i < d_; ++i) {
    const int e = (i == a) + (i == b) + (i == c) + (i == e4);
    r *= mom_[i][e];
  }
  return r;
}

void SourceEvaluator::eval(double s, const double* y, double theta, const SmallSym& Th,
                           double sqdet, double mass, SourceTensors& out) const {
  out = SourceTensors{};
  if (vacuum_) return;
  const double W = f_->spatial_factor(s, kappa_, y);
  if (W == 0.0) return;

  const int d = d_;
  const double m2 = mass * mass;
  double one = 1.0;
  for (int i = 0; i < d; ++i) one *= mom_[i][0];

  // Q = Theta_ab <p^a p^b>, Q2 = Theta_ab Theta_cd <p^a p^b p^c p^d>
  double Qm = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) Qm += Th(a, b) * mono2(a, b);
  double Q2 = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) Q2 += Th(a, b) * Th(c, e) * mono4(a, b, c, e);

  const double ath = std::fabs(theta);
  out.ham = ath * sqdet * W * mu_m2_ * (m2 * m2 * one + 2.0 * m2 * Qm + Q2);
  out.tr = theta * sqdet * W * mu_m1_ * (m2 * one + Qm);
  out.fin = ath * ath * ath * sqdet * W * mu_p1_ * one;

  for (int a = 0; a < d; ++a) {
    double acc = 0.0;
    for (int b = 0; b < d; ++b) {
      double cub = 0.0;
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) cub += Th(c, e) * mono3(b, c, e);
      double lin = 1.0;
      for (int i = 0; i < d; ++i) lin *= mom_[i][i == b ? 1 : 0];
      acc += Th(a, b) * (m2 * lin + cub);
    }
    out.mom[a] = ath * sqdet * W * mu_m2_ * acc;
  }

  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      double acc = 0.0;
      for (int e = 0; e < d; ++e)
        for (int f = 0; f < d; ++f) acc += Th(a, e) * Th(b, f) * mono2(e, f);
      out.ab[sym_index(a, b, d)] = 2.0 * theta * sqdet * W * mu_m1_ * acc;
    }
}

SourceTensors eval_sources_brute(const DensityProfile& f, const MomentumQuadrature& quad, int n,
                                 const std::vector<double>& kappa, double s, const double* y,
                                 double theta, const SmallSym& Th, double sqdet, double mass) {
  SourceTensors out;
  if (f.vacuum()) return out;
  const double W = f.spatial_factor(s, kappa, y);
  if (W == 0.0) return out;
  const int d = n - 1;
  const double m2 = mass * mass;
  const double ath = std::fabs(theta);

  std::vector<std::size_t> idx(n, 0);
  std::vector<double> p(n);
  for (;;) {
    double wq = 1.0;
    for (int i = 0; i < n; ++i) {
      p[i] = quad.axes[i].p[idx[i]];
      wq *= quad.axes[i].w[idx[i]];
    }
    const double fv = W * f.momentum_factor(p.data(), n);
    if (fv != 0.0) {
      const double p1 = p[0];
      double Qp = 0.0;
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) Qp += Th(a, b) * p[1 + a] * p[1 + b];
      const double shell = m2 + Qp;
      out.ham += wq * fv * ath * sqdet * shell * shell / (p1 * p1);
      out.tr += wq * fv * theta * sqdet * shell / p1;
      out.fin += wq * fv * ath * ath * ath * sqdet * p1;
      for (int a = 0; a < d; ++a) {
        double lower = 0.0;
        for (int b = 0; b < d; ++b) lower += Th(a, b) * p[1 + b];
        out.mom[a] += wq * fv * ath * sqdet * shell * lower / (p1 * p1);
      }
      for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
          double pr = 0.0;
          for (int e = 0; e < d; ++e)
            for (int ff = 0; ff < d; ++ff) pr += Th(a, e) * Th(b, ff) * p[1 + e] * p[1 + ff];
          out.ab[sym_index(a, b, d)] += wq * fv * 2.0 * theta * sqdet * pr / p1;
        }
    }
    int ax = n - 1;
    for (; ax >= 0; --ax) {
      if (++idx[ax] < quad.axes[ax].p.size()) break;
      idx[ax] = 0;
    }
    if (ax < 0) break;
  }
  return out;
}

double matter_scalar_rhs(const SmallSym& Thi, const double* daphi, double Vval, double S_tr) {
  double grad = 0.0;
  for (int a = 0; a < Thi.d; ++a)
    for (int b = 0; b < Thi.d; ++b) grad += Thi(a, b) * daphi[a] * daphi[b];
  return grad + Vval + 2.0 * S_tr;
}

void assemble_T_ab(const SmallSym& Th, const SmallSym& Thi, const double* daphi, double d1phi,
                   double u, double theta, double Vval,
                   const std::array<double, kMaxSym>& S_ab, std::array<double, kMaxSym>& T_out) {
  const int d = Th.d;
  double grad = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) grad += Thi(a, b) * daphi[a] * daphi[b];
  const double paren = (2.0 / theta) * u * d1phi + grad + Vval;
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) {
      const int k = sym_index(a, b, d);
      T_out[k] = daphi[a] * daphi[b] - 0.5 * Th(a, b) * paren - S_ab[k];
    }
}

}  // namespace charids
