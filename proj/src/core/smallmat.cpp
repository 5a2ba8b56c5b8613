#include "core/smallmat.hpp"

#include <cmath>

namespace charids {

namespace {

// Gaussian elimination with partial pivoting on a stack copy. Returns the
// determinant through *det when requested; fills inv when requested.
bool eliminate(const SmallSym& s, double* det, SmallSym* inv) {
  const int d = s.d;
  double a[SmallSym::kMaxDim][2 * SmallSym::kMaxDim] = {};
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) a[r][c] = s(r, c);
    a[r][d + r] = 1.0;
  }
  double detv = 1.0;
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) {
      if (det) *det = 0.0;
      return false;
    }
    if (piv != col) {
      for (int c = 0; c < 2 * d; ++c) std::swap(a[piv][c], a[col][c]);
      detv = -detv;
    }
    detv *= a[col][col];
    const double inv_piv = 1.0 / a[col][col];
    for (int c = 0; c < 2 * d; ++c) a[col][c] *= inv_piv;
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 2 * d; ++c) a[r][c] -= f * a[col][c];
    }
  }
  if (det) *det = detv;
  if (inv) {
    inv->d = d;
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) (*inv)(r, c) = a[r][d + c];
    // Re-symmetrize: the input was symmetric, so symmetrizing only removes
    // roundoff skew.
    for (int r = 0; r < d; ++r)
      for (int c = r + 1; c < d; ++c) {
        const double v = 0.5 * ((*inv)(r, c) + (*inv)(c, r));
        (*inv)(r, c) = v;
        (*inv)(c, r) = v;
      }
  }
  return true;
}

}  // namespace

double sym_det(const SmallSym& s) {
  if (s.d == 1) return s(0, 0);
  if (s.d == 2) return s(0, 0) * s(1, 1) - s(0, 1) * s(0, 1);
  if (s.d == 3) {
    return s(0, 0) * (s(1, 1) * s(2, 2) - s(1, 2) * s(1, 2)) -
           s(0, 1) * (s(0, 1) * s(2, 2) - s(1, 2) * s(0, 2)) +
           s(0, 2) * (s(0, 1) * s(1, 2) - s(1, 1) * s(0, 2));
  }
  double det = 0.0;
  eliminate(s, &det, nullptr);
  return det;
}

bool sym_inverse(const SmallSym& s, SmallSym& out) {
  if (s.d == 1) {
    if (s(0, 0) == 0.0) return false;
    out.d = 1;
    out(0, 0) = 1.0 / s(0, 0);
    return true;
  }
  if (s.d == 2) {
    const double det = sym_det(s);
    if (det == 0.0) return false;
    out.d = 2;
    const double inv_det = 1.0 / det;
    out(0, 0) = s(1, 1) * inv_det;
    out(1, 1) = s(0, 0) * inv_det;
    out.set_sym(0, 1, -s(0, 1) * inv_det);
    return true;
  }
  return eliminate(s, nullptr, &out);
}

bool sym_positive_definite(const SmallSym& s) {
  // Cholesky without pivoting: succeeds iff SPD.
  const int d = s.d;
  double l[SmallSym::kMaxDim][SmallSym::kMaxDim] = {};
  for (int j = 0; j < d; ++j) {
    double diag = s(j, j);
    for (int k = 0; k < j; ++k) diag -= l[j][k] * l[j][k];
    if (!(diag > 0.0)) return false;
    l[j][j] = std::sqrt(diag);
    for (int r = j + 1; r < d; ++r) {
      double v = s(r, j);
      for (int k = 0; k < j; ++k) v -= l[r][k] * l[j][k];
      l[r][j] = v / l[j][j];
    }
  }
  return true;
}

double sym_trace_product(const SmallSym& a, const SmallSym& b) {
  double t = 0.0;
  for (int r = 0; r < a.d; ++r)
    for (int c = 0; c < a.d; ++c) t += a(r, c) * b(c, r);
  return t;
}

}  // namespace charids
