#pragma once
#include <array>
#include <cstddef>

namespace charids {

// Dense symmetric matrix of runtime dimension d <= kMaxDim, kept on the
// stack. d is the number of angular axes, so the implementation bound n <= 6
// translates to kMaxDim = 5.
struct SmallSym {
  static constexpr int kMaxDim = 5;
  int d = 0;
  std::array<double, kMaxDim * kMaxDim> m{};  // full storage, symmetric

  double& operator()(int a, int b) { return m[a * kMaxDim + b]; }
  double operator()(int a, int b) const { return m[a * kMaxDim + b]; }

  static SmallSym zero(int d) {
    SmallSym s;
    s.d = d;
    return s;
  }
  static SmallSym identity(int d) {
    SmallSym s = zero(d);
    for (int a = 0; a < d; ++a) s(a, a) = 1.0;
    return s;
  }
  void set_sym(int a, int b, double v) {
    (*this)(a, b) = v;
    (*this)(b, a) = v;
  }
};

double sym_det(const SmallSym& s);

// Inverse of a symmetric matrix; returns false when the pivot sequence
// degenerates (singular to working precision).
bool sym_inverse(const SmallSym& s, SmallSym& out);

// Positive definiteness via leading principal minors.
bool sym_positive_definite(const SmallSym& s);

// tr(A B) for symmetric A, B of equal dimension.
double sym_trace_product(const SmallSym& a, const SmallSym& b);

}  // namespace charids
