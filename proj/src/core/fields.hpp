#pragma once
#include <cstddef>
#include <vector>

#include "core/grid.hpp"

namespace charids {

// Node-indexed storage. All fields use the layout
//   value(i, aflat) = data[i * ang_count + aflat]
// so a fixed generator station is one contiguous angular slab.

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const SurfaceGrid& g)
      : ang_(g.ang_count()), data_(g.node_count(), 0.0) {}

  double& at(std::size_t i, std::size_t aflat) { return data_[i * ang_ + aflat]; }
  double at(std::size_t i, std::size_t aflat) const { return data_[i * ang_ + aflat]; }

  double* slab(std::size_t i) { return data_.data() + i * ang_; }
  const double* slab(std::size_t i) const { return data_.data() + i * ang_; }

  std::size_t ang_count() const { return ang_; }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

 private:
  std::size_t ang_ = 0;
  std::vector<double> data_;
};

// Angular one-form / vector: d = n-1 components per node, each stored as a
// separate scalar layer.
class AngularVecField {
 public:
  AngularVecField() = default;
  AngularVecField(const SurfaceGrid& g, int dim) : comp_(dim, ScalarField(g)) {}

  ScalarField& comp(int a) { return comp_[a]; }
  const ScalarField& comp(int a) const { return comp_[a]; }
  int dim() const { return int(comp_.size()); }

 private:
  std::vector<ScalarField> comp_;
};

// Symmetric angular 2-tensor stored as the upper triangle, row-major:
// (0,0), (0,1), ..., (0,d-1), (1,1), ..., (d-1,d-1).
inline int sym_index(int a, int b, int d) {
  if (a > b) { int t = a; a = b; b = t; }
  return a * d - a * (a - 1) / 2 + (b - a);
}
inline int sym_count(int d) { return d * (d + 1) / 2; }

class SymTensorField {
 public:
  SymTensorField() = default;
  SymTensorField(const SurfaceGrid& g, int dim)
      : dim_(dim), comp_(sym_count(dim), ScalarField(g)) {}

  ScalarField& comp(int a, int b) { return comp_[sym_index(a, b, dim_)]; }
  const ScalarField& comp(int a, int b) const { return comp_[sym_index(a, b, dim_)]; }
  ScalarField& comp_flat(int k) { return comp_[k]; }
  const ScalarField& comp_flat(int k) const { return comp_[k]; }
  int dim() const { return dim_; }
  int comp_count() const { return int(comp_.size()); }

 private:
  int dim_ = 0;
  std::vector<ScalarField> comp_;
};

}  // namespace charids
