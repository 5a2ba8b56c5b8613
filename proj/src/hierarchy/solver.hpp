#pragma once
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/fields.hpp"
#include "core/freedata.hpp"
#include "core/grid.hpp"

namespace charids {

struct SolveOptions {
  int quad_q = 24;        // Gauss-Legendre points per momentum axis
  int rk_substeps = 2;    // RK4 substeps per station interval
  bool euler_debug = false;  // forward Euler, for order-of-accuracy checks
  double field_cap = 1e12;   // blow-up guard on every marched component
};

struct StageRecord {
  std::string name;
  double wall_ms = 0.0;
  std::string note;
};

// Everything solved on one surface, plus the sampled free data it came from.
// On the second surface the same slots hold the underlined quantities; the
// generator coordinate is that surface's own parameter either way.
struct SolvedBundle {
  Surface surface = Surface::I0;
  SurfaceGrid grid;
  ScalarField theta, phi;
  SymTensorField Theta;
  ScalarField psi11;
  AngularVecField psi1a;
  ScalarField chi;
  ScalarField u;
  SymTensorField psi_ab;
  ScalarField psi01;
  std::vector<StageRecord> stages;
  std::uint64_t config_hash = 0;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> v);
  const std::vector<Violation>& violations() const { return v_; }

 private:
  std::vector<Violation> v_;
};

// Thrown when a marched field leaves the finite range: the data remain valid
// through last_station, the rest of the domain is truncated.
class SolverError : public std::runtime_error {
 public:
  SolverError(std::string stage, int last_station, double s_fail, const std::string& what);
  const std::string& stage() const { return stage_; }
  int last_station() const { return last_station_; }
  double s_fail() const { return s_fail_; }

 private:
  std::string stage_;
  int last_station_;
  double s_fail_;
};

// Runs the constraint hierarchy on one surface, one stage at a time. Stages
// must run in order; each consumes the node fields of the ones before it.
// Construction validates the free data and throws ValidationError on any
// violation.
class SurfaceSolver {
 public:
  SurfaceSolver(const FreeDataSpec& spec, Surface surf, const SurfaceGrid& grid,
                const SolveOptions& opt);
  ~SurfaceSolver();
  SurfaceSolver(SurfaceSolver&&) noexcept;
  SurfaceSolver& operator=(SurfaceSolver&&) noexcept;

  void run_psi11();   // algebraic, every station
  void run_psi1a();   // angular one-form transport
  void run_chi();     // trace transport
  void run_u();       // transversal scalar derivative
  void run_psi_ab();  // angular tensor transport + trace closure
  void run_psi01();   // final transversal metric derivative

  const SolvedBundle& bundle() const;
  SolvedBundle& bundle();  // mutable: tests poke fields between stages
  SolvedBundle take();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Full pipeline on one surface.
SolvedBundle solve_surface(const FreeDataSpec& spec, Surface surf, const SurfaceGrid& grid,
                           const SolveOptions& opt = {});

}  // namespace charids
