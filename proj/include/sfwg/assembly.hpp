#pragma once

#include <Eigen/Dense>

#include <functional>

#include "sfwg/fespace.hpp"
#include "sfwg/sparse.hpp"
#include "sfwg/weakcalc.hpp"

namespace sfwg {

using SpaceTimeField = std::function<double(double t, Point p)>;

struct AssemblyDiagnostics {
  /// Largest local P_j mass condition estimate over all cells.
  double max_mass_condition = 0.0;
  int worst_cell = -1;
};

inline constexpr double kMassConditionWarning = 1e12;

/// A_ab = sum_T (Delta_w phi_a, Delta_w phi_b)_T over all DOFs.
SparseSym assemble_stiffness(const Space& space, AssemblyDiagnostics* diagnostics = nullptr);

/// (u_0, v_0) over interior DOFs; edge rows and columns are empty.
SparseSym assemble_mass_v0(const Space& space);

/// (f(t), v_0) for interior DOFs; zeros on edge DOFs.
Eigen::VectorXd assemble_load(const SpaceTimeField& f, double t, const Space& space);
Eigen::VectorXd assemble_load(const ScalarField& f, const Space& space);

/// Prescribed boundary trace and normal-derivative data. Empty callables mean zero.
struct BoundaryData {
  /// Trace value g_b(t, x).
  SpaceTimeField trace;
  /// Normal derivative along the fixed edge normal: g_n(t, x, n_e).
  std::function<double(double t, Point p, Point normal)> normal_derivative;

  [[nodiscard]] bool homogeneous() const { return !trace && !normal_derivative; }

  static BoundaryData zero() { return {}; }
  /// Data of a known solution u with gradient grad_u.
  static BoundaryData from_solution(SpaceTimeField u, std::function<Point(double, Point)> grad_u);
};

/// Full-length vector holding Q_b g_b and Q_n g_n on boundary DOFs, zero elsewhere.
Eigen::VectorXd boundary_values(const BoundaryData& data, double t, const Space& space);

struct ReducedSystem {
  SparseSym matrix;           // free x free block
  Eigen::VectorXd lift;       // -(A g)|free
  Eigen::VectorXd boundary;   // full-length prescribed values g
};

/// Symmetric elimination of boundary DOFs.
ReducedSystem reduce_system(const SparseSym& a, const DofMap& dofs, const Eigen::VectorXd& boundary);
ReducedSystem reduce_system(const SparseSym& a, const Space& space, const BoundaryData& data, double t);

Eigen::VectorXd restrict_to_free(const Eigen::VectorXd& full, const DofMap& dofs);
/// Full vector from free values plus prescribed boundary values.
Eigen::VectorXd expand_from_free(const Eigen::VectorXd& free, const DofMap& dofs, const Eigen::VectorXd& boundary);

}  // namespace sfwg
