#pragma once

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "sfwg/assembly.hpp"
#include "sfwg/driver.hpp"

namespace sfwg {

/// u(t,x,y) = cos(2 pi (t^2 + 1)) cos(2 pi x) cos(2 pi y) on the unit square,
/// i.e. sin(2 pi (t^2+1) + pi/2) sin(2 pi x + pi/2) sin(2 pi y + pi/2).
/// Its biharmonic is 64 pi^4 u and f = u_t + 64 pi^4 u.
struct ManufacturedSolution {
  [[nodiscard]] static double time_factor(double t);
  [[nodiscard]] static double time_factor_derivative(double t);
  [[nodiscard]] static double spatial(Point p);

  [[nodiscard]] static double u(double t, Point p);
  [[nodiscard]] static double u_t(double t, Point p);
  [[nodiscard]] static Point grad(double t, Point p);
  [[nodiscard]] static double laplacian(double t, Point p);
  [[nodiscard]] static double bilaplacian(double t, Point p);
  [[nodiscard]] static double f(double t, Point p);

  [[nodiscard]] static TransientProblem problem();
  [[nodiscard]] static BoundaryData boundary();
  /// Steady data at frozen time t: f = bilaplacian(u(t)), boundary from u(t).
  [[nodiscard]] static ScalarField steady_load(double t);
  [[nodiscard]] static BoundaryData steady_boundary(double t);
  [[nodiscard]] static WeakFunction interpolant(double t, const Space& space);
};

/// sqrt(w^T A w); throws std::domain_error when the form is below -1e-12 * scale.
double triple_bar_norm(const WeakFunction& w, const SparseSym& a);
double triple_bar_norm(const Eigen::VectorXd& w, const SparseSym& a);

/// Mesh-dependent H^2-like norm:
/// sum_T ||Lap v0||_T^2 + h_T^-3 ||v0 - vb||_dT^2 + h_T^-1 ||(grad v0 - vn n_e) . n||_dT^2.
double norm_2h(const WeakFunction& w, const Space& space);

/// sqrt(w^T M w) with the interior mass matrix.
double l2_norm_v0(const WeakFunction& w, const SparseSym& m);
double l2_norm_v0(const Eigen::VectorXd& w, const SparseSym& m);

/// rate_i = log(e_{i-1}/e_i) / log(n_i/n_{i-1}); empty for the first level and
/// whenever either error is not positive.
std::vector<std::optional<double>> compute_rates(const std::vector<double>& levels, const std::vector<double>& errors);

struct ErrorTriple {
  double trb = 0.0;
  double h2 = 0.0;
  double l2 = 0.0;
};

/// Norms of e = Q_h u(t) - U.
ErrorTriple evaluate_errors(const WeakFunction& u, double t, const Space& space, const SparseSym& a,
                            const SparseSym& m);
/// Norms of a difference already formed.
ErrorTriple error_norms(const WeakFunction& e, const Space& space, const SparseSym& a, const SparseSym& m);

}  // namespace sfwg
