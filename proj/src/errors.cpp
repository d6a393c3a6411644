#include "sfwg/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sfwg {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPi4 = std::numbers::pi * std::numbers::pi * std::numbers::pi * std::numbers::pi;
}  // namespace

double ManufacturedSolution::time_factor(double t) { return std::cos(kTwoPi * (t * t + 1.0)); }

double ManufacturedSolution::time_factor_derivative(double t) {
  return -2.0 * kTwoPi * t * std::sin(kTwoPi * (t * t + 1.0));
}

double ManufacturedSolution::spatial(Point p) { return std::cos(kTwoPi * p.x) * std::cos(kTwoPi * p.y); }

double ManufacturedSolution::u(double t, Point p) { return time_factor(t) * spatial(p); }

double ManufacturedSolution::u_t(double t, Point p) { return time_factor_derivative(t) * spatial(p); }

Point ManufacturedSolution::grad(double t, Point p) {
  const double a = time_factor(t);
  return {-kTwoPi * a * std::sin(kTwoPi * p.x) * std::cos(kTwoPi * p.y),
          -kTwoPi * a * std::cos(kTwoPi * p.x) * std::sin(kTwoPi * p.y)};
}

double ManufacturedSolution::laplacian(double t, Point p) { return -2.0 * kTwoPi * kTwoPi * u(t, p); }

double ManufacturedSolution::bilaplacian(double t, Point p) { return 64.0 * kPi4 * u(t, p); }

double ManufacturedSolution::f(double t, Point p) { return u_t(t, p) + bilaplacian(t, p); }

TransientProblem ManufacturedSolution::problem() {
  TransientProblem pr;
  pr.f = [](double t, Point p) { return f(t, p); };
  pr.initial = [](Point p) { return u(0.0, p); };
  pr.initial_gradient = [](Point p) { return grad(0.0, p); };
  pr.boundary = boundary();
  pr.initial_bilaplacian = [](Point p) { return bilaplacian(0.0, p); };
  return pr;
}

BoundaryData ManufacturedSolution::boundary() {
  return BoundaryData::from_solution([](double t, Point p) { return u(t, p); },
                                     [](double t, Point p) { return grad(t, p); });
}

ScalarField ManufacturedSolution::steady_load(double t) {
  return [t](Point p) { return bilaplacian(t, p); };
}

BoundaryData ManufacturedSolution::steady_boundary(double t) {
  return BoundaryData::from_solution([t](double, Point p) { return u(t, p); },
                                     [t](double, Point p) { return grad(t, p); });
}

WeakFunction ManufacturedSolution::interpolant(double t, const Space& space) {
  return interpolate([t](Point p) { return u(t, p); }, [t](Point p) { return grad(t, p); }, space);
}

namespace {

double checked_sqrt(double q, double scale, const char* what) {
  if (q < -1e-12 * std::max(1.0, scale)) {
    throw std::domain_error(std::string(what) + ": negative quadratic form (matrix corrupted?)");
  }
  return std::sqrt(std::max(q, 0.0));
}

}  // namespace

double triple_bar_norm(const Eigen::VectorXd& w, const SparseSym& a) {
  const double q = a.quadratic_form(w);
  return checked_sqrt(q, a.max_abs() * w.squaredNorm(), "triple_bar_norm");
}

double triple_bar_norm(const WeakFunction& w, const SparseSym& a) { return triple_bar_norm(w.coefficients, a); }

double l2_norm_v0(const Eigen::VectorXd& w, const SparseSym& m) {
  const double q = m.quadratic_form(w);
  return checked_sqrt(q, m.max_abs() * w.squaredNorm(), "l2_norm_v0");
}

double l2_norm_v0(const WeakFunction& w, const SparseSym& m) { return l2_norm_v0(w.coefficients, m); }

double norm_2h(const WeakFunction& w, const Space& space) {
  const Mesh& mesh = *space.mesh;
  const DofMap& dofs = space.dofmap;
  const int k = space.k;
  const int nk = dofs.interior_dim();
  std::vector<double> val(static_cast<std::size_t>(nk)), dx(static_cast<std::size_t>(nk)),
      dy(static_cast<std::size_t>(nk)), lap(static_cast<std::size_t>(nk));
  std::vector<double> leg(static_cast<std::size_t>(k + 1));
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellBasis basis(mesh, c, k);
    const auto v0 = w.interior(c);
    const double h = mesh.cell_diameter(c);

    const QuadratureRule cq = polygon_quadrature(mesh, c, std::max(2 * k - 4, 0));
    for (std::size_t q = 0; q < cq.size(); ++q) {
      basis.evaluate(cq.points[q], {}, {}, {}, lap);
      double l = 0.0;
      for (int i = 0; i < nk; ++i) l += v0[i] * lap[static_cast<std::size_t>(i)];
      total += cq.weights[q] * l * l;
    }

    for (int e : mesh.cell_edges(c)) {
      const Edge& edge = mesh.edges()[e];
      const double sign = mesh.normal_sign(e, c);
      const Point n_out = sign * edge.normal;
      const auto vb = w.trace(e);
      const auto vn = w.normal(e);
      const QuadratureRule eq = edge_quadrature(2 * k, edge.length);
      double jump = 0.0;
      double flux = 0.0;
      for (std::size_t q = 0; q < eq.size(); ++q) {
        const double s = eq.abscissae[q];
        basis.evaluate(mesh.edge_point(e, s), val, dx, dy, {});
        legendre_values(k, s, leg);
        double u0 = 0.0, gn = 0.0;
        for (int i = 0; i < nk; ++i) {
          const auto ii = static_cast<std::size_t>(i);
          u0 += v0[i] * val[ii];
          gn += v0[i] * (dx[ii] * n_out.x + dy[ii] * n_out.y);
        }
        double ub = 0.0, un = 0.0;
        for (int l = 0; l <= k; ++l) ub += vb[l] * leg[static_cast<std::size_t>(l)];
        for (int l = 0; l < k; ++l) un += vn[l] * leg[static_cast<std::size_t>(l)];
        // (v_n n_e) . n = sign * v_n
        const double d = u0 - ub;
        const double g = gn - sign * un;
        jump += eq.weights[q] * d * d;
        flux += eq.weights[q] * g * g;
      }
      total += jump / (h * h * h) + flux / h;
    }
  }
  return std::sqrt(total);
}

std::vector<std::optional<double>> compute_rates(const std::vector<double>& levels, const std::vector<double>& errors) {
  if (levels.size() != errors.size()) throw std::invalid_argument("compute_rates: size mismatch");
  std::vector<std::optional<double>> rates(levels.size());
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i] > levels[i - 1])) throw std::invalid_argument("compute_rates: levels must increase");
    if (errors[i - 1] > 0.0 && errors[i] > 0.0) {
      rates[i] = std::log(errors[i - 1] / errors[i]) / std::log(levels[i] / levels[i - 1]);
    }
  }
  return rates;
}

ErrorTriple error_norms(const WeakFunction& e, const Space& space, const SparseSym& a, const SparseSym& m) {
  return {triple_bar_norm(e, a), norm_2h(e, space), l2_norm_v0(e, m)};
}

ErrorTriple evaluate_errors(const WeakFunction& u, double t, const Space& space, const SparseSym& a,
                            const SparseSym& m) {
  const WeakFunction qu = ManufacturedSolution::interpolant(t, space);
  const WeakFunction e(space.dofmap, qu.coefficients - u.coefficients);
  return error_norms(e, space, a, m);
}

}  // namespace sfwg
