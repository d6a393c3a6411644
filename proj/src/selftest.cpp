#include "sfwg/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "sfwg/assembly.hpp"
#include "sfwg/driver.hpp"
#include "sfwg/errors.hpp"
#include "sfwg/linalg.hpp"
#include "sfwg/weakcalc.hpp"

namespace sfwg {

namespace {

Mesh family_mesh(int family, int n) { return family == 0 ? build_uniform_triangle_mesh(n) : build_quad_mesh(n); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Integral of x^a y^b over the reference triangle: a! b! / (a + b + 2)!.
double triangle_moment(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

PropertyResult check_quadrature() {
  PropertyResult r{"quadrature_moments", true, "", 0.0};
  double worst = 0.0;
  for (int p = 1; p <= kMaxTriangleExactness; ++p) {
    const QuadratureRule rule = reference_triangle_quadrature(p);
    for (int a = 0; a <= p; ++a) {
      const int b = p - a;
      double s = 0.0;
      for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
      const double exact = triangle_moment(a, b);
      worst = std::max(worst, std::abs(s - exact) / exact);
    }
  }
  for (int p = 0; p <= kMaxEdgeExactness; ++p) {
    const QuadratureRule rule = gauss_legendre(p);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * std::pow(rule.abscissae[q], p);
    const double exact = p % 2 == 0 ? 2.0 / (p + 1) : 0.0;
    worst = std::max(worst, std::abs(s - exact) / (p % 2 == 0 ? exact : 1.0));
  }
  r.passed = worst < 1e-11;
  r.detail = "max relative moment error " + sci(worst);
  return r;
}

PropertyResult check_dofmap() {
  PropertyResult r{"dofmap_partition", true, "", 0.0};
  for (int family = 0; family < 2; ++family) {
    for (int n : {1, 2, 3}) {
      for (int k : {2, 3, 4}) {
        const Mesh m = family_mesh(family, n);
        const DofMap d(m, k);
        std::vector<int> hits(static_cast<std::size_t>(d.total_dofs()), 0);
        for (int c = 0; c < m.num_cells(); ++c) {
          for (int i = 0; i < d.interior_dim(); ++i) ++hits[static_cast<std::size_t>(d.interior_offset(c) + i)];
        }
        for (int e = 0; e < m.num_edges(); ++e) {
          for (int i = 0; i < d.trace_dim(); ++i) ++hits[static_cast<std::size_t>(d.trace_offset(e) + i)];
          for (int i = 0; i < d.normal_dim(); ++i) ++hits[static_cast<std::size_t>(d.normal_offset(e) + i)];
        }
        for (int h : hits) {
          if (h != 1) r.passed = false;
        }
        if (d.free_dofs().size() + d.boundary_dofs().size() != static_cast<std::size_t>(d.total_dofs())) r.passed = false;
      }
    }
  }
  r.detail = r.passed ? "offsets tile [0, total)" : "offset families overlap or leave gaps";
  return r;
}

PropertyResult check_exactness(bool flip) {
  PropertyResult r{"weak_laplacian_exactness", true, "", 0.0};
  double worst = 0.0;
  for (int family = 0; family < 2; ++family) {
    for (int n : {1, 2}) {
      for (int k : {2, 3}) {
        const int j = k + (family == 0 ? 3 : 6);
        worst = std::max(worst, weak_laplacian_exactness_error(family, n, k, j, flip));
      }
    }
  }
  r.passed = worst <= 1e-9;
  r.detail = "max relative coefficient error " + sci(worst);
  return r;
}

PropertyResult check_stiffness_spd() {
  PropertyResult r{"stiffness_spd_on_Vh0", true, "", 0.0};
  double smallest = std::numeric_limits<double>::infinity();
  for (int family = 0; family < 2; ++family) {
    for (int n : {1, 2}) {
      for (int k : {2, 3}) {
        const Mesh m = family_mesh(family, n);
        const Space s(m, k, k + 3);
        const SparseSym a = assemble_stiffness(s);
        const Eigen::MatrixXd af = a.principal(s.dofmap.free_dofs()).to_dense();
        const double lo = min_eigenvalue(af) / af.diagonal().maxCoeff();
        smallest = std::min(smallest, lo);
        if (!(lo > 0.0)) r.passed = false;
      }
    }
  }
  r.detail = "min eigenvalue / max diagonal " + sci(smallest);
  return r;
}

PropertyResult check_schur() {
  PropertyResult r{"schur_block_structure", true, "", 0.0};
  std::ostringstream detail;
  for (int family = 0; family < 2; ++family) {
    for (int k : {2, 3}) {
      const Mesh m = family_mesh(family, 1);
      const Space s(m, k, k + 3);
      const SchurReport rep = schur_validate(s);
      if (!rep.passed) {
        r.passed = false;
        detail << (family == 0 ? "tri" : "quad") << " k=" << k << ": " << rep.message << ' ';
      }
    }
  }
  r.detail = r.passed ? "mass and edge blocks SPD, full and reduced solves agree" : detail.str();
  return r;
}

PropertyResult check_dissipation(unsigned seed) {
  PropertyResult r{"theta_scheme_dissipation", true, "", 0.0};
  const Mesh m = build_uniform_triangle_mesh(2);
  const Space s(m, 2, 5);
  const SparseSym a = assemble_stiffness(s);
  const SparseSym mass = assemble_mass_v0(s);
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(s.dofmap.total_dofs());
  int violations = 0;
  for (double theta : {0.5, 0.75, 1.0}) {
    for (double tau : {1.0, 0.1, 0.01}) {
      ThetaStepper stepper(a, mass, s.dofmap.free_dofs(), theta, tau, {SolverKind::Direct});
      Eigen::VectorXd u = zero;
      for (int d : s.dofmap.free_dofs()) u[d] = normal(rng);
      double prev = l2_norm_v0(u, mass);
      for (int n = 0; n < 20; ++n) {
        u = stepper.step(u, zero, zero, zero);
        const double now = l2_norm_v0(u, mass);
        if (now > prev * (1.0 + 1e-12)) ++violations;
        prev = now;
      }
    }
  }
  r.passed = violations == 0;
  r.detail = std::to_string(violations) + " increases of ||U^n|| over 180 steps";
  return r;
}

}  // namespace

double weak_laplacian_exactness_error(int family, int n, int k, int j, bool flip_normal_sign) {
  const Mesh m = family_mesh(family, n);
  const Space space(m, k, j);
  double worst = 0.0;
  std::vector<LocalWeakLaplacian> locals;
  for (int c = 0; c < m.num_cells(); ++c) {
    std::vector<double> signs;
    if (flip_normal_sign) {
      for (int e : m.cell_edges(c)) signs.push_back(-m.normal_sign(e, c));
    }
    locals.push_back(local_weak_laplacian(space, c, signs));
  }
  // Coefficients are compared in the L2-normalized basis (c_i sqrt(M_ii)) so the
  // measure does not depend on the h_T scaling of the monomials. The reference
  // scale per cell is the largest normalized coefficient over all test polynomials.
  std::vector<double> scale(static_cast<std::size_t>(m.num_cells()), 1e-300);
  std::vector<double> diff(static_cast<std::size_t>(m.num_cells()), 0.0);
  for (int deg = 0; deg <= k; ++deg) {
    for (int a = deg; a >= 0; --a) {
      const int b = deg - a;
      // Shifted monomial so that every coefficient is exercised.
      const ScalarField u = [a, b](Point p) { return std::pow(p.x - 0.3, a) * std::pow(p.y + 0.2, b); };
      const VectorField g = [a, b](Point p) {
        return Point{a > 0 ? a * std::pow(p.x - 0.3, a - 1) * std::pow(p.y + 0.2, b) : 0.0,
                     b > 0 ? b * std::pow(p.x - 0.3, a) * std::pow(p.y + 0.2, b - 1) : 0.0};
      };
      const ScalarField lap = [a, b](Point p) {
        double l = 0.0;
        if (a > 1) l += a * (a - 1) * std::pow(p.x - 0.3, a - 2) * std::pow(p.y + 0.2, b);
        if (b > 1) l += b * (b - 1) * std::pow(p.x - 0.3, a) * std::pow(p.y + 0.2, b - 2);
        return l;
      };
      const WeakFunction w = interpolate(u, g, space);
      for (int c = 0; c < m.num_cells(); ++c) {
        const auto ci = static_cast<std::size_t>(c);
        const Eigen::VectorXd norms = locals[ci].mass.diagonal().cwiseSqrt();
        const Eigen::VectorXd got = weak_laplacian_of(w, space, locals[ci]).cwiseProduct(norms);
        const Eigen::VectorXd want = project_cell(lap, m, c, j, space.quad.cell).cwiseProduct(norms);
        scale[ci] = std::max(scale[ci], want.cwiseAbs().maxCoeff());
        diff[ci] = std::max(diff[ci], (got - want).cwiseAbs().maxCoeff());
      }
    }
  }
  for (std::size_t c = 0; c < scale.size(); ++c) worst = std::max(worst, diff[c] / scale[c]);
  return worst;
}

std::vector<PropertyResult> run_selftest(const SelftestOptions& options) {
  std::vector<std::function<PropertyResult()>> checks = {
      check_quadrature,
      check_dofmap,
      [&] { return check_exactness(options.inject_sign_flip); },
      check_stiffness_spd,
      check_schur,
      [&] { return check_dissipation(options.seed); },
  };
  std::vector<PropertyResult> out;
  for (const auto& check : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    PropertyResult r;
    try {
      r = check();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sfwg
