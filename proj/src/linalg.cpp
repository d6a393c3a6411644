#include "sfwg/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sfwg/assembly.hpp"

namespace sfwg {

CgResult cg_solve(const SparseSym& a, const Eigen::VectorXd& b, const CgOptions& options, const Eigen::VectorXd& x0) {
  const int n = a.dim();
  if (b.size() != n) throw std::invalid_argument("cg_solve: right-hand side size mismatch");
  if (!(options.tol > 0.0)) throw std::invalid_argument("cg_solve: tolerance must be positive");

  CgResult res;
  res.x = x0.size() == n ? x0 : Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.x.setZero();
    res.converged = true;
    return res;
  }

  Eigen::VectorXd inv_diag = a.diagonal();
  for (int i = 0; i < n; ++i) inv_diag[i] = inv_diag[i] > 0.0 ? 1.0 / inv_diag[i] : 1.0;

  Eigen::VectorXd r = b - a * res.x;
  double rnorm = r.norm();
  if (rnorm <= options.tol * bnorm) {
    res.residual = rnorm / bnorm;
    res.converged = true;
    return res;
  }
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd ap(n);
  double rz = r.dot(z);
  for (int it = 1; it <= options.maxit; ++it) {
    a.multiply({p.data(), static_cast<std::size_t>(n)}, {ap.data(), static_cast<std::size_t>(n)});
    const double pap = p.dot(ap);
    if (!(pap > 0.0)) break;  // not SPD along p, or breakdown
    const double alpha = rz / pap;
    res.x += alpha * p;
    r -= alpha * ap;
    rnorm = r.norm();
    res.iterations = it;
    if (options.monitor) options.monitor(it, res.x, rnorm);
    if (rnorm <= options.tol * bnorm) {
      // Recompute the true residual once; the recurrence drifts on hard systems.
      r = b - a * res.x;
      rnorm = r.norm();
      if (rnorm <= options.tol * bnorm) {
        res.converged = true;
        break;
      }
    }
    z = inv_diag.cwiseProduct(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  res.residual = rnorm / bnorm;
  return res;
}

Eigen::VectorXd dense_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int cap) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw SolverError("dense_solve: dimension mismatch");
  if (a.rows() > cap) {
    throw SolverError("dense_solve: dimension " + std::to_string(a.rows()) + " exceeds cap " + std::to_string(cap));
  }
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  const Eigen::VectorXd d = ldlt.vectorD();
  const double big = d.cwiseAbs().maxCoeff();
  if (ldlt.info() != Eigen::Success || !(big > 0.0) ||
      d.cwiseAbs().minCoeff() <= big * std::numeric_limits<double>::epsilon() * static_cast<double>(a.rows())) {
    throw SolverError("dense_solve: matrix is singular to working precision");
  }
  return ldlt.solve(b);
}

double min_eigenvalue(const Eigen::MatrixXd& a) {
  if (a.rows() == 0) return 0.0;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

SchurReport schur_validate(const Space& space, const std::optional<Eigen::VectorXd>& interior_rhs, int cap) {
  const DofMap& dofs = space.dofmap;
  const auto& free = dofs.free_dofs();
  if (static_cast<int>(free.size()) > cap) {
    throw SolverError("schur_validate: " + std::to_string(free.size()) + " free DOFs exceed the dense cap");
  }
  const int n0 = dofs.num_interior_dofs();
  const int ne = static_cast<int>(free.size()) - n0;

  const Eigen::MatrixXd a = assemble_stiffness(space).principal(free).to_dense();
  const Eigen::MatrixXd m = assemble_mass_v0(space).principal(free).to_dense();

  const Eigen::MatrixXd a00 = a.topLeftCorner(n0, n0);
  const Eigen::MatrixXd a0e = a.topRightCorner(n0, ne);
  const Eigen::MatrixXd aee = a.bottomRightCorner(ne, ne);
  const Eigen::MatrixXd c = m.topLeftCorner(n0, n0);

  SchurReport rep;
  rep.interior_dofs = n0;
  rep.edge_dofs = ne;
  rep.mass_min_eigenvalue = min_eigenvalue(c);
  // An empty edge block (every edge on the boundary) is vacuously SPD.
  rep.edge_block_min_eigenvalue = ne > 0 ? min_eigenvalue(aee) : std::numeric_limits<double>::infinity();
  rep.mass_spd = rep.mass_min_eigenvalue > 0.0;
  rep.edge_block_spd = rep.edge_block_min_eigenvalue > 0.0;

  Eigen::VectorXd f0;
  if (interior_rhs) {
    if (interior_rhs->size() != n0) throw std::invalid_argument("schur_validate: interior rhs size mismatch");
    f0 = *interior_rhs;
  } else {
    f0 = assemble_load([](Point) { return 1.0; }, space).head(n0);
  }

  std::ostringstream msg;
  if (!rep.mass_spd) msg << "interior mass block not SPD (min eig " << rep.mass_min_eigenvalue << "); ";
  if (!rep.edge_block_spd) msg << "edge block not SPD (min eig " << rep.edge_block_min_eigenvalue << "); ";

  if (rep.mass_spd && rep.edge_block_spd) {
    // Full stationary system [A00 A0e; Ae0 Aee] [b; de] = [f0; 0].
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n0 + ne);
    rhs.head(n0) = f0;
    const Eigen::VectorXd full = dense_solve(a, rhs, cap);

    // Eliminate the edge unknowns: de = -Aee^{-1} Ae0 b.
    const Eigen::LLT<Eigen::MatrixXd> aee_llt(aee);
    const Eigen::MatrixXd aee_inv_ae0 = aee_llt.solve(a0e.transpose());
    const Eigen::MatrixXd schur = a00 - a0e * aee_inv_ae0;
    const Eigen::VectorXd b = dense_solve(schur, f0, cap);
    Eigen::VectorXd reduced(n0 + ne);
    reduced.head(n0) = b;
    reduced.tail(ne) = -aee_inv_ae0 * b;

    const double big = full.cwiseAbs().maxCoeff();
    const double scale = big > 0.0 ? big : 1.0;
    rep.solve_disagreement = (full - reduced).cwiseAbs().maxCoeff() / scale;
    rep.solves_agree = rep.solve_disagreement <= kSchurAgreementTol;
    if (!rep.solves_agree) msg << "full and reduced solves differ by " << rep.solve_disagreement << "; ";

    // Spectrum of the reduced ODE operator -C^{-1} S via the pencil (S, C).
    const Eigen::MatrixXd sym = 0.5 * (schur + schur.transpose());
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(sym, c, Eigen::EigenvaluesOnly);
    rep.reduced_operator_max_eigenvalue = -ges.eigenvalues().minCoeff();
  }
  rep.passed = rep.mass_spd && rep.edge_block_spd && rep.solves_agree;
  rep.message = rep.passed ? "ok" : msg.str();
  return rep;
}

}  // namespace sfwg
