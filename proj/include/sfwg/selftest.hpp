#pragma once

#include <string>
#include <vector>

namespace sfwg {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SelftestOptions {
  /// Flip the sign of the v_n edge term in the exactness check (mutation check:
  /// the exactness property must then fail).
  bool inject_sign_flip = false;
  unsigned seed = 20240607;
};

/// Small-size invariant suite: quadrature moments, DOF partition, weak
/// Laplacian exactness on polynomials, stiffness SPD on V_h^0, block/Schur
/// structure, and energy dissipation of the theta scheme.
std::vector<PropertyResult> run_selftest(const SelftestOptions& options = {});

/// Largest relative coefficient mismatch between the weak Laplacian of Q_h p and
/// the P_j projection of Laplacian(p), over all monomials p of degree <= k and
/// all cells. `flip_normal_sign` negates the v_n term.
double weak_laplacian_exactness_error(int family /*0 tri, 1 quad*/, int n, int k, int j, bool flip_normal_sign = false);

}  // namespace sfwg
