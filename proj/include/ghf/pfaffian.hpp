#pragma once

#include <Eigen/Dense>
#include <vector>

namespace ghf {

// Dense kernels for real skew-symmetric matrices. All functions treat the
// strict upper triangle as authoritative; inputs are checked for
// antisymmetry up to a small tolerance.

// Mirrors the strict upper triangle of m into an exactly antisymmetric
// matrix (diagonal zeroed).
Eigen::MatrixXd antisymmetrize_upper(const Eigen::MatrixXd& m);

// Largest |A + A^T| entry; 0 for an exactly antisymmetric matrix.
double antisymmetry_error(const Eigen::MatrixXd& a);

// Pfaffian by skew-symmetric Gaussian elimination with partial pivoting,
// O(dim^3). Pf of the empty matrix is 1. Throws on odd dimension.
double pfaffian(const Eigen::MatrixXd& a);

// Matrix G with G_ij = dPf(A)/dA_ij = (-1)^{i+j+1}/2 * Pf(A with rows and
// columns i,j removed) for i < j (1-based parity; the value is the same for
// 0-based indices), antisymmetrically extended. Entries A_ij and A_ji are
// treated as formally independent. Uses the identity
//   dPf/dA_ij = Pf(A) (A^{-1})_ji / 2
// when A is well conditioned, and falls back to explicit minor Pfaffians
// otherwise.
Eigen::MatrixXd pfaffian_gradient(const Eigen::MatrixXd& a);

// Restriction of a to the given rows and columns, order preserved.
// Indices must be strictly increasing and in range.
Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& a,
                                    const std::vector<int>& indices);

}  // namespace ghf
