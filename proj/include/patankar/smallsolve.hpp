#pragma once

#include <Eigen/Dense>

namespace patankar {

/// Dense LU with partial pivoting. Throws SingularMatrix when a pivot falls
/// below 1e-30 * ||a||_inf.
Eigen::VectorXd lu_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// In-place variant: overwrites a with its factors and b with the solution.
void lu_solve_inplace(Eigen::MatrixXd& a, Eigen::VectorXd& b);

/**
 * @brief Solves a x = b for a Z-matrix with known positive column sums and
 * b >= 0.
 *
 * This is the structure of modified Patankar matrices of conservative
 * systems. Diagonal pivots are rebuilt from the column sums, so no step
 * subtracts like-signed numbers and sum(x * col_sums) = sum(b) holds to a few
 * ulp however badly scaled a is. The diagonal of a is ignored on input.
 * Returns false, leaving a and b unspecified, when the sign pattern does
 * not hold or a pivot degenerates.
 */
bool column_sum_solve_inplace(Eigen::MatrixXd& a, Eigen::VectorXd& b, const Eigen::VectorXd& col_sums);

/**
 * @brief Sufficient M-matrix test: positive diagonal, nonpositive
 * off-diagonal and strict diagonal dominance.
 *
 * Dominance is accepted by rows or by columns. Modified Patankar matrices of
 * conservative systems are column dominant but not always row dominant.
 */
bool m_matrix_certificate(const Eigen::MatrixXd& a);

} // namespace patankar
