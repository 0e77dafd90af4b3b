#pragma once

// Shared modified-Patankar machinery for the scheme implementations.

#include "patankar/pds.hpp"

#include <Eigen/Dense>

namespace patankar::detail {

struct Evaluation {
    Eigen::MatrixXd p;
    Eigen::MatrixXd d;
    Eigen::VectorXd r;

    void at(const PdsSystem& sys, const Eigen::VectorXd& u) { sys.evaluate(u, p, d, r); }
};

/**
 * Weighted sum of production/destruction terms split by sign. Terms with a
 * negative weight are stored with |w| and have their production and
 * destruction roles exchanged in the system matrix.
 */
struct Combined {
    Eigen::MatrixXd p_pos, d_pos, p_neg, d_neg;
    Eigen::VectorXd r;
    bool has_neg = false;

    void reset(int dim);
    void add(double w, const Evaluation& e) { add(w, e, w); }
    void add(double w, const Evaluation& e, double rest_weight);
};

/// System matrix of the solve below in the unknowns z_j = x_j / s_j, which
/// keeps every entry free of division by possibly tiny denominators.
Eigen::MatrixXd patankar_matrix(double dt, const Combined& c, const Eigen::VectorXd& denom);

/// base + dt * (r + explicit diagonal self-production).
Eigen::VectorXd patankar_rhs(const Eigen::VectorXd& base, double dt, const Combined& c);

/**
 * Solves x_i = base_i + dt * r_i
 *            + dt * sum_j (P+_ij x_j / s_j - D+_ij x_i / s_i)
 *            + dt * sum_j (D-_ij x_j / s_j - P-_ij x_i / s_i)
 * where s is the Patankar denominator vector. The diagonal terms P+_ii
 * and D-_ii are taken explicitly (dt * P+_ii, dt * D-_ii on the right).
 */
Eigen::VectorXd patankar_solve(const Eigen::VectorXd& base, double dt, const Combined& c,
                               const Eigen::VectorXd& denom, bool conservative);

/// y2^a * y1^(1-a) evaluated in log space with bases and result kept normal.
Eigen::VectorXd power_mean(const Eigen::VectorXd& y2, const Eigen::VectorXd& y1, double a);

} // namespace patankar::detail
