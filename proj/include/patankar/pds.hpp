#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace patankar {

/// Callbacks write into a caller-owned output so hot loops can reuse storage.
using MatrixCallback = std::function<void(const Eigen::VectorXd& u, Eigen::MatrixXd& out)>;
using VectorCallback = std::function<void(const Eigen::VectorXd& u, Eigen::VectorXd& out)>;

/**
 * @brief Production-destruction-rest system u_i' = r_i + sum_j (p_ij - d_ij).
 *
 * Callbacks must be pure and safe to call concurrently. A missing rest
 * callback means r == 0.
 */
struct PdsSystem {
    int dim = 0;
    MatrixCallback production;
    MatrixCallback destruction;
    VectorCallback rest;
    bool conservative = false;

    Eigen::MatrixXd eval_production(const Eigen::VectorXd& u) const;
    Eigen::MatrixXd eval_destruction(const Eigen::VectorXd& u) const;
    Eigen::VectorXd eval_rest(const Eigen::VectorXd& u) const;

    /// Evaluates all three callbacks into preallocated storage and checks shapes.
    void evaluate(const Eigen::VectorXd& u, Eigen::MatrixXd& p, Eigen::MatrixXd& d,
                  Eigen::VectorXd& r) const;
};

struct State {
    double t = 0.0;
    Eigen::VectorXd u;
};

Eigen::VectorXd evaluate_rhs(const PdsSystem& sys, const State& s);

/// max |p_ij(u) - d_ji(u)| <= tol over every sample and index pair.
bool check_conservative(const PdsSystem& sys, const std::vector<State>& samples, double tol = 0.0);

double total_mass(const State& s);

/// Throws NonPositiveInput unless every component is finite and > 0.
void require_positive(const Eigen::VectorXd& u, const char* where);

} // namespace patankar
