#pragma once

#include "patankar/pds.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace patankar {

struct ButcherTableau {
    std::string name;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;

    int stages() const { return static_cast<int>(b.size()); }
};

/// Every implicit tableau known to the library, keyed by lowercase name.
const std::vector<ButcherTableau>& tableau_registry();

/// Throws std::out_of_range listing the valid names when `name` is unknown.
const ButcherTableau& find_tableau(const std::string& name);

/// R(z) = 1 + z b^T (I - zA)^{-1} 1. Throws SingularMatrix at poles.
double rk_stability_value(const ButcherTableau& tab, double z);

/**
 * @brief Smallest dt in (0, dt_max] with R(-dt) <= 0.
 *
 * Samples 1024 log-spaced points, then bisects to 1e-9 relative. Sign changes
 * across poles and double roots where R touches zero both count as thresholds.
 * Returns +infinity when no threshold lies on the horizon.
 */
double rk_positivity_threshold(const ButcherTableau& tab, double dt_max = 64.0);

/// One step of the RK method applied to a system whose right-hand side is
/// linear in u. The linear map is recovered by evaluating the rhs on unit vectors.
State rk_linear_step(const ButcherTableau& tab, const PdsSystem& sys, const State& s, double dt);

} // namespace patankar
