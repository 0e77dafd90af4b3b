#pragma once

#include "patankar/pds.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace patankar {

/// A benchmark system bundled with its initial state and optional exact data.
struct Problem {
    std::string name;
    PdsSystem system;
    State initial;
    double t_end = 1.0;
    std::function<Eigen::VectorXd(double)> exact;  ///< empty when unknown
    std::optional<Eigen::VectorXd> steady_state;
};

struct LinearSystemSpec {
    double theta = 0.5;
    double epsilon = 1e-2;
};

struct GeneralLinearSpec {
    double a = 1.0;
    double b = 1.0;
};

struct ScalarProblemSpec {
    double k = 1e4;

    double steady_state() const;
    double u0() const;
    double lipschitz() const;
    double t_end() const { return 0.15; }
};

struct RobertsonSpec {
    double k1 = 0.04;
    double k2 = 3e7;
    double k3 = 1e4;
    double ic_epsilon = 1e-180;
    double t_end = 1e10;
};

struct HiresSpec {
    double k1 = 1.71, k2 = 0.43, k3 = 8.32, k4 = 0.69, k5 = 0.035, k6 = 8.32;
    double kplus = 280.0, kminus = 0.69, kstar = 0.69;
    double sigma = 0.0007;
    double ic_epsilon = 1e-35;
    double t_end = 321.8122;
};

/// u1' = -theta u1 + (1-theta) u2, u2' = theta u1 - (1-theta) u2, IC (1-eps, eps).
Problem linear2x2(const LinearSystemSpec& spec);
Eigen::VectorXd linear2x2_exact(const LinearSystemSpec& spec, double t);
double v1_component(const Eigen::VectorXd& u, double theta);

/// u1' = -a u1 + b u2, u2' = a u1 - b u2. Equivalent to linear2x2 with
/// theta = a/(a+b) after rescaling time by (a+b).
PdsSystem general_linear(const GeneralLinearSpec& spec);

struct LinearRescale {
    double theta;
    double time_scale;
};
LinearRescale rescale_general_linear(const GeneralLinearSpec& spec);

/// u' = -k|u|u + 1 with d11 = k|u|u, p11 = 0, r1 = 1.
Problem scalar_nonlinear(const ScalarProblemSpec& spec);

Problem robertson(const RobertsonSpec& spec);
Problem hires(const HiresSpec& spec);

/// n geometrically growing steps from t0 to t1; the first has length
/// first_fraction * (t1 - t0). Falls back to uniform steps when n steps of
/// that length already cover the interval.
std::vector<double> exponential_time_grid(double t0, double t1, int n, double first_fraction = 1e-6);
std::vector<double> uniform_time_grid(double t0, double t1, int n);

} // namespace patankar
