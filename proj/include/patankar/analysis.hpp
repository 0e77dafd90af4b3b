#pragma once

#include "patankar/pds.hpp"
#include "patankar/problems.hpp"
#include "patankar/schemes.hpp"

#include <functional>
#include <vector>

namespace patankar {

/// Single-step map used by the scan harnesses.
using Stepper = std::function<State(const PdsSystem&, const State&, double)>;

Stepper make_stepper(const SchemeSpec& spec);

struct ScanGrid {
    std::vector<double> eps_values;
    std::vector<double> theta_values;
    std::vector<double> dt_values;

    /// eps and theta: points log-spaced in [min, 0.5], theta mirrored to 1 - theta.
    /// dt: 2^dt_min_exp .. 2^dt_max_exp with per_octave points per factor 2.
    static ScanGrid make(double eps_min = 1e-8, int eps_points = 25, double theta_min = 1e-8,
                         int theta_points = 25, double dt_min = 0.015625, double dt_max = 64.0,
                         int per_octave = 16);

    /// Throws std::invalid_argument when a list is empty, unsorted or out of range.
    void validate() const;
};

struct ScanResult {
    std::vector<double> dt_values;
    /// Worst oscillation measure over all (eps, theta) for each dt. Entries
    /// beyond the first failing dt are NaN when the scan stopped early.
    std::vector<double> worst_measure;
    double dt_bound = 0.0;  ///< +inf when every dt passes, 0 when the first one fails
    double tolerance = 0.0;
};

double oscillation_measure(double u1_0, double u1_1, double u1_star);

/// Pass threads <= 0 to use the hardware concurrency. With stop_at_failure the
/// scan skips every dt after the first failing one (the bound is unaffected).
ScanResult dt_bound_scan(const Stepper& stepper, const ScanGrid& grid, int threads = 0,
                         bool stop_at_failure = false);
ScanResult dt_bound_scan(const SchemeSpec& spec, const ScanGrid& grid, int threads = 0,
                         bool stop_at_failure = false);

struct OrderEstimate {
    std::vector<double> dts;
    std::vector<double> errors;
    double slope = 0.0;
};

/// Uniform-step integration to t_end for each dt; err = mean over steps of
/// the 2-norm distance to the exact solution.
OrderEstimate convergence_study(const SchemeSpec& spec, const Problem& problem,
                                const std::vector<double>& dts, double t_end);

/// Least-squares slope of log(err) vs log(dt), ignoring err < 100 eps.
double fit_order(const std::vector<double>& dts, const std::vector<double>& errors);

enum class VanishingClass { FirstOrderCollapse, NoCollapse };

struct VanishingProbe {
    VanishingClass cls;
    double u1;
};

VanishingProbe vanishing_ic_probe(const SchemeSpec& spec);

/// First step moves u2 towards theta without reaching past the start value of
/// u1 mirrored, i.e. u2 > eps and u1 < 1 - eps when eps < theta (reversed
/// inequalities when eps > theta). eps == theta is trivially true.
bool direction_check(const SchemeSpec& spec, double eps, double theta, double dt);

/// For each CFL: dt = CFL / C(k), integrate to 0.15, report max (u_inf - u^n)^+.
std::vector<double> scalar_cfl_scan(const SchemeSpec& spec, double k,
                                    const std::vector<double>& cfl_values);

} // namespace patankar
