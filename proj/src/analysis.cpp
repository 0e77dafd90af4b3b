#include "patankar/analysis.hpp"

#include "patankar/errors.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace patankar {

namespace {

constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

std::vector<double> log_space(double lo, double hi, int n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double a = std::log(lo), b = std::log(hi);
    for (int i = 0; i < n; ++i) v[i] = std::exp(a + (b - a) * i / (n - 1));
    v.front() = lo;
    v.back() = hi;
    return v;
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) return false;
    return true;
}

// Runs body(i) for i in [0, n) on up to `threads` workers.
template <class Body>
void parallel_for(std::size_t n, int threads, Body body) {
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                if (failed) return;
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

Stepper make_stepper(const SchemeSpec& spec) {
    switch (spec.family) {
    case Family::MPRK43: {
        const Mprk43Coefficients c = build_mprk43_tableau(spec.alpha, spec.beta);
        return [c](const PdsSystem& sys, const State& s, double dt) { return mprk43_step(sys, s, dt, c); };
    }
    case Family::MPDEC: {
        if (spec.order == 1) return [](const PdsSystem& sys, const State& s, double dt) { return mpe_step(sys, s, dt); };
        const DecWeights* w = &dec_weights(spec.order, spec.nodes);
        const int k = dec_corrections(spec.order);
        return [w, k](const PdsSystem& sys, const State& s, double dt) { return mpdec_step(sys, s, dt, *w, k); };
    }
    default:
        return [spec](const PdsSystem& sys, const State& s, double dt) { return step(spec, sys, s, dt); };
    }
}

ScanGrid ScanGrid::make(double eps_min, int eps_points, double theta_min, int theta_points, double dt_min,
                        double dt_max, int per_octave) {
    if (!(eps_min > 0.0 && eps_min < 0.5) || eps_points < 1)
        throw std::invalid_argument("ScanGrid: eps range must lie in (0, 0.5) with at least one point");
    if (!(theta_min > 0.0 && theta_min < 0.5) || theta_points < 1)
        throw std::invalid_argument("ScanGrid: theta range must lie in (0, 0.5) with at least one point");
    if (!(dt_min > 0.0 && dt_max >= dt_min) || per_octave < 1)
        throw std::invalid_argument("ScanGrid: need 0 < dt_min <= dt_max and per_octave >= 1");
    ScanGrid g;
    g.eps_values = log_space(eps_min, 0.5, eps_points);
    const std::vector<double> half = log_space(theta_min, 0.5, theta_points);
    g.theta_values = half;
    for (auto it = half.rbegin(); it != half.rend(); ++it)
        if (*it < 0.5) g.theta_values.push_back(1.0 - *it);
    const double octaves = std::log2(dt_max / dt_min);
    const int steps = static_cast<int>(std::lround(octaves * per_octave));
    for (int i = 0; i <= steps; ++i) g.dt_values.push_back(dt_min * std::exp2(static_cast<double>(i) / per_octave));
    if (steps > 0) g.dt_values.back() = dt_max;
    return g;
}

void ScanGrid::validate() const {
    if (eps_values.empty() || theta_values.empty() || dt_values.empty())
        throw std::invalid_argument("ScanGrid: empty list");
    if (!strictly_increasing(eps_values) || !strictly_increasing(theta_values) || !strictly_increasing(dt_values))
        throw std::invalid_argument("ScanGrid: lists must be strictly increasing");
    if (!(eps_values.front() > 0.0 && eps_values.back() < 1.0))
        throw std::invalid_argument("ScanGrid: eps values must lie in (0, 1)");
    if (!(theta_values.front() > 0.0 && theta_values.back() < 1.0))
        throw std::invalid_argument("ScanGrid: theta values must lie in (0, 1)");
    if (!(dt_values.front() > 0.0)) throw std::invalid_argument("ScanGrid: dt values must be positive");
}

double oscillation_measure(double u1_0, double u1_1, double u1_star) {
    auto pos = [](double x) { return x > 0.0 ? x : 0.0; };
    if (u1_0 > u1_star) return std::max(pos(u1_1 - u1_0), pos(u1_star - u1_1));
    if (u1_0 < u1_star) return std::max(pos(u1_0 - u1_1), pos(u1_1 - u1_star));
    return 0.0;
}

ScanResult dt_bound_scan(const Stepper& stepper, const ScanGrid& grid, int threads, bool stop_at_failure) {
    grid.validate();
    ScanResult res;
    res.dt_values = grid.dt_values;
    res.tolerance = 5.0 * kMachineEps;
    res.worst_measure.assign(grid.dt_values.size(), std::numeric_limits<double>::quiet_NaN());

    std::vector<Problem> systems;
    systems.reserve(grid.theta_values.size());
    for (double theta : grid.theta_values) systems.push_back(linear2x2({theta, 0.5}));

    const std::size_t ne = grid.eps_values.size(), nt = grid.theta_values.size();
    const std::size_t nd = grid.dt_values.size();
    // Measures land in a fixed slot per tuple, so the reduction below is
    // independent of scheduling.
    auto measure_at = [&](std::size_t id, std::size_t ie, std::size_t it) {
        const double eps = grid.eps_values[ie];
        const double theta = grid.theta_values[it];
        const State s0{0.0, (Eigen::VectorXd(2) << 1.0 - eps, eps).finished()};
        try {
            const State s1 = stepper(systems[it].system, s0, grid.dt_values[id]);
            const double m = oscillation_measure(1.0 - eps, s1.u[0], 1.0 - theta);
            return std::isnan(s1.u[0]) ? std::numeric_limits<double>::infinity() : m;
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    bool failed = false;
    if (stop_at_failure) {
        std::vector<double> slot(ne * nt);
        for (std::size_t id = 0; id < nd && !failed; ++id) {
            parallel_for(ne * nt, threads, [&](std::size_t k) { slot[k] = measure_at(id, k / nt, k % nt); });
            res.worst_measure[id] = *std::max_element(slot.begin(), slot.end());
            failed = !(res.worst_measure[id] <= res.tolerance);
        }
    } else {
        std::vector<double> slot(nd * ne * nt);
        parallel_for(slot.size(), threads,
                     [&](std::size_t k) { slot[k] = measure_at(k / (ne * nt), (k / nt) % ne, k % nt); });
        for (std::size_t id = 0; id < nd; ++id)
            res.worst_measure[id] = *std::max_element(slot.begin() + id * ne * nt, slot.begin() + (id + 1) * ne * nt);
    }

    res.dt_bound = std::numeric_limits<double>::infinity();
    for (std::size_t id = 0; id < nd; ++id) {
        if (!(res.worst_measure[id] <= res.tolerance)) {
            res.dt_bound = id == 0 ? 0.0 : grid.dt_values[id - 1];
            break;
        }
    }
    return res;
}

ScanResult dt_bound_scan(const SchemeSpec& spec, const ScanGrid& grid, int threads, bool stop_at_failure) {
    return dt_bound_scan(make_stepper(spec), grid, threads, stop_at_failure);
}

double fit_order(const std::vector<double>& dts, const std::vector<double>& errors) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < dts.size() && i < errors.size(); ++i) {
        if (errors[i] >= 100.0 * kMachineEps && std::isfinite(errors[i])) {
            x.push_back(std::log(dts[i]));
            y.push_back(std::log(errors[i]));
        }
    }
    if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

OrderEstimate convergence_study(const SchemeSpec& spec, const Problem& problem, const std::vector<double>& dts,
                                double t_end) {
    if (!problem.exact) throw std::invalid_argument("convergence_study: problem '" + problem.name + "' has no exact solution");
    for (std::size_t i = 1; i < dts.size(); ++i)
        if (!(dts[i] < dts[i - 1])) throw std::invalid_argument("convergence_study: dts must be decreasing");
    const Stepper stepper = make_stepper(spec);
    OrderEstimate est;
    est.dts = dts;
    for (double dt : dts) {
        const int n = std::max(1, static_cast<int>(std::lround(t_end / dt)));
        const std::vector<double> times = uniform_time_grid(problem.initial.t, problem.initial.t + t_end, n);
        State s = problem.initial;
        double sum = 0.0;
        for (int k = 1; k <= n; ++k) {
            s = stepper(problem.system, s, times[k] - times[k - 1]);
            s.t = times[k];
            sum += (problem.exact(s.t) - s.u).norm();
        }
        est.errors.push_back(sum / n);
    }
    est.slope = fit_order(est.dts, est.errors);
    return est;
}

VanishingProbe vanishing_ic_probe(const SchemeSpec& spec) {
    const Problem pr = linear2x2({0.5, 1e-300});
    const State s1 = step(spec, pr.system, pr.initial, 1.0);
    return {s1.u[0] > 0.999 ? VanishingClass::FirstOrderCollapse : VanishingClass::NoCollapse, s1.u[0]};
}

bool direction_check(const SchemeSpec& spec, double eps, double theta, double dt) {
    if (!(eps > 0.0 && eps < 1.0 && theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("direction_check: eps and theta must lie in (0, 1)");
    if (eps == theta) return true;
    const Problem pr = linear2x2({theta, eps});
    const State s1 = step(spec, pr.system, pr.initial, dt);
    if (eps < theta) return s1.u[1] > eps && s1.u[0] < 1.0 - eps;
    return s1.u[1] < eps && s1.u[0] > 1.0 - eps;
}

std::vector<double> scalar_cfl_scan(const SchemeSpec& spec, double k, const std::vector<double>& cfl_values) {
    const ScalarProblemSpec ps{k};
    const Problem pr = scalar_nonlinear(ps);
    const double u_inf = ps.steady_state();
    const Stepper stepper = make_stepper(spec);
    std::vector<double> out;
    for (double cfl : cfl_values) {
        if (!(cfl > 0.0)) throw std::invalid_argument("scalar_cfl_scan: CFL must be positive");
        const double dt = cfl / ps.lipschitz();
        const int n = std::max(1, static_cast<int>(std::ceil(ps.t_end() / dt - 1e-9)));
        State s = pr.initial;
        double worst = 0.0;
        for (int i = 0; i < n; ++i) {
            s = stepper(pr.system, s, dt);
            worst = std::max(worst, u_inf - s.u[0]);
        }
        out.push_back(worst);
    }
    return out;
}

} // namespace patankar
