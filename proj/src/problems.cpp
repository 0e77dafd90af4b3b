#include "patankar/problems.hpp"

#include "patankar/errors.hpp"

#include <cmath>
#include <string>

namespace patankar {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Builds a conservative system from a production-matrix callback; d = p^T.
PdsSystem conservative_from_production(int dim, MatrixCallback production) {
    PdsSystem sys;
    sys.dim = dim;
    sys.conservative = true;
    sys.production = production;
    sys.destruction = [production](const VectorXd& u, MatrixXd& d) {
        MatrixXd p = MatrixXd::Zero(u.size(), u.size());
        production(u, p);
        d = p.transpose();
    };
    return sys;
}

} // namespace

Problem linear2x2(const LinearSystemSpec& spec) {
    const double theta = spec.theta;
    const double eps = spec.epsilon;
    if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidProblem("linear2x2: theta must lie in [0, 1]");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidProblem("linear2x2: epsilon must lie in (0, 1)");
    Problem pr;
    pr.name = "linear2x2";
    pr.system = conservative_from_production(2, [theta](const VectorXd& u, MatrixXd& p) {
        p.setZero(2, 2);
        p(0, 1) = (1.0 - theta) * u[1];
        p(1, 0) = theta * u[0];
    });
    pr.initial = {0.0, (VectorXd(2) << 1.0 - eps, eps).finished()};
    pr.t_end = 1.0;
    pr.exact = [spec](double t) { return linear2x2_exact(spec, t); };
    pr.steady_state = (VectorXd(2) << 1.0 - theta, theta).finished();
    return pr;
}

VectorXd linear2x2_exact(const LinearSystemSpec& spec, double t) {
    const double theta = spec.theta, eps = spec.epsilon;
    const double e = std::exp(-t);
    return (VectorXd(2) << (1.0 - theta) + (theta - eps) * e, theta + (eps - theta) * e).finished();
}

double v1_component(const VectorXd& u, double theta) { return theta * u[0] - (1.0 - theta) * u[1]; }

PdsSystem general_linear(const GeneralLinearSpec& spec) {
    if (!(spec.a >= 0.0 && spec.b >= 0.0)) throw InvalidProblem("general_linear: a and b must be nonnegative");
    const double a = spec.a, b = spec.b;
    return conservative_from_production(2, [a, b](const VectorXd& u, MatrixXd& p) {
        p.setZero(2, 2);
        p(0, 1) = b * u[1];
        p(1, 0) = a * u[0];
    });
}

LinearRescale rescale_general_linear(const GeneralLinearSpec& spec) {
    const double sum = spec.a + spec.b;
    if (!(sum > 0.0)) throw InvalidProblem("rescale_general_linear: a + b must be positive");
    return {spec.a / sum, sum};
}

double ScalarProblemSpec::steady_state() const { return std::sqrt(1.0 / k); }
double ScalarProblemSpec::u0() const { return 1.1 * std::sqrt(1.0 / k); }
double ScalarProblemSpec::lipschitz() const { return 1.1 * std::sqrt(k); }

Problem scalar_nonlinear(const ScalarProblemSpec& spec) {
    if (!(spec.k > 0.0)) throw InvalidProblem("scalar_nonlinear: k must be positive");
    const double k = spec.k;
    Problem pr;
    pr.name = "scalar";
    pr.system.dim = 1;
    pr.system.conservative = false;
    pr.system.production = [](const VectorXd&, MatrixXd& p) { p.setZero(1, 1); };
    pr.system.destruction = [k](const VectorXd& u, MatrixXd& d) {
        d.resize(1, 1);
        d(0, 0) = k * std::abs(u[0]) * u[0];
    };
    pr.system.rest = [](const VectorXd&, VectorXd& r) { r.setConstant(1, 1.0); };
    pr.initial = {0.0, VectorXd::Constant(1, spec.u0())};
    pr.t_end = spec.t_end();
    // u = a coth(t/a + c) with a = 1/sqrt(k) solves u' = 1 - k u^2 for u > a.
    const double a = spec.steady_state();
    const double c = std::atanh(a / spec.u0());
    pr.exact = [a, c](double t) { return VectorXd::Constant(1, a / std::tanh(t / a + c)); };
    pr.steady_state = VectorXd::Constant(1, a);
    return pr;
}

Problem robertson(const RobertsonSpec& spec) {
    if (!(spec.ic_epsilon > 0.0)) throw InvalidProblem("robertson: ic_epsilon must be positive");
    const double k1 = spec.k1, k2 = spec.k2, k3 = spec.k3;
    Problem pr;
    pr.name = "robertson";
    // Second-order autocatalytic term 2 u2 -> u2 + u3, i.e. rate k2 u2^2.
    pr.system = conservative_from_production(3, [k1, k2, k3](const VectorXd& u, MatrixXd& p) {
        p.setZero(3, 3);
        p(0, 1) = k3 * u[1] * u[2];
        p(1, 0) = k1 * u[0];
        p(2, 1) = k2 * u[1] * u[1];
    });
    const double e = spec.ic_epsilon;
    pr.initial = {0.0, (VectorXd(3) << 1.0, e, e).finished()};
    pr.t_end = spec.t_end;
    return pr;
}

Problem hires(const HiresSpec& s) {
    if (!(s.ic_epsilon > 0.0)) throw InvalidProblem("hires: ic_epsilon must be positive");
    Problem pr;
    pr.name = "hires";
    pr.system = conservative_from_production(9, [s](const VectorXd& u, MatrixXd& p) {
        p.setZero(9, 9);
        // Zero-based: p(i-1, j-1) = p_ij.
        p(1, 0) = s.k1 * u[0];
        p(0, 1) = s.k2 * u[1];
        p(3, 1) = s.k3 * u[1];
        p(3, 2) = s.k1 * u[2];
        p(0, 2) = s.k6 * u[2];
        p(2, 3) = s.k2 * u[3];
        p(5, 3) = s.k4 * u[3];
        p(5, 4) = s.k1 * u[4];
        p(2, 4) = s.k5 * u[4];
        p(4, 5) = s.k2 * u[5];
        p(4, 6) = s.k2 / 2.0 * u[6];
        p(5, 6) = s.kminus / 2.0 * u[6];
        p(8, 6) = s.kstar / 2.0 * u[6];
        p(6, 5) = s.kplus * u[5] * u[7];
        p(6, 7) = s.kplus * u[5] * u[7];
        p(7, 6) = (s.kminus + s.kstar + s.k2) / 2.0 * u[6];
    });
    const double sigma = s.sigma;
    pr.system.rest = [sigma](const VectorXd& u, VectorXd& r) {
        r.setZero(u.size());
        r[0] = sigma;
    };
    const double e = s.ic_epsilon;
    VectorXd u0 = VectorXd::Constant(9, e);
    u0[0] = 1.0;
    u0[7] = 0.0057;
    pr.initial = {0.0, u0};
    pr.t_end = s.t_end;
    return pr;
}

std::vector<double> uniform_time_grid(double t0, double t1, int n) {
    if (!(t1 > t0) || n < 1) throw std::invalid_argument("uniform_time_grid: need t1 > t0 and n >= 1");
    std::vector<double> t(n + 1);
    for (int i = 0; i <= n; ++i) t[i] = t0 + (t1 - t0) * (static_cast<double>(i) / n);
    t[n] = t1;
    return t;
}

std::vector<double> exponential_time_grid(double t0, double t1, int n, double first_fraction) {
    if (!(t0 >= 0.0 && t1 > t0) || n < 1) throw std::invalid_argument("exponential_time_grid: need 0 <= t0 < t1, n >= 1");
    if (!(first_fraction > 0.0 && first_fraction <= 1.0))
        throw std::invalid_argument("exponential_time_grid: first_fraction must lie in (0, 1]");
    if (n == 1) return {t0, t1};
    if (first_fraction * n >= 1.0) return uniform_time_grid(t0, t1, n);
    // Ratio q > 1 with first_fraction * (q^n - 1) / (q - 1) = 1, by bisection on log q.
    auto covered = [&](double q) { return first_fraction * std::expm1(n * std::log(q)) / (q - 1.0); };
    double lo = 1.0 + 1e-15, hi = 2.0;
    while (covered(hi) < 1.0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (covered(mid) < 1.0) lo = mid; else hi = mid;
    }
    const double q = 0.5 * (lo + hi);
    const double span = t1 - t0;
    std::vector<double> t(n + 1);
    t[0] = t0;
    double h = first_fraction * span;
    for (int i = 1; i <= n; ++i) {
        t[i] = t[i - 1] + h;
        h *= q;
    }
    // Rescale so the last point lands exactly on t1.
    const double scale = span / (t[n] - t0);
    for (int i = 1; i < n; ++i) t[i] = t0 + (t[i] - t0) * scale;
    t[n] = t1;
    return t;
}

} // namespace patankar
