#include "patankar/tableau.hpp"

#include "patankar/errors.hpp"
#include "patankar/smallsolve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace patankar {

namespace {

ButcherTableau make(std::string name, std::initializer_list<std::initializer_list<double>> a,
                    std::initializer_list<double> b) {
    ButcherTableau t;
    t.name = std::move(name);
    const int s = static_cast<int>(b.size());
    t.A.setZero(s, s);
    int i = 0;
    for (const auto& row : a) {
        int j = 0;
        for (double v : row) t.A(i, j++) = v;
        ++i;
    }
    t.b.resize(s);
    int k = 0;
    for (double v : b) t.b[k++] = v;
    t.c = t.A.rowwise().sum();
    return t;
}

std::vector<ButcherTableau> build_registry() {
    const double s6 = std::sqrt(6.0);
    const double s3 = std::sqrt(3.0);
    const double s15 = std::sqrt(15.0);
    const double s2 = std::sqrt(2.0);
    std::vector<ButcherTableau> r;

    r.push_back(make("implicit_euler", {{1.0}}, {1.0}));
    r.push_back(make("midpoint", {{0.5}}, {1.0}));
    r.push_back(make("trapezoid", {{0.0, 0.0}, {0.5, 0.5}}, {0.5, 0.5}));
    {
        const double g = 2.0 - s2;
        const double d = g / 2.0;
        const double w = s2 / 4.0;
        r.push_back(make("trbdf2", {{0, 0, 0}, {d, d, 0}, {w, w, d}}, {w, w, d}));
    }
    r.push_back(make("radau_ia3", {{0.25, -0.25}, {0.25, 5.0 / 12.0}}, {0.25, 0.75}));
    r.push_back(make("radau_ia5",
                     {{1.0 / 9.0, (-1.0 - s6) / 18.0, (-1.0 + s6) / 18.0},
                      {1.0 / 9.0, (88.0 + 7.0 * s6) / 360.0, (88.0 - 43.0 * s6) / 360.0},
                      {1.0 / 9.0, (88.0 + 43.0 * s6) / 360.0, (88.0 - 7.0 * s6) / 360.0}},
                     {1.0 / 9.0, (16.0 + s6) / 36.0, (16.0 - s6) / 36.0}));
    r.push_back(make("radau_iia3", {{5.0 / 12.0, -1.0 / 12.0}, {0.75, 0.25}}, {0.75, 0.25}));
    r.push_back(make("radau_iia5",
                     {{(88.0 - 7.0 * s6) / 360.0, (296.0 - 169.0 * s6) / 1800.0, (-2.0 + 3.0 * s6) / 225.0},
                      {(296.0 + 169.0 * s6) / 1800.0, (88.0 + 7.0 * s6) / 360.0, (-2.0 - 3.0 * s6) / 225.0},
                      {(16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0}},
                     {(16.0 - s6) / 36.0, (16.0 + s6) / 36.0, 1.0 / 9.0}));
    r.push_back(make("lobatto_iiia2", {{0.0, 0.0}, {0.5, 0.5}}, {0.5, 0.5}));
    r.push_back(make("lobatto_iiia4",
                     {{0, 0, 0}, {5.0 / 24.0, 1.0 / 3.0, -1.0 / 24.0}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}},
                     {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}));
    r.push_back(make("lobatto_iiib2", {{0.5, 0.0}, {0.5, 0.0}}, {0.5, 0.5}));
    r.push_back(make("lobatto_iiib4",
                     {{1.0 / 6.0, -1.0 / 6.0, 0}, {1.0 / 6.0, 1.0 / 3.0, 0}, {1.0 / 6.0, 5.0 / 6.0, 0}},
                     {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}));
    r.push_back(make("lobatto_iiic2", {{0.5, -0.5}, {0.5, 0.5}}, {0.5, 0.5}));
    r.push_back(make("lobatto_iiic4",
                     {{1.0 / 6.0, -1.0 / 3.0, 1.0 / 6.0},
                      {1.0 / 6.0, 5.0 / 12.0, -1.0 / 12.0},
                      {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}},
                     {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}));
    r.push_back(make("gauss_legendre4", {{0.25, 0.25 - s3 / 6.0}, {0.25 + s3 / 6.0, 0.25}}, {0.5, 0.5}));
    r.push_back(make("gauss_legendre6",
                     {{5.0 / 36.0, 2.0 / 9.0 - s15 / 15.0, 5.0 / 36.0 - s15 / 30.0},
                      {5.0 / 36.0 + s15 / 24.0, 2.0 / 9.0, 5.0 / 36.0 - s15 / 24.0},
                      {5.0 / 36.0 + s15 / 30.0, 2.0 / 9.0 + s15 / 15.0, 5.0 / 36.0}},
                     {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0}));
    r.push_back(make("qin_zhang", {{0.25, 0.0}, {0.5, 0.25}}, {0.5, 0.5}));
    r.push_back(make("kraaijevanger_spijker", {{0.5, 0.0}, {-0.5, 2.0}}, {-0.5, 1.5}));
    return r;
}

} // namespace

const std::vector<ButcherTableau>& tableau_registry() {
    static const std::vector<ButcherTableau> registry = build_registry();
    return registry;
}

const ButcherTableau& find_tableau(const std::string& name) {
    for (const auto& t : tableau_registry())
        if (t.name == name) return t;
    std::string valid;
    for (const auto& t : tableau_registry()) valid += (valid.empty() ? "" : ", ") + t.name;
    throw std::out_of_range("unknown tableau '" + name + "'; valid names: " + valid);
}

double rk_stability_value(const ButcherTableau& tab, double z) {
    const int s = tab.stages();
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(s, s) - z * tab.A;
    const Eigen::VectorXd k = lu_solve(m, Eigen::VectorXd::Ones(s));
    return 1.0 + z * tab.b.dot(k);
}

namespace {

// R(-dt), with poles reported as NaN.
double r_minus(const ButcherTableau& tab, double dt) {
    try {
        return rk_stability_value(tab, -dt);
    } catch (const SingularMatrix&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

// Golden-section minimisation of R(-dt) on [a, b].
double golden_min(const ButcherTableau& tab, double a, double b) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = r_minus(tab, x1), f2 = r_minus(tab, x2);
    while (b - a > 1e-12 * b) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = r_minus(tab, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = r_minus(tab, x2);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double rk_positivity_threshold(const ButcherTableau& tab, double dt_max) {
    if (!(dt_max > 0.0)) throw std::invalid_argument("rk_positivity_threshold: dt_max must be positive");
    constexpr int samples = 1024;
    const double lo = dt_max * std::ldexp(1.0, -30);
    std::vector<double> dts(samples), vals(samples);
    for (int i = 0; i < samples; ++i) {
        dts[i] = lo * std::pow(dt_max / lo, static_cast<double>(i) / (samples - 1));
        vals[i] = r_minus(tab, dts[i]);
    }
    for (int i = 0; i < samples; ++i) {
        const bool bad = std::isnan(vals[i]) || vals[i] <= 0.0;
        if (bad) {
            if (i == 0) return dts[0];
            double a = dts[i - 1], b = dts[i];
            while (b - a > 1e-9 * b) {
                const double mid = 0.5 * (a + b);
                const double v = r_minus(tab, mid);
                if (std::isnan(v) || v <= 0.0) b = mid; else a = mid;
            }
            return b;
        }
        // A local minimum that touches zero is a double root; R does not
        // change sign there but still vanishes.
        if (i > 0 && i + 1 < samples && vals[i] < vals[i - 1] && vals[i] <= vals[i + 1]) {
            const double x = golden_min(tab, dts[i - 1], dts[i + 1]);
            const double v = r_minus(tab, x);
            if (std::isnan(v) || v <= 1e-12) return x;
        }
    }
    return std::numeric_limits<double>::infinity();
}

State rk_linear_step(const ButcherTableau& tab, const PdsSystem& sys, const State& s, double dt) {
    const int n = sys.dim;
    const int st = tab.stages();
    Eigen::MatrixXd lin(n, n);
    for (int j = 0; j < n; ++j) {
        State e{s.t, Eigen::VectorXd::Unit(n, j)};
        lin.col(j) = evaluate_rhs(sys, e);
    }
    // Stage slopes k_i = L (u + dt sum_j a_ij k_j).
    Eigen::MatrixXd big = Eigen::MatrixXd::Identity(n * st, n * st);
    Eigen::VectorXd rhs(n * st);
    const Eigen::VectorXd lu = lin * s.u;
    for (int i = 0; i < st; ++i) {
        rhs.segment(i * n, n) = lu;
        for (int j = 0; j < st; ++j) big.block(i * n, j * n, n, n) -= dt * tab.A(i, j) * lin;
    }
    const Eigen::VectorXd k = lu_solve(big, rhs);
    Eigen::VectorXd u = s.u;
    for (int i = 0; i < st; ++i) u += dt * tab.b[i] * k.segment(i * n, n);
    return {s.t + dt, u};
}

} // namespace patankar
