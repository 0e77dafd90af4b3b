#include "patankar/schemes.hpp"

#include "assembly.hpp"
#include "patankar/errors.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace patankar {

using detail::Combined;
using detail::Evaluation;
using detail::patankar_solve;
using detail::power_mean;
using Eigen::VectorXd;

namespace {

void check_step_input(const PdsSystem& sys, const State& s, double dt, const char* where) {
    if (s.u.size() != sys.dim) throw StructuralError(std::string(where) + ": state/system dimension mismatch");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument(std::string(where) + ": dt must be positive");
    require_positive(s.u, where);
}

// Root of -18a^3 + 27a^2 - 12a + 2 in (2/3, 1), where 3a(1-a) meets (3a-2)/(6a-3).
double mprk43_alpha0() {
    double lo = 2.0 / 3.0, hi = 1.0;
    auto f = [](double a) { return -18.0 * a * a * a + 27.0 * a * a - 12.0 * a + 2.0; };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((f(lo) > 0) == (f(mid) > 0)) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::string family_name(Family f) {
    switch (f) {
    case Family::MPE: return "mpe";
    case Family::MPRK22: return "mprk22";
    case Family::MPRK43: return "mprk43";
    case Family::MPRKSO22: return "mprkso22";
    case Family::MPRKSO43: return "mprkso43";
    case Family::MPDEC: return "mpdec";
    case Family::MPRK32: return "mprk32";
    case Family::SIRK2: return "sirk2";
    case Family::SIRK3: return "sirk3";
    }
    return "unknown";
}

SchemeSpec SchemeSpec::mpe() { return SchemeSpec{}; }

SchemeSpec SchemeSpec::mprk22(double alpha) {
    if (!(alpha >= 0.5) || !std::isfinite(alpha))
        throw InvalidScheme("mprk22: alpha must lie in [1/2, inf), got " + std::to_string(alpha));
    SchemeSpec s;
    s.family = Family::MPRK22;
    s.alpha = alpha;
    return s;
}

SchemeSpec SchemeSpec::mprk43(double alpha, double beta) {
    const Mprk43Coefficients c = build_mprk43_tableau(alpha, beta);
    SchemeSpec s;
    s.family = Family::MPRK43;
    s.alpha = alpha;
    s.beta = beta;
    s.positive_region = c.positive_region;
    return s;
}

SchemeSpec SchemeSpec::mprkso22(double alpha, double beta) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InvalidScheme("mprkso22: alpha must lie in [0, 1], got " + std::to_string(alpha));
    if (!(beta > 0.0) || !std::isfinite(beta))
        throw InvalidScheme("mprkso22: beta must be positive, got " + std::to_string(beta));
    if (alpha * beta == 1.0) throw GammaSingular("mprkso22: alpha*beta == 1 makes gamma singular");
    SchemeSpec s;
    s.family = Family::MPRKSO22;
    s.alpha = alpha;
    s.beta = beta;
    s.positive_region = alpha * beta + 1.0 / (2.0 * beta) <= 1.0;
    return s;
}

SchemeSpec SchemeSpec::mprkso43() {
    SchemeSpec s;
    s.family = Family::MPRKSO43;
    return s;
}

SchemeSpec SchemeSpec::mpdec(int order, NodeFamily nodes) {
    if (order < 1 || order > 32) throw InvalidScheme("mpdec: order must lie in [1, 32], got " + std::to_string(order));
    SchemeSpec s;
    s.family = Family::MPDEC;
    s.order = order;
    s.nodes = nodes;
    return s;
}

SchemeSpec SchemeSpec::mprk32() {
    SchemeSpec s;
    s.family = Family::MPRK32;
    return s;
}

SchemeSpec SchemeSpec::sirk2() {
    SchemeSpec s;
    s.family = Family::SIRK2;
    return s;
}

SchemeSpec SchemeSpec::sirk3() {
    SchemeSpec s;
    s.family = Family::SIRK3;
    return s;
}

Mprk43Coefficients build_mprk43_tableau(double alpha, double beta) {
    if (alpha == 0.0 || beta == 0.0 || alpha * (2.0 - 3.0 * alpha) == 0.0 || beta == alpha)
        throw TableauSingular("mprk43: tableau singular for alpha=" + std::to_string(alpha) +
                              ", beta=" + std::to_string(beta));
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw InvalidScheme("mprk43: non-finite parameter");
    Mprk43Coefficients c;
    const double den = alpha * (2.0 - 3.0 * alpha);
    c.a21 = alpha;
    c.a31 = (3.0 * alpha * beta * (1.0 - alpha) - beta * beta) / den;
    c.a32 = beta * (beta - alpha) / den;
    c.b1 = 1.0 + (2.0 - 3.0 * (alpha + beta)) / (6.0 * alpha * beta);
    c.b2 = (3.0 * beta - 2.0) / (6.0 * alpha * (beta - alpha));
    c.b3 = (2.0 - 3.0 * alpha) / (6.0 * beta * (beta - alpha));
    c.p_exp = 3.0 * c.a21 * (c.a31 + c.a32) * c.b3;
    c.q_exp = c.a21;
    c.beta2 = 1.0 / (2.0 * c.a21);
    c.beta1 = 1.0 - c.beta2;

    static const double alpha0 = mprk43_alpha0();
    const double two3 = 2.0 / 3.0;
    if (alpha >= 0.5 && alpha < two3)
        c.positive_region = two3 <= beta && beta <= 3.0 * alpha * (1.0 - alpha);
    else if (alpha >= two3 && alpha < alpha0)
        c.positive_region = 3.0 * alpha * (1.0 - alpha) <= beta && beta <= two3;
    else if (alpha >= alpha0)
        c.positive_region = (3.0 * alpha - 2.0) / (6.0 * alpha - 3.0) <= beta && beta <= two3;
    return c;
}

const Mprkso43Coefficients& mprkso43_coefficients() {
    static const Mprkso43Coefficients c{
        .n1 = 2.569046025732011E-01,
        .n2 = 7.430953974267989E-01,
        .a10 = 1.0,
        .a20 = 9.2600312554031827E-01,
        .a21 = 7.3996874459681783E-02,
        .a30 = 7.0439040373427619E-01,
        .a31 = 2.0662904223744017E-10,
        .a32 = 2.9560959605909481E-01,
        .b10 = 4.7620819268131703E-01,
        .b20 = 7.7545442722396801E-02,
        .b21 = 5.9197500149679749E-01,
        .b30 = 2.0044747790361456E-01,
        .b31 = 6.8214380786704851E-10,
        .b32 = 5.9121918658514827E-01,
        .eta1 = 3.777285888379173E-02,
        .eta2 = 1.0 / 3.0,
        .eta3 = 1.868649805549811E-01,
        .eta4 = 2.224876040351123,
        .z = 6.288938077828750E-01,
        .s = 5.721964308755304,
    };
    return c;
}

State mpe_step(const PdsSystem& sys, const State& s, double dt) {
    check_step_input(sys, s, dt, "mpe_step");
    Evaluation e;
    e.at(sys, s.u);
    Combined c;
    c.reset(sys.dim);
    c.add(1.0, e);
    return {s.t + dt, patankar_solve(s.u, dt, c, s.u, sys.conservative)};
}

State mprk22_step(const PdsSystem& sys, const State& s, double dt, double alpha) {
    check_step_input(sys, s, dt, "mprk22_step");
    if (!(alpha >= 0.5)) throw InvalidScheme("mprk22_step: alpha must be >= 1/2");
    const VectorXd& y1 = s.u;
    Evaluation e1, e2;
    Combined c;
    e1.at(sys, y1);
    c.reset(sys.dim);
    c.add(alpha, e1);
    const VectorXd y2 = patankar_solve(y1, dt, c, y1, sys.conservative);

    e2.at(sys, y2);
    c.reset(sys.dim);
    c.add((2.0 * alpha - 1.0) / (2.0 * alpha), e1);
    c.add(1.0 / (2.0 * alpha), e2);
    return {s.t + dt, patankar_solve(y1, dt, c, power_mean(y2, y1, 1.0 / alpha), sys.conservative)};
}

State mprk43_step(const PdsSystem& sys, const State& s, double dt, double alpha, double beta) {
    return mprk43_step(sys, s, dt, build_mprk43_tableau(alpha, beta));
}

State mprk43_step(const PdsSystem& sys, const State& s, double dt, const Mprk43Coefficients& k) {
    check_step_input(sys, s, dt, "mprk43_step");
    const VectorXd& y1 = s.u;
    Evaluation e1, e2, e3;
    Combined c;
    e1.at(sys, y1);
    c.reset(sys.dim);
    c.add(k.a21, e1);
    const VectorXd y2 = patankar_solve(y1, dt, c, y1, sys.conservative);

    e2.at(sys, y2);
    c.reset(sys.dim);
    c.add(k.a31, e1);
    c.add(k.a32, e2);
    const VectorXd y3 = patankar_solve(y1, dt, c, power_mean(y2, y1, 1.0 / k.p_exp), sys.conservative);

    // The sigma solve carries the rest terms as well so that PDRS steady
    // states stay fixed points.
    c.reset(sys.dim);
    c.add(k.beta1, e1);
    c.add(k.beta2, e2);
    const VectorXd sigma = patankar_solve(y1, dt, c, power_mean(y2, y1, 1.0 / k.q_exp), sys.conservative);

    e3.at(sys, y3);
    c.reset(sys.dim);
    c.add(k.b1, e1);
    c.add(k.b2, e2);
    c.add(k.b3, e3);
    return {s.t + dt, patankar_solve(y1, dt, c, sigma, sys.conservative)};
}

State mprkso22_step(const PdsSystem& sys, const State& s, double dt, double alpha, double beta) {
    check_step_input(sys, s, dt, "mprkso22_step");
    if (!(beta > 0.0)) throw InvalidScheme("mprkso22_step: beta must be positive");
    if (alpha * beta == 1.0) throw GammaSingular("mprkso22_step: alpha*beta == 1");
    const double gamma = (1.0 - alpha * beta + alpha * beta * beta) / (beta * (1.0 - alpha * beta));
    const VectorXd& y1 = s.u;
    Evaluation e1, e2;
    Combined c;
    e1.at(sys, y1);
    c.reset(sys.dim);
    c.add(beta, e1);
    const VectorXd y2 = patankar_solve(y1, dt, c, y1, sys.conservative);

    e2.at(sys, y2);
    c.reset(sys.dim);
    c.add(1.0 - 1.0 / (2.0 * beta) - alpha * beta, e1);
    c.add(1.0 / (2.0 * beta), e2);
    const VectorXd base = (1.0 - alpha) * y1 + alpha * y2;
    return {s.t + dt, patankar_solve(base, dt, c, power_mean(y2, y1, gamma), sys.conservative)};
}

State mprkso43_step(const PdsSystem& sys, const State& s, double dt) {
    check_step_input(sys, s, dt, "mprkso43_step");
    const Mprkso43Coefficients& k = mprkso43_coefficients();
    const VectorXd& y1 = s.u;
    Evaluation e1, e2, e3;
    Combined c;

    e1.at(sys, y1);
    c.reset(sys.dim);
    c.add(k.b10, e1);
    const VectorXd y2 = patankar_solve(y1, dt, c, y1, sys.conservative);

    e2.at(sys, y2);
    const VectorXd rho = k.n1 * y2 + k.n2 * power_mean(y2, y1, 2.0);
    c.reset(sys.dim);
    c.add(k.b20, e1);
    c.add(k.b21, e2);
    const VectorXd y3 = patankar_solve(k.a20 * y1 + k.a21 * y2, dt, c, rho, sys.conservative);

    // a~ scales like (eta1 + eta2) * u, so its rest terms carry that factor.
    const VectorXd mu = power_mean(y2, y1, k.s);
    const double scale = k.eta1 + k.eta2;
    c.reset(sys.dim);
    c.add(k.eta3, e1, k.eta3 * scale);
    c.add(k.eta4, e2, k.eta4 * scale);
    const VectorXd atilde = patankar_solve(k.eta1 * y1 + k.eta2 * y2, dt, c, mu, sys.conservative);
    // sigma pairs y1 with the second stage y3; pairing it with the first
    // stage y2 leaves sigma first order accurate and the scheme first order.
    const VectorXd sigma = atilde + k.z * (y1.array() * y3.array() / rho.array()).matrix();

    e3.at(sys, y3);
    c.reset(sys.dim);
    c.add(k.b30, e1);
    c.add(k.b31, e2);
    c.add(k.b32, e3);
    const VectorXd base = k.a30 * y1 + k.a31 * y2 + k.a32 * y3;
    return {s.t + dt, patankar_solve(base, dt, c, sigma, sys.conservative)};
}

State mpdec_step(const PdsSystem& sys, const State& s, double dt, int order, NodeFamily nodes) {
    if (order < 1) throw InvalidScheme("mpdec_step: order must be >= 1");
    // One trapezoid correction from the initial state is the Patankar-Euler
    // system itself; route it there so the two agree bit for bit.
    if (order == 1) return mpe_step(sys, s, dt);
    return mpdec_step(sys, s, dt, dec_weights(order, nodes), dec_corrections(order));
}

State mpdec_step(const PdsSystem& sys, const State& s, double dt, const DecWeights& w, int corrections) {
    check_step_input(sys, s, dt, "mpdec_step");
    const int m_count = static_cast<int>(w.nodes.size()) - 1;
    std::vector<VectorXd> prev(m_count + 1, s.u), next(m_count + 1, s.u);
    std::vector<Evaluation> evals(m_count + 1);
    Combined c;
    evals[0].at(sys, s.u);
    for (int k = 1; k <= corrections; ++k) {
        for (int r = 1; r <= m_count; ++r) {
            if (k == 1) evals[r] = evals[0];
            else evals[r].at(sys, prev[r]);
        }
        for (int m = 1; m <= m_count; ++m) {
            c.reset(sys.dim);
            for (int r = 0; r <= m_count; ++r) c.add(w.theta(m, r), evals[r]);
            next[m] = patankar_solve(s.u, dt, c, prev[m], sys.conservative);
        }
        std::swap(prev, next);
    }
    return {s.t + dt, prev[m_count]};
}

State mprk32_step(const PdsSystem& sys, const State& s, double dt) {
    check_step_input(sys, s, dt, "mprk32_step");
    const VectorXd& y1 = s.u;
    Evaluation e1, e2, e3;
    Combined c;
    e1.at(sys, y1);
    c.reset(sys.dim);
    c.add(1.0, e1);
    const VectorXd y2 = patankar_solve(y1, dt, c, y1, sys.conservative);

    e2.at(sys, y2);
    c.reset(sys.dim);
    c.add(0.25, e1);
    c.add(0.25, e2);
    const VectorXd y3 = patankar_solve(y1, dt, c, y2, sys.conservative);

    e3.at(sys, y3);
    c.reset(sys.dim);
    c.add(1.0 / 6.0, e1);
    c.add(1.0 / 6.0, e2);
    c.add(4.0 / 6.0, e3);
    return {s.t + dt, patankar_solve(y1, dt, c, y2, sys.conservative)};
}

namespace {

// Patankar-Euler update (y + dt r + dt sum_j p_ij) / (1 + dt sum_j d_ij / y_i).
VectorXd patankar_euler(const PdsSystem& sys, const VectorXd& y, double dt) {
    Evaluation e;
    e.at(sys, y);
    VectorXd out(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
        out[i] = (y[i] + dt * e.r[i] + dt * e.p.row(i).sum()) / (1.0 + dt * e.d.row(i).sum() / y[i]);
    return out;
}

VectorXd sirk_correction(const PdsSystem& sys, const VectorXd& y, double dt) {
    Evaluation e;
    e.at(sys, y);
    VectorXd out(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double dd = e.d.row(i).sum() / y[i];
        const double prod = e.r[i] + e.p.row(i).sum();
        out[i] = (y[i] + dt * dt * prod * dd) / (1.0 + (dt * dd) * (dt * dd));
    }
    return out;
}

} // namespace

State sirk2_step(const PdsSystem& sys, const State& s, double dt) {
    check_step_input(sys, s, dt, "sirk2_step");
    const VectorXd y2 = patankar_euler(sys, s.u, dt);
    const VectorXd y3 = 0.5 * s.u + 0.5 * patankar_euler(sys, y2, dt);
    return {s.t + dt, sirk_correction(sys, y3, dt)};
}

State sirk3_step(const PdsSystem& sys, const State& s, double dt) {
    check_step_input(sys, s, dt, "sirk3_step");
    const VectorXd y2 = patankar_euler(sys, s.u, dt);
    const VectorXd y3 = 0.75 * s.u + 0.25 * patankar_euler(sys, y2, dt);
    const VectorXd y4 = s.u / 3.0 + (2.0 / 3.0) * patankar_euler(sys, y3, dt);
    return {s.t + dt, sirk_correction(sys, y4, dt)};
}

State step(const SchemeSpec& spec, const PdsSystem& sys, const State& s, double dt) {
    switch (spec.family) {
    case Family::MPE: return mpe_step(sys, s, dt);
    case Family::MPRK22: return mprk22_step(sys, s, dt, spec.alpha);
    case Family::MPRK43: return mprk43_step(sys, s, dt, spec.alpha, spec.beta);
    case Family::MPRKSO22: return mprkso22_step(sys, s, dt, spec.alpha, spec.beta);
    case Family::MPRKSO43: return mprkso43_step(sys, s, dt);
    case Family::MPDEC: return mpdec_step(sys, s, dt, spec.order, spec.nodes);
    case Family::MPRK32: return mprk32_step(sys, s, dt);
    case Family::SIRK2: return sirk2_step(sys, s, dt);
    case Family::SIRK3: return sirk3_step(sys, s, dt);
    }
    throw InvalidScheme("step: unknown family");
}

std::vector<State> integrate(const SchemeSpec& spec, const PdsSystem& sys, const State& s0,
                             const std::vector<double>& times) {
    std::vector<State> out;
    out.reserve(times.size());
    out.push_back(s0);
    State s = s0;
    for (std::size_t n = 1; n < times.size(); ++n) {
        s = step(spec, sys, s, times[n] - times[n - 1]);
        s.t = times[n];
        out.push_back(s);
    }
    return out;
}

} // namespace patankar
