#pragma once

#include "patankar/pds.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace patankar {

enum class Family { MPE, MPRK22, MPRK43, MPRKSO22, MPRKSO43, MPDEC, MPRK32, SIRK2, SIRK3 };

enum class NodeFamily { Equispaced, GaussLobatto };

/**
 * @brief Selects one integrator family plus its parameters.
 *
 * Build through the named constructors, which validate the parameters and
 * throw InvalidScheme (or TableauSingular / GammaSingular) on bad input.
 */
struct SchemeSpec {
    Family family = Family::MPE;
    double alpha = 0.0;
    double beta = 0.0;
    int order = 1;
    NodeFamily nodes = NodeFamily::GaussLobatto;
    /// MPRKSO22: alpha*beta + 1/(2 beta) <= 1. MPRK43: all tableau entries
    /// nonnegative. Informational only, never enforced.
    bool positive_region = true;

    static SchemeSpec mpe();
    static SchemeSpec mprk22(double alpha);
    static SchemeSpec mprk43(double alpha, double beta);
    static SchemeSpec mprkso22(double alpha, double beta);
    static SchemeSpec mprkso43();
    static SchemeSpec mpdec(int order, NodeFamily nodes);
    static SchemeSpec mprk32();
    static SchemeSpec sirk2();
    static SchemeSpec sirk3();

    /// Families other than SI-RK conserve mass on conservative systems.
    bool is_conservative() const { return family != Family::SIRK2 && family != Family::SIRK3; }

    friend bool operator==(const SchemeSpec&, const SchemeSpec&) = default;
};

struct Mprk43Coefficients {
    double a21 = 0, a31 = 0, a32 = 0;
    double b1 = 0, b2 = 0, b3 = 0;
    double p_exp = 0, q_exp = 0;
    double beta1 = 0, beta2 = 0;
    bool positive_region = false;
};

Mprk43Coefficients build_mprk43_tableau(double alpha, double beta);

struct Mprkso43Coefficients {
    double n1, n2;
    double a10, a20, a21, a30, a31, a32;
    double b10, b20, b21, b30, b31, b32;
    double eta1, eta2, eta3, eta4;
    double z, s;
};

/// Fixed optimal SSP coefficient set for MPRKSO(4,3).
const Mprkso43Coefficients& mprkso43_coefficients();

struct DecWeights {
    std::vector<double> nodes;
    /// theta(m, r) = integral from 0 to nodes[m] of the r-th Lagrange basis.
    Eigen::MatrixXd theta;
};

DecWeights compute_dec_weights(const std::vector<double>& nodes);
std::vector<double> gauss_lobatto_nodes(int m_plus_1);
std::vector<double> equispaced_nodes(int m_plus_1);

/// Subinterval count M and correction count K for a given order. Order 1 is
/// run with M = 1, K = 1, which reduces to MPE.
int dec_subintervals(int order);
int dec_corrections(int order);

/// Weights for an mPDeC order, computed once and shared across threads.
const DecWeights& dec_weights(int order, NodeFamily nodes);

State mpe_step(const PdsSystem& sys, const State& s, double dt);
State mprk22_step(const PdsSystem& sys, const State& s, double dt, double alpha);
State mprk43_step(const PdsSystem& sys, const State& s, double dt, double alpha, double beta);
State mprk43_step(const PdsSystem& sys, const State& s, double dt, const Mprk43Coefficients& c);
State mprkso22_step(const PdsSystem& sys, const State& s, double dt, double alpha, double beta);
State mprkso43_step(const PdsSystem& sys, const State& s, double dt);
State mpdec_step(const PdsSystem& sys, const State& s, double dt, int order, NodeFamily nodes);
State mpdec_step(const PdsSystem& sys, const State& s, double dt, const DecWeights& w, int corrections);
State mprk32_step(const PdsSystem& sys, const State& s, double dt);
State sirk2_step(const PdsSystem& sys, const State& s, double dt);
State sirk3_step(const PdsSystem& sys, const State& s, double dt);

State step(const SchemeSpec& spec, const PdsSystem& sys, const State& s, double dt);

/// Advances through the given time points (times[0] must equal s.t) and
/// returns every state including the initial one.
std::vector<State> integrate(const SchemeSpec& spec, const PdsSystem& sys, const State& s0,
                             const std::vector<double>& times);

std::string family_name(Family f);

} // namespace patankar
