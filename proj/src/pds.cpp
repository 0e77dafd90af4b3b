#include "patankar/pds.hpp"

#include "patankar/errors.hpp"

#include <cmath>
#include <string>

namespace patankar {

namespace {

void check_matrix(const Eigen::MatrixXd& m, int dim, const char* what) {
    if (m.rows() != dim || m.cols() != dim)
        throw StructuralError(std::string(what) + " callback returned " + std::to_string(m.rows()) +
                              "x" + std::to_string(m.cols()) + ", expected " +
                              std::to_string(dim) + "x" + std::to_string(dim));
}

} // namespace

Eigen::MatrixXd PdsSystem::eval_production(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(dim, dim);
    production(u, p);
    check_matrix(p, dim, "production");
    return p;
}

Eigen::MatrixXd PdsSystem::eval_destruction(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(dim, dim);
    destruction(u, d);
    check_matrix(d, dim, "destruction");
    return d;
}

Eigen::VectorXd PdsSystem::eval_rest(const Eigen::VectorXd& u) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(dim);
    if (rest) {
        rest(u, r);
        if (r.size() != dim)
            throw StructuralError("rest callback returned length " + std::to_string(r.size()) +
                                  ", expected " + std::to_string(dim));
    }
    return r;
}

void PdsSystem::evaluate(const Eigen::VectorXd& u, Eigen::MatrixXd& p, Eigen::MatrixXd& d,
                         Eigen::VectorXd& r) const {
    if (u.size() != dim)
        throw StructuralError("state has length " + std::to_string(u.size()) + ", system dim is " +
                              std::to_string(dim));
    p.setZero(dim, dim);
    d.setZero(dim, dim);
    r.setZero(dim);
    production(u, p);
    destruction(u, d);
    check_matrix(p, dim, "production");
    check_matrix(d, dim, "destruction");
    if (rest) {
        rest(u, r);
        if (r.size() != dim) throw StructuralError("rest callback returned wrong length");
    }
}

Eigen::VectorXd evaluate_rhs(const PdsSystem& sys, const State& s) {
    Eigen::MatrixXd p, d;
    Eigen::VectorXd r;
    sys.evaluate(s.u, p, d, r);
    return r + p.rowwise().sum() - d.rowwise().sum();
}

bool check_conservative(const PdsSystem& sys, const std::vector<State>& samples, double tol) {
    Eigen::MatrixXd p, d;
    Eigen::VectorXd r;
    for (const State& s : samples) {
        sys.evaluate(s.u, p, d, r);
        if ((p - d.transpose()).cwiseAbs().maxCoeff() > tol) return false;
    }
    return true;
}

double total_mass(const State& s) { return s.u.sum(); }

void require_positive(const Eigen::VectorXd& u, const char* where) {
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        if (!(u[i] > 0.0) || !std::isfinite(u[i]))
            throw NonPositiveInput(std::string(where) + ": component " + std::to_string(i) +
                                   " is not strictly positive");
    }
}

} // namespace patankar
