#include "assembly.hpp"

#include "patankar/smallsolve.hpp"

#include <algorithm>
#include <cassert>
#include <cfloat>
#include <cmath>

namespace patankar::detail {

void Combined::reset(int dim) {
    p_pos.setZero(dim, dim);
    d_pos.setZero(dim, dim);
    r.setZero(dim);
    if (has_neg) {
        p_neg.setZero(dim, dim);
        d_neg.setZero(dim, dim);
    }
    has_neg = false;
}

void Combined::add(double w, const Evaluation& e, double rest_weight) {
    if (rest_weight != 0.0) r += rest_weight * e.r;
    if (w == 0.0) return;
    if (w > 0.0) {
        p_pos += w * e.p;
        d_pos += w * e.d;
        return;
    }
    const Eigen::Index n = e.p.rows();
    if (!has_neg) {
        p_neg.setZero(n, n);
        d_neg.setZero(n, n);
        has_neg = true;
    }
    p_neg -= w * e.p;
    d_neg -= w * e.d;
}

Eigen::MatrixXd patankar_matrix(double dt, const Combined& c, const Eigen::VectorXd& denom) {
    const Eigen::Index n = denom.size();
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = denom[i] + dt * c.d_pos.row(i).sum();
        if (c.has_neg) a(i, i) += dt * c.p_neg.row(i).sum();
    }
    // Diagonal self-production (p_ii, or d_ii under a negative weight) has no
    // partner term to borrow a Patankar weight from; it enters the right-hand
    // side explicitly instead, see patankar_rhs.
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j) continue;
            a(i, j) = -dt * c.p_pos(i, j);
            if (c.has_neg) a(i, j) -= dt * c.d_neg(i, j);
        }
    }
    return a;
}

Eigen::VectorXd patankar_rhs(const Eigen::VectorXd& base, double dt, const Combined& c) {
    Eigen::VectorXd x = base + dt * c.r;
    x += dt * c.p_pos.diagonal();
    if (c.has_neg) x += dt * c.d_neg.diagonal();
    return x;
}

namespace {

// Exact solutions are positive; an entry in [0, DBL_MIN) is underflow and is
// lifted to the smallest normal number. Negative entries are left visible.
Eigen::VectorXd lift_underflow(Eigen::VectorXd x) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] >= 0.0 && x[i] < DBL_MIN) x[i] = DBL_MIN;
    return x;
}

} // namespace

Eigen::VectorXd patankar_solve(const Eigen::VectorXd& base, double dt, const Combined& c,
                               const Eigen::VectorXd& denom_in, bool conservative) {
    // Stage values can underflow at vanishing initial data; keep the
    // denominators normal.
    const Eigen::VectorXd denom = denom_in.cwiseMax(DBL_MIN);
    Eigen::MatrixXd a = patankar_matrix(dt, c, denom);
    Eigen::VectorXd z = patankar_rhs(base, dt, c);
#ifdef PATANKAR_DEBUG_CHECKS
    assert(!conservative || m_matrix_certificate(a));
#endif
    if (conservative) {
        Eigen::MatrixXd f = a;
        Eigen::VectorXd y = z;
        if (column_sum_solve_inplace(f, y, denom)) return lift_underflow(denom.cwiseProduct(y));
    }
    lu_solve_inplace(a, z);
    return lift_underflow(denom.cwiseProduct(z));
}

Eigen::VectorXd power_mean(const Eigen::VectorXd& y2, const Eigen::VectorXd& y1, double a) {
    if (a == 1.0) return y2;
    if (a == 0.0) return y1;
    Eigen::VectorXd out(y2.size());
    for (Eigen::Index i = 0; i < y2.size(); ++i) {
        const double l2 = std::log(std::max(y2[i], DBL_MIN));
        const double l1 = std::log(std::max(y1[i], DBL_MIN));
        out[i] = std::clamp(std::exp(a * l2 + (1.0 - a) * l1), DBL_MIN, DBL_MAX);
    }
    return out;
}

} // namespace patankar::detail
