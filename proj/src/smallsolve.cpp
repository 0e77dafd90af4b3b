#include "patankar/smallsolve.hpp"

#include "patankar/errors.hpp"

#include <cmath>
#include <utility>

namespace patankar {

void lu_solve_inplace(Eigen::MatrixXd& a, Eigen::VectorXd& b) {
    const Eigen::Index n = a.rows();
    if (n < 1 || a.cols() != n || b.size() != n)
        throw StructuralError("lu_solve: shape mismatch");

    // Row then column equilibration: Patankar matrices at vanishing initial
    // data carry entries hundreds of orders of magnitude apart.
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = a.row(i).cwiseAbs().maxCoeff();
        if (!(m > 0.0) || !std::isfinite(m)) throw SingularMatrix("lu_solve: zero or non-finite row");
        a.row(i) /= m;
        b[i] /= m;
    }
    Eigen::VectorXd col_scale(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double m = a.col(j).cwiseAbs().maxCoeff();
        if (!(m > 0.0)) throw SingularMatrix("lu_solve: zero column");
        a.col(j) /= m;
        col_scale[j] = m;
    }
    const double scale = a.cwiseAbs().rowwise().sum().maxCoeff();
    const double tiny = 1e-30 * scale;

    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index piv = k;
        double best = std::abs(a(k, k));
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (std::abs(a(i, k)) > best) {
                best = std::abs(a(i, k));
                piv = i;
            }
        }
        if (!(best > tiny)) throw SingularMatrix("lu_solve: pivot below working precision");
        if (piv != k) {
            a.row(k).swap(a.row(piv));
            std::swap(b[k], b[piv]);
        }
        const double inv = 1.0 / a(k, k);
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const double l = a(i, k) * inv;
            if (l == 0.0) continue;
            for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
            b[i] -= l * b[k];
        }
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double acc = b[i];
        for (Eigen::Index j = i + 1; j < n; ++j) acc -= a(i, j) * b[j];
        b[i] = acc / a(i, i);
    }
    b.array() /= col_scale.array();
}

Eigen::VectorXd lu_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    Eigen::MatrixXd lu = a;
    Eigen::VectorXd x = b;
    lu_solve_inplace(lu, x);
    return x;
}

bool column_sum_solve_inplace(Eigen::MatrixXd& a, Eigen::VectorXd& b, const Eigen::VectorXd& col_sums) {
    const Eigen::Index n = a.rows();
    if (n < 1 || a.cols() != n || b.size() != n || col_sums.size() != n)
        throw StructuralError("column_sum_solve: shape mismatch");
    for (Eigen::Index j = 0; j < n; ++j)
        if (!(col_sums[j] > 0.0) || !std::isfinite(col_sums[j])) return false;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i)
            if ((i != j && !(a(i, j) <= 0.0)) || !std::isfinite(a(i, j))) return false;
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(b[i] >= 0.0) || !std::isfinite(b[i])) return false;

    // s[j] is the column sum of the active block. Elimination keeps every
    // update a sum of like-signed terms, and diagonals are rebuilt from s and
    // the off-diagonals rather than carried through subtraction.
    Eigen::VectorXd s = col_sums;
    for (Eigen::Index k = 0; k < n; ++k) {
        double off = 0.0;
        for (Eigen::Index i = k + 1; i < n; ++i) off -= a(i, k);
        a(k, k) = s[k] + off;
        if (!(a(k, k) > 0.0) || !std::isfinite(a(k, k))) return false;
        const double inv = 1.0 / a(k, k);
        for (Eigen::Index j = k + 1; j < n; ++j) {
            const double akj = a(k, j);
            if (akj == 0.0) continue;
            s[j] -= akj * (s[k] * inv);
            for (Eigen::Index i = k + 1; i < n; ++i)
                if (i != j) a(i, j) -= a(i, k) * inv * akj;
        }
        for (Eigen::Index i = k + 1; i < n; ++i) b[i] -= a(i, k) * inv * b[k];
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        double acc = b[i];
        for (Eigen::Index j = i + 1; j < n; ++j) acc -= a(i, j) * b[j];
        b[i] = acc / a(i, i);
    }
    return b.allFinite();
}

bool m_matrix_certificate(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) return false;
    bool rows = true, cols = true;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(a(i, i) > 0.0)) return false;
        double row_off = 0.0, col_off = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            if (a(i, j) > 0.0) return false;
            row_off += -a(i, j);
            col_off += -a(j, i);
        }
        rows = rows && a(i, i) > row_off;
        cols = cols && a(i, i) > col_off;
    }
    return rows || cols;
}

} // namespace patankar
