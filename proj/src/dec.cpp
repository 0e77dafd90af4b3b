#include "patankar/errors.hpp"
#include "patankar/schemes.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace patankar {

namespace {

// Legendre P_n and P_n' at x in (-1, 1).
std::pair<double, double> legendre(int n, double x) {
    double p0 = 1.0, p1 = x;
    if (n == 0) return {1.0, 0.0};
    for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

} // namespace

std::vector<double> equispaced_nodes(int m_plus_1) {
    if (m_plus_1 < 2) throw std::invalid_argument("equispaced_nodes: need at least 2 nodes");
    const int m = m_plus_1 - 1;
    std::vector<double> nodes(m_plus_1);
    for (int i = 0; i <= m; ++i) nodes[i] = static_cast<double>(i) / m;
    return nodes;
}

std::vector<double> gauss_lobatto_nodes(int m_plus_1) {
    if (m_plus_1 < 2) throw std::invalid_argument("gauss_lobatto_nodes: need at least 2 nodes");
    const int m = m_plus_1 - 1;
    std::vector<double> x(m_plus_1);
    x[0] = -1.0;
    x[m] = 1.0;
    // Interior nodes are the roots of P_m'. Newton on P_m' with P_m'' taken
    // from the Legendre differential equation.
    for (int k = 1; k < m; ++k) {
        double xi = -std::cos(std::numbers::pi * k / m);
        bool converged = false;
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(m, xi);
            const double ddp = (2.0 * xi * dp - m * (m + 1.0) * p) / (1.0 - xi * xi);
            double dx = dp / ddp;
            // Keep the iterate strictly inside (-1, 1).
            while (std::abs(xi - dx) >= 1.0) dx *= 0.5;
            xi -= dx;
            if (std::abs(dx) <= 1e-15) {
                converged = true;
                break;
            }
        }
        if (!converged) throw ConvergenceFailure("gauss_lobatto_nodes: Newton did not converge");
        x[k] = xi;
    }
    for (int k = 0; k <= m / 2; ++k) {
        const double h = 0.5 * (x[m - k] - x[k]);
        x[k] = -h;
        x[m - k] = h;
    }
    if (m % 2 == 0) x[m / 2] = 0.0;
    std::vector<double> nodes(m_plus_1);
    for (int k = 0; k <= m; ++k) nodes[k] = 0.5 * (x[k] + 1.0);
    nodes[0] = 0.0;
    nodes[m] = 1.0;
    return nodes;
}

DecWeights compute_dec_weights(const std::vector<double>& nodes) {
    const int n = static_cast<int>(nodes.size());
    if (n < 2) throw std::invalid_argument("compute_dec_weights: need at least 2 nodes");
    for (int i = 1; i < n; ++i)
        if (!(nodes[i] > nodes[i - 1])) throw DuplicateNodes("compute_dec_weights: nodes not strictly increasing");
    if (nodes.front() != 0.0 || nodes.back() != 1.0)
        throw std::invalid_argument("compute_dec_weights: nodes must start at 0 and end at 1");

    // Each l_r has degree n-1, so a Gauss-Legendre rule with q points,
    // 2q-1 >= n-1, integrates it exactly on every subinterval. The basis is
    // evaluated in product form, which stays accurate where a monomial
    // expansion loses digits to cancellation at high degree.
    const int q = n / 2 + 1;
    std::vector<double> gx(q), gw(q);
    for (int k = 0; k < q; ++k) {
        double xi = -std::cos(std::numbers::pi * (k + 0.75) / (q + 0.5));
        for (int it = 0; it < 100; ++it) {
            const double dx = legendre(q, xi).first / legendre(q, xi).second;
            xi -= dx;
            if (std::abs(dx) <= 1e-16) break;
        }
        const double dp = legendre(q, xi).second;
        gx[k] = xi;
        gw[k] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
    auto basis = [&](int r, double t) {
        double v = 1.0;
        for (int k = 0; k < n; ++k)
            if (k != r) v *= (t - nodes[k]) / (nodes[r] - nodes[k]);
        return v;
    };

    DecWeights w;
    w.nodes = nodes;
    w.theta.setZero(n, n);
    for (int m = 1; m < n; ++m) {
        const double a = nodes[m - 1], h = nodes[m] - nodes[m - 1];
        for (int r = 0; r < n; ++r) {
            double part = 0.0;
            for (int k = 0; k < q; ++k) part += gw[k] * basis(r, a + 0.5 * h * (gx[k] + 1.0));
            w.theta(m, r) = w.theta(m - 1, r) + 0.5 * h * part;
        }
    }
    return w;
}

int dec_subintervals(int order) { return order <= 1 ? 1 : order - 1; }
int dec_corrections(int order) { return order; }

const DecWeights& dec_weights(int order, NodeFamily nodes) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<DecWeights>> cache;
    const std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{order, static_cast<int>(nodes)}];
    if (!slot) {
        const int count = dec_subintervals(order) + 1;
        slot = std::make_unique<DecWeights>(compute_dec_weights(
            nodes == NodeFamily::GaussLobatto ? gauss_lobatto_nodes(count) : equispaced_nodes(count)));
    }
    return *slot;
}

} // namespace patankar
