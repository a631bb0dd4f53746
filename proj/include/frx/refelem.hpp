#pragma once

// One-dimensional reference element [-1, 1]: Gauss-Legendre points, Lagrange
// interpolation, Legendre polynomials and the operators a flux reconstruction
// element needs (differentiation, interface extrapolation, correction slopes).

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace frx {

inline constexpr int kMaxOrder = 10;

struct QuadratureRule {
    int order = 0;
    std::vector<double> points;
    std::vector<double> weights;
};

namespace detail {

/// Legendre value and first derivative by the three-term recurrence.
inline std::pair<long double, long double> legendre_pair(int n, long double x) {
    if (n == 0) return {1.0L, 0.0L};
    long double pm1 = 1.0L, p = x;
    long double dm1 = 0.0L, d = 1.0L;
    for (int k = 1; k < n; ++k) {
        const long double pn = ((2 * k + 1) * x * p - k * pm1) / (k + 1);
        // P'_{k+1} = P'_{k-1} + (2k+1) P_k
        const long double dn = dm1 + (2 * k + 1) * p;
        pm1 = p;
        p = pn;
        dm1 = d;
        d = dn;
    }
    return {p, d};
}

/// n-point Gauss-Legendre nodes and weights, no order cap.
inline void gauss_legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const long double pi = std::numbers::pi_v<long double>;
    for (int i = 0; i < n; ++i) {
        // Newton from the Chebyshev-like guess; gives ascending order after the flip below.
        long double z = std::cos(pi * (i + 0.75L) / (n + 0.5L));
        for (int it = 0; it < 100; ++it) {
            const auto [pv, dv] = legendre_pair(n, z);
            const long double dz = pv / dv;
            z -= dz;
            if (std::fabs(dz) < 1e-19L) break;
        }
        const auto [pv, dv] = legendre_pair(n, z);
        (void)pv;
        x[n - 1 - i] = static_cast<double>(z);
        w[n - 1 - i] = static_cast<double>(2.0L / ((1.0L - z * z) * dv * dv));
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
}

}  // namespace detail

/// p+1 point Gauss-Legendre rule (roots of the degree p+1 Legendre polynomial).
inline QuadratureRule gauss_legendre_rule(int p) {
    if (p < 0 || p > kMaxOrder)
        throw std::invalid_argument("gauss_legendre_rule: order must be in [0, " +
                                    std::to_string(kMaxOrder) + "], got " + std::to_string(p));
    QuadratureRule rule;
    rule.order = p;
    detail::gauss_legendre_nodes(p + 1, rule.points, rule.weights);
    return rule;
}

inline double legendre_eval(int n, double xi) {
    return static_cast<double>(detail::legendre_pair(n, xi).first);
}

inline double legendre_deriv(int n, double xi) {
    return static_cast<double>(detail::legendre_pair(n, xi).second);
}

/// m-th derivative of the degree-n Legendre polynomial at xi = +1:
///   (n+m)! / (2^m m! (n-m)!).
/// The value at -1 is (-1)^(n-m) times this.
inline double legendre_deriv_edge(int n, int m) {
    if (m > n) return 0.0;
    if (m == 0) return 1.0;
    long double v = 1.0L;
    for (int k = n - m + 1; k <= n + m; ++k) v *= k;
    for (int k = 1; k <= m; ++k) v /= 2.0L * k;
    return static_cast<double>(v);
}

namespace detail {

inline void require_distinct(std::span<const double> nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (nodes[i] == nodes[j])
                throw std::invalid_argument("lagrange: duplicate interpolation node");
}

/// l_j(xi) for the given nodes.
inline long double lagrange_basis(std::span<const double> nodes, std::size_t j, long double xi) {
    long double v = 1.0L;
    for (std::size_t m = 0; m < nodes.size(); ++m) {
        if (m == j) continue;
        v *= (xi - nodes[m]) / (static_cast<long double>(nodes[j]) - nodes[m]);
    }
    return v;
}

/// l_j'(xi) by the product rule; valid at any xi, including the nodes.
inline long double lagrange_basis_deriv(std::span<const double> nodes, std::size_t j,
                                        long double xi) {
    long double sum = 0.0L;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (k == j) continue;
        long double term = 1.0L / (static_cast<long double>(nodes[j]) - nodes[k]);
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            if (m == j || m == k) continue;
            term *= (xi - nodes[m]) / (static_cast<long double>(nodes[j]) - nodes[m]);
        }
        sum += term;
    }
    return sum;
}

}  // namespace detail

/// Value at xi of the unique degree <= n-1 polynomial through (nodes, values).
inline double lagrange_interp(std::span<const double> nodes, std::span<const double> values,
                              double xi) {
    if (nodes.size() != values.size())
        throw std::invalid_argument("lagrange_interp: nodes and values differ in length");
    if (nodes.empty()) throw std::invalid_argument("lagrange_interp: no nodes");
    detail::require_distinct(nodes);
    long double acc = 0.0L;
    for (std::size_t j = 0; j < nodes.size(); ++j)
        acc += values[j] * detail::lagrange_basis(nodes, j, xi);
    return static_cast<double>(acc);
}

/// Derivative at xi of the Lagrange interpolant.
inline double lagrange_interp_deriv(std::span<const double> nodes,
                                    std::span<const double> values, double xi) {
    if (nodes.size() != values.size())
        throw std::invalid_argument("lagrange_interp_deriv: nodes and values differ in length");
    detail::require_distinct(nodes);
    long double acc = 0.0L;
    for (std::size_t j = 0; j < nodes.size(); ++j)
        acc += values[j] * detail::lagrange_basis_deriv(nodes, j, xi);
    return static_cast<double>(acc);
}

/// Nodal-DG correction functions: h_L is the right Radau polynomial of
/// degree p+1 (unit at -1, zero at +1), h_R its mirror image.
inline double correction_left(int p, double xi) {
    const double sign = (p + 1) % 2 == 0 ? 1.0 : -1.0;
    return 0.5 * sign * (legendre_eval(p + 1, xi) - legendre_eval(p, xi));
}
inline double correction_right(int p, double xi) {
    return 0.5 * (legendre_eval(p + 1, xi) + legendre_eval(p, xi));
}
inline double correction_left_deriv(int p, double xi) {
    const double sign = (p + 1) % 2 == 0 ? 1.0 : -1.0;
    return 0.5 * sign * (legendre_deriv(p + 1, xi) - legendre_deriv(p, xi));
}
inline double correction_right_deriv(int p, double xi) {
    return 0.5 * (legendre_deriv(p + 1, xi) + legendre_deriv(p, xi));
}

/// Order-dependent operators of the 1D reference element, stored in the
/// working precision.  D is row-major: D[i*n + j] = l_j'(xi_i).
template <class Real>
struct ReferenceOps {
    QuadratureRule rule;
    int n = 0;  // points per direction, p + 1
    std::vector<Real> D;
    std::vector<Real> extrapL, extrapR;
    std::vector<Real> gL, gR;
    std::vector<Real> weights;

    int order() const { return rule.order; }
};

template <class Real = double>
ReferenceOps<Real> build_reference_ops(int p) {
    ReferenceOps<Real> ops;
    ops.rule = gauss_legendre_rule(p);
    const int n = p + 1;
    ops.n = n;
    const std::span<const double> x(ops.rule.points);

    ops.D.assign(static_cast<std::size_t>(n) * n, Real(0));
    for (int i = 0; i < n; ++i) {
        // Off-diagonal entries rounded to Real first; the diagonal is their
        // negated sum so constants differentiate to exactly zero.
        Real diag = 0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const Real dij = static_cast<Real>(detail::lagrange_basis_deriv(x, j, x[i]));
            ops.D[i * n + j] = dij;
            diag -= dij;
        }
        ops.D[i * n + i] = diag;
    }

    ops.extrapL.resize(n);
    ops.extrapR.resize(n);
    ops.gL.resize(n);
    ops.gR.resize(n);
    ops.weights.resize(n);
    for (int j = 0; j < n; ++j) {
        ops.extrapL[j] = static_cast<Real>(detail::lagrange_basis(x, j, -1.0L));
        ops.extrapR[j] = static_cast<Real>(detail::lagrange_basis(x, j, 1.0L));
        ops.gL[j] = static_cast<Real>(correction_left_deriv(p, x[j]));
        ops.gR[j] = static_cast<Real>(correction_right_deriv(p, x[j]));
        ops.weights[j] = static_cast<Real>(ops.rule.weights[j]);
    }
    return ops;
}

}  // namespace frx
