#pragma once

// Benchmark flows and their diagnostics: isentropic convecting vortex (ICV)
// and Taylor-Green vortex (TGV).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "frx/field.hpp"
#include "frx/frcore.hpp"
#include "frx/march.hpp"
#include "frx/gas.hpp"
#include "frx/refelem.hpp"

namespace frx {

using PointSampler = std::function<Primitive<double>(double x, double y, double z)>;

// ---------------------------------------------------------------------------
// ICV

struct IcvConfig {
    double beta = 5.0;
    double u0 = 1.0, v0 = 1.0;
    double x0 = 5.0, y0 = 5.0;
    std::array<double, 3> lower{0.0, 0.0, 0.0};
    std::array<double, 2> extent{10.0, 10.0};
    std::array<int, 3> elements{8, 8, 1};
    int p = 4;
    double gamma = 1.4;

    void validate() const {
        if (!(beta > 0.0)) throw std::invalid_argument("IcvConfig: beta must be positive");
        if (p < 0 || p > kMaxOrder) throw std::invalid_argument("IcvConfig: order out of range");
    }

    /// Cubic elements; the z extent is one element width in x.
    Mesh mesh() const {
        const double hz = extent[0] / elements[0] * elements[2];
        return Mesh(elements, lower, {extent[0], extent[1], hz});
    }

    /// Free stream rho = p = 1; R = 1 so T = p / rho.
    GasModel gas() const { return GasModel::make(gamma, 1.0, 0.0, 0.71); }

    /// Time for the vortex to return to its start.
    double period() const {
        return std::max(u0 != 0.0 ? extent[0] / std::abs(u0) : 0.0, v0 != 0.0 ? extent[1] / std::abs(v0) : 0.0);
    }
};

inline Primitive<double> icv_state(const IcvConfig& cfg, double x, double y) {
    const double g = cfg.gamma;
    const double pi = std::numbers::pi;
    const double dx = x - cfg.x0, dy = y - cfg.y0;
    const double r2 = dx * dx + dy * dy;
    const double base = 1.0 - (g - 1.0) * cfg.beta * cfg.beta / (8.0 * g * pi * pi) * std::exp(1.0 - r2);
    const double amp = cfg.beta / (2.0 * pi) * std::exp(0.5 * (1.0 - r2));
    return {std::pow(base, 1.0 / (g - 1.0)), cfg.u0 - amp * dy, cfg.v0 + amp * dx, 0.0,
            std::pow(base, g / (g - 1.0))};
}

/// Exact solution: the initial profile advected by (u0, v0), wrapped into the box.
inline PointSampler icv_exact(const IcvConfig& cfg, double t) {
    return [cfg, t](double x, double y, double) {
        auto wrap = [](double s, double lo, double len) {
            double r = std::fmod(s - lo, len);
            if (r < 0) r += len;
            return lo + r;
        };
        return icv_state(cfg, wrap(x - cfg.u0 * t, cfg.lower[0], cfg.extent[0]),
                         wrap(y - cfg.v0 * t, cfg.lower[1], cfg.extent[1]));
    };
}

/// Nodal samples of a primitive-state function, stored in the scheme's set.
template <class Real>
SolutionField<Real> sample_field(Scheme scheme, int p, const Mesh& mesh, const GasModel& gas,
                                 const PointSampler& f) {
    SolutionField<Real> field(scheme, p, mesh);
    const auto rule = gauss_legendre_rule(p);
    for (long e = 0; e < field.elements(); ++e)
        for (int i = 0; i < field.nodes_per_element(); ++i) {
            const auto x = field.position(e, i, rule.points);
            const auto q = f(x[0], x[1], x[2]);
            field.set_primitive(e, i,
                                {static_cast<Real>(q.rho), static_cast<Real>(q.u), static_cast<Real>(q.v),
                                 static_cast<Real>(q.w), static_cast<Real>(q.p)},
                                gas);
        }
    return field;
}

template <class Real>
SolutionField<Real> icv_init(const IcvConfig& cfg, Scheme scheme) {
    cfg.validate();
    return sample_field<Real>(scheme, cfg.p, cfg.mesh(), cfg.gas(), icv_exact(cfg, 0.0));
}

/// Mean over all solution points of |rho_i - rho_exact(x_i)|.
template <class Real>
double density_error(const SolutionField<Real>& field, const GasModel& gas, const PointSampler& exact) {
    const auto rule = gauss_legendre_rule(field.order());
    double sum = 0.0;
    long count = 0;
    for (long e = 0; e < field.elements(); ++e)
        for (int i = 0; i < field.nodes_per_element(); ++i) {
            const auto x = field.position(e, i, rule.points);
            const double rho = field.primitive(e, i, gas).rho;
            sum += std::abs(rho - exact(x[0], x[1], x[2]).rho);
            ++count;
        }
    return sum / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// TGV

struct TgvConfig {
    double re = 1600.0;
    double ma = 0.08;
    double pr = 0.71;
    double gamma = 1.4;
    double rho0 = 1.0, U0 = 1.0, L = 1.0, T0 = 1.0;
    std::array<int, 3> elements{4, 4, 4};
    int p = 4;

    void validate() const {
        if (!(re > 0.0)) throw std::invalid_argument("TgvConfig: Re must be positive");
        if (!(ma > 0.0)) throw std::invalid_argument("TgvConfig: Ma must be positive");
        if (p < 0 || p > kMaxOrder) throw std::invalid_argument("TgvConfig: order out of range");
    }

    /// R from Ma = U0 / sqrt(gamma R T0); mu from Re = rho0 U0 L / mu.
    GasModel gas() const {
        const double R = U0 * U0 / (gamma * ma * ma * T0);
        return GasModel::make(gamma, R, rho0 * U0 * L / re, pr);
    }
    double p0() const { return rho0 * gas().R * T0; }

    Mesh mesh() const {
        const double pi = std::numbers::pi;
        return Mesh(elements, {-pi * L, -pi * L, -pi * L}, {2 * pi * L, 2 * pi * L, 2 * pi * L});
    }
};

inline Primitive<double> tgv_state(const TgvConfig& cfg, double x, double y, double z) {
    const double X = x / cfg.L, Y = y / cfg.L, Z = z / cfg.L;
    const double R = cfg.gas().R;
    const double p = cfg.p0() + cfg.rho0 * cfg.U0 * cfg.U0 / 16.0 *
                                    (std::cos(2 * X) + std::cos(2 * Y)) * (std::cos(2 * Z) + 2.0);
    return {p / (R * cfg.T0), cfg.U0 * std::sin(X) * std::cos(Y) * std::cos(Z),
            -cfg.U0 * std::cos(X) * std::sin(Y) * std::cos(Z), 0.0, p};
}

template <class Real>
SolutionField<Real> tgv_init(const TgvConfig& cfg, Scheme scheme) {
    cfg.validate();
    const TgvConfig c = cfg;
    return sample_field<Real>(scheme, cfg.p, cfg.mesh(), cfg.gas(),
                              [c](double x, double y, double z) { return tgv_state(c, x, y, z); });
}

// ---------------------------------------------------------------------------
// Integrated diagnostics (accumulated in binary64, fixed element order)

namespace detail {

template <class Real, class Integrand>
double integrate(const SolutionField<Real>& field, Integrand&& f) {
    const auto rule = gauss_legendre_rule(field.order());
    const int n = field.points_per_axis();
    const Mesh& m = field.mesh();
    const double jac = m.jacobian(0) * m.jacobian(1) * m.jacobian(2);
    double total = 0.0;
    for (long e = 0; e < field.elements(); ++e) {
        double part = 0.0;
        for (int i = 0; i < field.nodes_per_element(); ++i) {
            const double w = rule.weights[i % n] * rule.weights[(i / n) % n] * rule.weights[i / (n * n)];
            part += w * f(e, i);
        }
        total += part * jac;
    }
    return total;
}

}  // namespace detail

/// (1 / (2 |Omega| norm)) * integral of rho V.V; norm = rho0 U0^2 for the
/// TGV and 1 for the ICV.
template <class Real>
double kinetic_energy(const SolutionField<Real>& field, const GasModel& gas, double norm = 1.0) {
    const double integral = detail::integrate(field, [&](long e, int i) {
        const auto q = field.primitive(e, i, gas);
        const double rho = q.rho, u = q.u, v = q.v, w = q.w;
        return rho * (u * u + v * v + w * w);
    });
    return integral / (2.0 * field.mesh().volume() * norm);
}

template <class Real>
std::array<Real, 3> vorticity(const GradientBlock<Real>& g) {
    return {g[3][1] - g[2][2], g[1][2] - g[3][0], g[2][0] - g[1][1]};
}

/// eps2 = mu / (rho0^2 U0^2 |Omega|) * integral of rho omega.omega, with the
/// gradient blocks of the active scheme (index e * nodes + node).
template <class Real>
double enstrophy_dissipation(const SolutionField<Real>& field, const std::vector<GradientBlock<Real>>& blocks,
                             const GasModel& gas, double rho0 = 1.0, double U0 = 1.0) {
    const int nv = field.nodes_per_element();
    const double integral = detail::integrate(field, [&](long e, int i) {
        const auto w = vorticity(blocks[static_cast<std::size_t>(e) * nv + i]);
        const double rho = field.primitive(e, i, gas).rho;
        const double wx = w[0], wy = w[1], wz = w[2];
        return rho * (wx * wx + wy * wy + wz * wz);
    });
    return gas.mu / (rho0 * rho0 * U0 * U0 * field.mesh().volume()) * integral;
}

// ---------------------------------------------------------------------------
// Time step and output

/// dt = cfl h / ((2p + 1)(|V|max + a_max)), shrunk so that tEnd is a whole
/// number of steps.
template <class Real>
double cfl_time_step(const SolutionField<Real>& field, const GasModel& gas, double cfl, double tEnd) {
    if (!(cfl > 0.0)) throw std::invalid_argument("cfl_time_step: cfl must be positive");
    const Mesh& m = field.mesh();
    const double h = std::min({m.h(0), m.h(1), m.h(2)});
    double vmax = 0.0, amax = 0.0;
    for (long e = 0; e < field.elements(); ++e)
        for (int i = 0; i < field.nodes_per_element(); ++i) {
            const auto q = field.primitive(e, i, gas);
            const double u = q.u, v = q.v, w = q.w, rho = q.rho, p = q.p;
            vmax = std::max(vmax, std::sqrt(u * u + v * v + w * w));
            amax = std::max(amax, std::sqrt(gas.gamma * p / rho));
        }
    const double dt = cfl * h / ((2.0 * field.order() + 1.0) * (vmax + amax));
    if (!(tEnd > 0.0)) return dt;
    const double steps = std::ceil(tEnd / dt);
    return tEnd / steps;
}

/// Columns t, Ek, eps1, eps2, err_rho, step_ms with 17 significant digits.
inline void write_csv(std::ostream& os, const DiagnosticsSeries& series) {
    os << "t,Ek,eps1,eps2,err_rho,step_ms\n";
    char buf[64];
    auto put = [&](double v, char end) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf << end;
    };
    for (const auto& r : series.rows) {
        put(r.t, ',');
        put(r.Ek, ',');
        put(r.eps1, ',');
        put(r.eps2, ',');
        put(r.errRho, ',');
        put(r.stepMs, '\n');
    }
}

}  // namespace frx
