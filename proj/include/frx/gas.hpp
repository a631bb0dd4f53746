#pragma once

// Calorically perfect gas: state representations, conversions, inviscid and
// viscous fluxes, and the two routes from stored data to the gradients the
// viscous flux needs.
//
// The inviscid flux routes are written in the algebraic form of each stored
// set on purpose: they agree pointwise but not once their inputs are
// polynomial interpolants, which is what the storage schemes compare.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "frx/core.hpp"

namespace frx {

struct GasModel {
    double gamma = 1.4;
    double R = 1.0;
    double cv = 2.5;
    double mu = 0.0;
    double Pr = 0.71;
    double kappa = 0.0;

    /// Fills cv = R/(gamma-1) and kappa = mu gamma R / (Pr (gamma-1)).
    static GasModel make(double gamma, double R, double mu, double Pr) {
        if (!(gamma > 1.0)) throw std::invalid_argument("GasModel: gamma must exceed 1");
        if (!(R > 0.0)) throw std::invalid_argument("GasModel: R must be positive");
        if (!(mu >= 0.0)) throw std::invalid_argument("GasModel: mu must be non-negative");
        if (!(Pr > 0.0)) throw std::invalid_argument("GasModel: Pr must be positive");
        GasModel g;
        g.gamma = gamma;
        g.R = R;
        g.cv = R / (gamma - 1.0);
        g.mu = mu;
        g.Pr = Pr;
        g.kappa = mu * gamma * R / (Pr * (gamma - 1.0));
        return g;
    }
};

template <class Real>
using Vec5 = std::array<Real, 5>;

template <class Real>
struct Primitive {
    Real rho{}, u{}, v{}, w{}, p{};
};

template <class Real>
struct Conserved {
    Real rho{}, mx{}, my{}, mz{}, E{};
};

/// Conserved momenta with pressure in place of total energy.
template <class Real>
struct Mixed {
    Real rho{}, mx{}, my{}, mz{}, p{};
};

template <class Real>
struct FluxTriple {
    Vec5<Real> f{}, g{}, h{};

    Vec5<Real>& operator[](int axis) { return axis == 0 ? f : axis == 1 ? g : h; }
    const Vec5<Real>& operator[](int axis) const { return axis == 0 ? f : axis == 1 ? g : h; }
};

/// Rows (rho, u, v, w, T), columns (x, y, z).
template <class Real>
struct GradientBlock {
    std::array<std::array<Real, 3>, 5> d{};

    std::array<Real, 3>& operator[](int row) { return d[row]; }
    const std::array<Real, 3>& operator[](int row) const { return d[row]; }
};

template <class Real>
Vec5<Real> as_array(const Conserved<Real>& q) { return {q.rho, q.mx, q.my, q.mz, q.E}; }
template <class Real>
Vec5<Real> as_array(const Primitive<Real>& q) { return {q.rho, q.u, q.v, q.w, q.p}; }
template <class Real>
Vec5<Real> as_array(const Mixed<Real>& q) { return {q.rho, q.mx, q.my, q.mz, q.p}; }

namespace detail {

template <class Real>
inline void require_positive_density(Real rho) {
    if (!(rho > Real(0)))
        throw NonphysicalState("density " + std::to_string(static_cast<double>(rho)));
}

template <class Real>
inline void require_positive_pressure(Real p) {
    if (!(p > Real(0)))
        throw NonphysicalState("pressure " + std::to_string(static_cast<double>(p)));
}

}  // namespace detail

template <class Real>
Conserved<Real> prim_to_cons(const Primitive<Real>& q, const GasModel& gas) {
    const Real gm1 = static_cast<Real>(gas.gamma - 1.0);
    const Real ke = Real(0.5) * q.rho * (q.u * q.u + q.v * q.v + q.w * q.w);
    return {q.rho, q.rho * q.u, q.rho * q.v, q.rho * q.w, q.p / gm1 + ke};
}

template <class Real>
Primitive<Real> cons_to_prim(const Conserved<Real>& q, const GasModel& gas) {
    detail::require_positive_density(q.rho);
    const Real gm1 = static_cast<Real>(gas.gamma - 1.0);
    const Real inv = Real(1) / q.rho;
    const Real u = q.mx * inv, v = q.my * inv, w = q.mz * inv;
    const Real p = gm1 * (q.E - Real(0.5) * (q.mx * u + q.my * v + q.mz * w));
    detail::require_positive_pressure(p);
    return {q.rho, u, v, w, p};
}

template <class Real>
Conserved<Real> mixed_to_cons(const Mixed<Real>& q, const GasModel& gas) {
    detail::require_positive_density(q.rho);
    const Real gm1 = static_cast<Real>(gas.gamma - 1.0);
    const Real m2 = q.mx * q.mx + q.my * q.my + q.mz * q.mz;
    return {q.rho, q.mx, q.my, q.mz, q.p / gm1 + Real(0.5) * m2 / q.rho};
}

template <class Real>
Mixed<Real> cons_to_mixed(const Conserved<Real>& q, const GasModel& gas) {
    detail::require_positive_density(q.rho);
    const Real gm1 = static_cast<Real>(gas.gamma - 1.0);
    const Real m2 = q.mx * q.mx + q.my * q.my + q.mz * q.mz;
    return {q.rho, q.mx, q.my, q.mz, gm1 * (q.E - Real(0.5) * m2 / q.rho)};
}

template <class Real>
Mixed<Real> prim_to_mixed(const Primitive<Real>& q) {
    return {q.rho, q.rho * q.u, q.rho * q.v, q.rho * q.w, q.p};
}

template <class Real>
Primitive<Real> mixed_to_prim(const Mixed<Real>& q) {
    detail::require_positive_density(q.rho);
    const Real inv = Real(1) / q.rho;
    return {q.rho, q.mx * inv, q.my * inv, q.mz * inv, q.p};
}

template <class Real>
Real sound_speed(const Primitive<Real>& q, const GasModel& gas) {
    return std::sqrt(static_cast<Real>(gas.gamma) * q.p / q.rho);
}

/// Flux from primitives: energy flux u (gamma p/(gamma-1) + rho |V|^2 / 2).
template <class Real>
FluxTriple<Real> inviscid_flux_prim(const Primitive<Real>& q, const GasModel& gas) {
    const Real g = static_cast<Real>(gas.gamma);
    const Real h = g * q.p / (g - Real(1)) + Real(0.5) * q.rho * (q.u * q.u + q.v * q.v + q.w * q.w);
    const Real ru = q.rho * q.u, rv = q.rho * q.v, rw = q.rho * q.w;
    FluxTriple<Real> F;
    F.f = {ru, ru * q.u + q.p, ru * q.v, ru * q.w, q.u * h};
    F.g = {rv, rv * q.u, rv * q.v + q.p, rv * q.w, q.v * h};
    F.h = {rw, rw * q.u, rw * q.v, rw * q.w + q.p, q.w * h};
    return F;
}

/// Flux from conserved variables in the division-based form.
template <class Real>
FluxTriple<Real> inviscid_flux_cons(const Conserved<Real>& q, const GasModel& gas) {
    detail::require_positive_density(q.rho);
    const Real g = static_cast<Real>(gas.gamma);
    const Real gm1 = g - Real(1);
    const Real inv = Real(1) / q.rho;
    const Real ke = Real(0.5) * (q.mx * q.mx + q.my * q.my + q.mz * q.mz) * inv;
    const Real p = gm1 * (q.E - ke);
    const Real eflux = g * q.E - gm1 * ke;  // (E + p)
    FluxTriple<Real> F;
    F.f = {q.mx, q.mx * q.mx * inv + p, q.mx * q.my * inv, q.mx * q.mz * inv, q.mx * inv * eflux};
    F.g = {q.my, q.my * q.mx * inv, q.my * q.my * inv + p, q.my * q.mz * inv, q.my * inv * eflux};
    F.h = {q.mz, q.mz * q.mx * inv, q.mz * q.my * inv, q.mz * q.mz * inv + p, q.mz * inv * eflux};
    return F;
}

/// Flux from the mixed set, using the stored pressure directly.
template <class Real>
FluxTriple<Real> inviscid_flux_mixed(const Mixed<Real>& q, const GasModel& gas) {
    detail::require_positive_density(q.rho);
    const Real g = static_cast<Real>(gas.gamma);
    const Real inv = Real(1) / q.rho;
    const Real h = g * q.p / (g - Real(1)) + Real(0.5) * (q.mx * q.mx + q.my * q.my + q.mz * q.mz) * inv;
    FluxTriple<Real> F;
    F.f = {q.mx, q.mx * q.mx * inv + q.p, q.mx * q.my * inv, q.mx * q.mz * inv, q.mx * inv * h};
    F.g = {q.my, q.my * q.mx * inv, q.my * q.my * inv + q.p, q.my * q.mz * inv, q.my * inv * h};
    F.h = {q.mz, q.mz * q.mx * inv, q.mz * q.my * inv, q.mz * q.mz * inv + q.p, q.mz * inv * h};
    return F;
}

/// Viscous flux columns for zero bulk viscosity and constant mu.
template <class Real>
FluxTriple<Real> viscous_flux(Real u, Real v, Real w, const GradientBlock<Real>& gb,
                              const GasModel& gas) {
    const Real mu = static_cast<Real>(gas.mu);
    const Real kappa = static_cast<Real>(gas.kappa);
    const Real ux = gb[1][0], uy = gb[1][1], uz = gb[1][2];
    const Real vx = gb[2][0], vy = gb[2][1], vz = gb[2][2];
    const Real wx = gb[3][0], wy = gb[3][1], wz = gb[3][2];
    const Real third = Real(1) / Real(3);
    const Real div = ux + vy + wz;
    const Real txx = mu * (Real(2) * ux - Real(2) * third * div);
    const Real tyy = mu * (Real(2) * vy - Real(2) * third * div);
    const Real tzz = mu * (Real(2) * wz - Real(2) * third * div);
    const Real txy = mu * (uy + vx);
    const Real txz = mu * (wx + uz);
    const Real tyz = mu * (vz + wy);
    FluxTriple<Real> F;
    F.f = {Real(0), txx, txy, txz, u * txx + v * txy + w * txz + kappa * gb[4][0]};
    F.g = {Real(0), txy, tyy, tyz, u * txy + v * tyy + w * tyz + kappa * gb[4][1]};
    F.h = {Real(0), txz, tyz, tzz, u * txz + v * tyz + w * tzz + kappa * gb[4][2]};
    return F;
}

template <class Real>
FluxTriple<Real> viscous_flux(const Primitive<Real>& q, const GradientBlock<Real>& gb,
                              const GasModel& gas) {
    return viscous_flux(q.u, q.v, q.w, gb, gas);
}

/// Gradient block from primitive values and their gradients (rows rho, u,
/// v, w, p); the last row becomes grad T with T = p / (rho R).
template <class Real>
GradientBlock<Real> grad_path_B(const Primitive<Real>& q, const GradientBlock<Real>& primGrads,
                                const GasModel& gas) {
    detail::require_positive_density(q.rho);
    const Real invR = static_cast<Real>(1.0 / gas.R);
    const Real inv = Real(1) / q.rho;
    GradientBlock<Real> gb = primGrads;
    for (int d = 0; d < 3; ++d)
        gb[4][d] = invR * inv * (primGrads[4][d] - q.p * inv * primGrads[0][d]);
    return gb;
}

/// Gradient block from conserved values and their gradients by the product
/// rule.  The energy row is divided by c_v so the result is grad T.
template <class Real>
GradientBlock<Real> grad_path_C(const Conserved<Real>& q, const GradientBlock<Real>& consGrads,
                                const GasModel& gas) {
    detail::require_positive_density(q.rho);
    const Real inv = Real(1) / q.rho;
    const Real invCv = static_cast<Real>(1.0 / gas.cv);
    const Real u = q.mx * inv, v = q.my * inv, w = q.mz * inv, e = q.E * inv;
    GradientBlock<Real> gb;
    for (int d = 0; d < 3; ++d) {
        const Real rx = consGrads[0][d];
        const Real ux = (consGrads[1][d] - u * rx) * inv;
        const Real vx = (consGrads[2][d] - v * rx) * inv;
        const Real wx = (consGrads[3][d] - w * rx) * inv;
        const Real ex = (consGrads[4][d] - e * rx) * inv;
        gb[0][d] = rx;
        gb[1][d] = ux;
        gb[2][d] = vx;
        gb[3][d] = wx;
        gb[4][d] = invCv * (ex - (u * ux + v * vx + w * wx));
    }
    return gb;
}

}  // namespace frx
