#pragma once

// Flux reconstruction spatial operators.
//
// 1D: scalar conservation law on a periodic line.
// 3D: compressible Euler / Navier-Stokes on a periodic Cartesian hex mesh,
// tensor-product elements with Gauss-Legendre solution points and the
// Nodal-DG correction.  Inviscid interfaces use Rusanov with Davis wave
// speeds; viscous terms use BR1 (central averaging of both the gradient
// variable and the viscous flux).
//
// The residual is always the rate of change of the conserved variables.
// How the stored set is interpolated, extrapolated, differentiated and
// converted differs per storage scheme.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "frx/core.hpp"
#include "frx/field.hpp"
#include "frx/gas.hpp"
#include "frx/refelem.hpp"

namespace frx {

// ---------------------------------------------------------------------------
// 1D scalar

struct Mesh1d {
    int elements = 1;
    double lower = 0.0;
    double length = 1.0;

    double h() const { return length / elements; }
};

/// Semi-discrete rate du/dt for u_t + f(u)_x = 0.  u is laid out element by
/// element, p+1 values each.  Interfaces use the scalar Rusanov flux with
/// speed max(|a(uL)|, |a(uR)|).
template <class Flux, class Speed>
std::vector<double> residual_1d_scalar(std::span<const double> u, Flux&& flux, Speed&& speed,
                                       const ReferenceOps<double>& ops, const Mesh1d& mesh) {
    const int n = ops.n;
    const int ne = mesh.elements;
    if (u.size() != static_cast<std::size_t>(n) * ne)
        throw std::invalid_argument("residual_1d_scalar: data size does not match mesh");

    std::vector<double> f(u.size()), uL(ne), uR(ne), fL(ne), fR(ne);
    for (std::size_t i = 0; i < u.size(); ++i) f[i] = flux(u[i]);
    for (int e = 0; e < ne; ++e) {
        double a = 0, b = 0, c = 0, d = 0;
        for (int m = 0; m < n; ++m) {
            a += ops.extrapL[m] * u[e * n + m];
            b += ops.extrapR[m] * u[e * n + m];
            c += ops.extrapL[m] * f[e * n + m];
            d += ops.extrapR[m] * f[e * n + m];
        }
        uL[e] = a;
        uR[e] = b;
        fL[e] = c;
        fR[e] = d;
    }
    // common[e] sits on the left face of element e
    std::vector<double> common(ne);
    for (int e = 0; e < ne; ++e) {
        const int l = (e - 1 + ne) % ne;
        const double qa = uR[l], qb = uL[e];
        const double s = std::max(std::abs(speed(qa)), std::abs(speed(qb)));
        common[e] = 0.5 * (flux(qa) + flux(qb)) - 0.5 * s * (qb - qa);
    }
    std::vector<double> out(u.size());
    const double scale = 2.0 / mesh.h();
    for (int e = 0; e < ne; ++e) {
        const double jl = common[e] - fL[e];
        const double jr = common[(e + 1) % ne] - fR[e];
        for (int i = 0; i < n; ++i) {
            double df = 0;
            for (int m = 0; m < n; ++m) df += ops.D[i * n + m] * f[e * n + m];
            df += jl * ops.gL[i] + jr * ops.gR[i];
            out[e * n + i] = -scale * df;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Interface fluxes

/// Rusanov flux with Davis wave speed estimate s = max(|u_n| + a) over both sides.
template <class Real>
Vec5<Real> rusanov_flux(const Conserved<Real>& qL, const Conserved<Real>& qR, int axis,
                        const GasModel& gas) {
    const auto pL = cons_to_prim(qL, gas);
    const auto pR = cons_to_prim(qR, gas);
    const auto fL = inviscid_flux_cons(qL, gas)[axis];
    const auto fR = inviscid_flux_cons(qR, gas)[axis];
    const Real unL = axis == 0 ? pL.u : axis == 1 ? pL.v : pL.w;
    const Real unR = axis == 0 ? pR.u : axis == 1 ? pR.v : pR.w;
    const Real s = std::max(std::abs(unL) + sound_speed(pL, gas), std::abs(unR) + sound_speed(pR, gas));
    const auto a = as_array(qL), b = as_array(qR);
    Vec5<Real> out;
    for (int c = 0; c < 5; ++c) out[c] = Real(0.5) * (fL[c] + fR[c]) - Real(0.5) * s * (b[c] - a[c]);
    return out;
}

/// BR1 common solution value.
template <class T>
T br1_interface(const T& qL, const T& qR) {
    if constexpr (requires { qL.size(); }) {
        T out = qL;
        for (std::size_t c = 0; c < out.size(); ++c) out[c] = (qL[c] + qR[c]) / 2;
        return out;
    } else {
        return (qL + qR) / 2;
    }
}

/// BR1 common viscous flux.
template <class T>
T br1_flux(const T& fL, const T& fR) {
    return br1_interface(fL, fR);
}

// ---------------------------------------------------------------------------
// 3D

/// Reusable 3D FR operator for one mesh / order / scheme / precision.
/// residual() is not reentrant: it uses the operator's workspace.
template <class Real>
class FrOperator {
public:
    FrOperator(const Mesh& mesh, int p, Scheme scheme, const GasModel& gas, bool viscous)
        : mesh_(mesh), p_(p), n_(p + 1), scheme_(scheme), gas_(gas), viscous_(viscous),
          ops_(build_reference_ops<Real>(p)) {
        nv_ = n_ * n_ * n_;
        nf_ = n_ * n_;
        for (int a = 0; a < 3; ++a) scale_[a] = static_cast<Real>(2.0 / mesh_.h(a));
        for (int a = 0; a < 3; ++a) {
            base_[a].resize(nf_);
            for (int fp = 0; fp < nf_; ++fp) {
                const int t1 = fp % n_, t2 = fp / n_;
                base_[a][fp] = a == 0 ? n_ * fp : a == 1 ? t1 + nf_ * t2 : fp;
            }
        }
        stride_ = {1, n_, nf_};
        gamma_ = static_cast<Real>(gas.gamma);
        gm1_ = static_cast<Real>(gas.gamma - 1.0);

        const std::size_t ne = static_cast<std::size_t>(mesh_.count());
        flux_.assign(ne * 15 * nv_, Real(0));
        traceS_.assign(ne * 30 * nf_, Real(0));
        common_.assign(ne * 15 * nf_, Real(0));
        if (viscous_) {
            if (needs_prim_copy()) {
                prim_.assign(ne * 5 * nv_, Real(0));
                traceW_.assign(ne * 30 * nf_, Real(0));
            }
            commonW_.assign(ne * 15 * nf_, Real(0));
            traceFv_.assign(ne * 30 * nf_, Real(0));
        }
    }

    const Mesh& mesh() const { return mesh_; }
    int order() const { return p_; }
    Scheme scheme() const { return scheme_; }
    const GasModel& gas() const { return gas_; }
    bool viscous() const { return viscous_; }
    const ReferenceOps<Real>& ops() const { return ops_; }

    /// Rate of change of the conserved variables, same layout as the field.
    void residual(const SolutionField<Real>& field, std::span<Real> out) {
        check_field(field, out.size());
        dispatch([&]<Scheme S>() { residual_impl<S>(field, out); });
    }

    /// Maps conserved rates (in place) to rates of the stored variables.
    void stored_rate(const SolutionField<Real>& field, std::span<Real> rate) const {
        check_field(field, rate.size());
        if (scheme_ == Scheme::B || scheme_ == Scheme::C) return;
        const bool prim = scheme_ == Scheme::A;
        const Real half = Real(0.5);
        parallel_for(mesh_.count(), [&](long e) {
            const Real* q = field.element(e);
            Real* r = rate.data() + static_cast<std::size_t>(e) * 5 * nv_;
            for (int i = 0; i < nv_; ++i) {
                const Real rho = q[i];
                const Real inv = Real(1) / rho;
                const Real u = prim ? q[nv_ + i] : q[nv_ + i] * inv;
                const Real v = prim ? q[2 * nv_ + i] : q[2 * nv_ + i] * inv;
                const Real w = prim ? q[3 * nv_ + i] : q[3 * nv_ + i] * inv;
                const Real rr = r[i], rmx = r[nv_ + i], rmy = r[2 * nv_ + i], rmz = r[3 * nv_ + i];
                const Real rE = r[4 * nv_ + i];
                r[4 * nv_ + i] = gm1_ * (rE - (u * rmx + v * rmy + w * rmz) + half * (u * u + v * v + w * w) * rr);
                if (prim) {
                    r[nv_ + i] = (rmx - u * rr) * inv;
                    r[2 * nv_ + i] = (rmy - v * rr) * inv;
                    r[3 * nv_ + i] = (rmz - w * rr) * inv;
                }
            }
        });
    }

    /// Stored-variable rate: residual followed by stored_rate.
    void rate(const SolutionField<Real>& field, std::span<Real> out) {
        residual(field, out);
        stored_rate(field, out);
    }

    /// Corrected (BR1) gradient blocks at every node, the same ones the
    /// viscous flux uses.  Index: e * nodes + node.
    void gradients(const SolutionField<Real>& field, std::vector<GradientBlock<Real>>& out) {
        if (!viscous_) throw std::logic_error("FrOperator::gradients needs a viscous operator");
        check_field(field, field.values().size());
        out.resize(static_cast<std::size_t>(mesh_.count()) * nv_);
        dispatch([&]<Scheme S>() {
            parallel_for(mesh_.count(), [&](long e) { prepare_element<S>(field, e, false); });
            parallel_for(mesh_.count(), [&](long e) { interfaces<S>(e, false); });
            parallel_for(mesh_.count(), [&](long e) {
                viscous_element<S>(field, e, out.data() + static_cast<std::size_t>(e) * nv_);
            });
        });
    }

private:
    bool needs_prim_copy() const { return scheme_ == Scheme::B || scheme_ == Scheme::D; }

    template <class Fn>
    void dispatch(Fn&& fn) {
        switch (scheme_) {
        case Scheme::A: fn.template operator()<Scheme::A>(); break;
        case Scheme::B: fn.template operator()<Scheme::B>(); break;
        case Scheme::C: fn.template operator()<Scheme::C>(); break;
        case Scheme::D: fn.template operator()<Scheme::D>(); break;
        }
    }

    void check_field(const SolutionField<Real>& field, std::size_t outSize) const {
        if (field.scheme() != scheme_ || field.order() != p_ || field.elements() != mesh_.count())
            throw std::invalid_argument("FrOperator: field does not match operator");
        if (outSize != field.values().size())
            throw std::invalid_argument("FrOperator: output size mismatch");
    }

    // workspace views
    Real* flux(long e, int axis, int var) { return flux_.data() + ((e * 3 + axis) * 5 + var) * nv_; }
    Real* trace(std::vector<Real>& t, long e, int face, int var) {
        return t.data() + ((e * 6 + face) * 5 + var) * nf_;
    }
    Real* common(std::vector<Real>& c, long e, int axis, int var) {
        return c.data() + ((e * 3 + axis) * 5 + var) * nf_;
    }

    void extrapolate(const Real* u, int axis, Real* lower, Real* upper) const {
        const int st = stride_[axis];
        for (int fp = 0; fp < nf_; ++fp) {
            const Real* line = u + base_[axis][fp];
            Real a = 0, b = 0;
            for (int m = 0; m < n_; ++m) {
                a += ops_.extrapL[m] * line[m * st];
                b += ops_.extrapR[m] * line[m * st];
            }
            lower[fp] = a;
            upper[fp] = b;
        }
    }

    /// out = scale * (D u + jumpL gL + jumpR gR) along axis; jumps indexed by face point.
    void corrected_derivative(const Real* u, int axis, const Real* jumpL, const Real* jumpR,
                              Real* out) const {
        const int st = stride_[axis];
        const Real s = scale_[axis];
        for (int fp = 0; fp < nf_; ++fp) {
            const int b = base_[axis][fp];
            const Real* line = u + b;
            for (int i = 0; i < n_; ++i) {
                const Real* Drow = ops_.D.data() + i * n_;
                Real acc = 0;
                for (int m = 0; m < n_; ++m) acc += Drow[m] * line[m * st];
                acc += jumpL[fp] * ops_.gL[i] + jumpR[fp] * ops_.gR[i];
                out[b + i * st] = s * acc;
            }
        }
    }

    [[noreturn]] void fail(const NonphysicalState& err, long e, long node, const char* where) const {
        throw NonphysicalState(std::string(err.what()).substr(19) + where, e, node,
                               std::string(to_string(scheme_)));
    }

    template <Scheme S>
    Real pressure_of(const Real* s) const {
        if constexpr (S == Scheme::A || S == Scheme::D) {
            return s[4];
        } else {
            const Real ke = Real(0.5) * (s[1] * s[1] + s[2] * s[2] + s[3] * s[3]) / s[0];
            return gm1_ * (s[4] - ke);
        }
    }

    /// Primitive, conserved and axis flux of one stored-state sample using
    /// the scheme's own flux route.
    template <Scheme S>
    void point_state(const Real* s, Primitive<Real>& prim, Conserved<Real>& cons,
                     FluxTriple<Real>& F) const {
        if constexpr (S == Scheme::A) {
            prim = {s[0], s[1], s[2], s[3], s[4]};
            detail::require_positive_density(prim.rho);
            detail::require_positive_pressure(prim.p);
            cons = prim_to_cons(prim, gas_);
            F = inviscid_flux_prim(prim, gas_);
        } else if constexpr (S == Scheme::D) {
            const Mixed<Real> m{s[0], s[1], s[2], s[3], s[4]};
            prim = mixed_to_prim(m);
            detail::require_positive_pressure(prim.p);
            cons = mixed_to_cons(m, gas_);
            F = inviscid_flux_mixed(m, gas_);
        } else {
            cons = {s[0], s[1], s[2], s[3], s[4]};
            prim = cons_to_prim(cons, gas_);
            F = inviscid_flux_cons(cons, gas_);
        }
    }

    template <Scheme S>
    Primitive<Real> face_primitive(const Real* s) const {
        if constexpr (S == Scheme::D) {
            const auto q = mixed_to_prim(Mixed<Real>{s[0], s[1], s[2], s[3], s[4]});
            detail::require_positive_pressure(q.p);
            return q;
        } else {
            return cons_to_prim(Conserved<Real>{s[0], s[1], s[2], s[3], s[4]}, gas_);
        }
    }

    // Pass 1: nodal inviscid flux, physicality check, traces of the stored
    // variables, and for B and D a nodal primitive copy to differentiate.
    template <Scheme S>
    void prepare_element(const SolutionField<Real>& field, long e, bool withFlux) {
        const Real* q = field.element(e);
        Real* P = needs_prim_copy() && viscous_ ? prim_.data() + static_cast<std::size_t>(e) * 5 * nv_ : nullptr;
        for (int i = 0; i < nv_; ++i) {
            const Real s[5] = {q[i], q[nv_ + i], q[2 * nv_ + i], q[3 * nv_ + i], q[4 * nv_ + i]};
            try {
                detail::require_positive_density(s[0]);
                detail::require_positive_pressure(pressure_of<S>(s));
                if (withFlux) {
                    FluxTriple<Real> F;
                    if constexpr (S == Scheme::A)
                        F = inviscid_flux_prim(Primitive<Real>{s[0], s[1], s[2], s[3], s[4]}, gas_);
                    else if constexpr (S == Scheme::D)
                        F = inviscid_flux_mixed(Mixed<Real>{s[0], s[1], s[2], s[3], s[4]}, gas_);
                    else
                        F = inviscid_flux_cons(Conserved<Real>{s[0], s[1], s[2], s[3], s[4]}, gas_);
                    for (int a = 0; a < 3; ++a)
                        for (int c = 0; c < 5; ++c) flux(e, a, c)[i] = F[a][c];
                }
                if constexpr (S == Scheme::B) {
                    if (P) {
                        const auto pr = cons_to_prim(Conserved<Real>{s[0], s[1], s[2], s[3], s[4]}, gas_);
                        P[i] = pr.rho; P[nv_ + i] = pr.u; P[2 * nv_ + i] = pr.v;
                        P[3 * nv_ + i] = pr.w; P[4 * nv_ + i] = pr.p;
                    }
                } else if constexpr (S == Scheme::D) {
                    if (P) {
                        const auto pr = mixed_to_prim(Mixed<Real>{s[0], s[1], s[2], s[3], s[4]});
                        P[i] = pr.rho; P[nv_ + i] = pr.u; P[2 * nv_ + i] = pr.v;
                        P[3 * nv_ + i] = pr.w; P[4 * nv_ + i] = pr.p;
                    }
                }
            } catch (const NonphysicalState& err) {
                fail(err, e, i, " at solution point");
            }
        }
        for (int a = 0; a < 3; ++a)
            for (int c = 0; c < 5; ++c)
                extrapolate(q + c * nv_, a, trace(traceS_, e, 2 * a, c), trace(traceS_, e, 2 * a + 1, c));
    }

    std::vector<Real>& gradient_traces() { return needs_prim_copy() ? traceW_ : traceS_; }

    // Pass 2: common values on the lower face of element e along each axis.
    template <Scheme S>
    void interfaces(long e, bool withFlux) {
        for (int a = 0; a < 3; ++a) {
            const long l = mesh_.neighbour(e, a, -1);
            if (withFlux) {
                for (int fp = 0; fp < nf_; ++fp) {
                    Real sL[5], sR[5];
                    for (int c = 0; c < 5; ++c) {
                        sL[c] = trace(traceS_, l, 2 * a + 1, c)[fp];
                        sR[c] = trace(traceS_, e, 2 * a, c)[fp];
                    }
                    Primitive<Real> pL, pR;
                    Conserved<Real> cL, cR;
                    FluxTriple<Real> FL, FR;
                    try {
                        point_state<S>(sL, pL, cL, FL);
                        point_state<S>(sR, pR, cR, FR);
                    } catch (const NonphysicalState& err) {
                        fail(err, e, fp, a == 0 ? " at x- face point" : a == 1 ? " at y- face point" : " at z- face point");
                    }
                    const Real unL = a == 0 ? pL.u : a == 1 ? pL.v : pL.w;
                    const Real unR = a == 0 ? pR.u : a == 1 ? pR.v : pR.w;
                    const Real s = std::max(std::abs(unL) + std::sqrt(gamma_ * pL.p / pL.rho),
                                            std::abs(unR) + std::sqrt(gamma_ * pR.p / pR.rho));
                    const auto qa = as_array(cL), qb = as_array(cR);
                    for (int c = 0; c < 5; ++c)
                        common(common_, e, a, c)[fp] =
                            Real(0.5) * (FL[a][c] + FR[a][c]) - Real(0.5) * s * (qb[c] - qa[c]);
                }
            }
            if (viscous_) {
                // B and D differentiate primitives: their face values are the
                // extrapolated stored states converted at the face.
                if (needs_prim_copy()) {
                    for (int fp = 0; fp < nf_; ++fp) {
                        Real sL[5], sR[5];
                        for (int c = 0; c < 5; ++c) {
                            sL[c] = trace(traceS_, l, 2 * a + 1, c)[fp];
                            sR[c] = trace(traceS_, e, 2 * a, c)[fp];
                        }
                        Primitive<Real> pL, pR;
                        try {
                            pL = face_primitive<S>(sL);
                            pR = face_primitive<S>(sR);
                        } catch (const NonphysicalState& err) {
                            fail(err, e, fp, " at face point");
                        }
                        const auto wL = as_array(pL), wR = as_array(pR);
                        for (int c = 0; c < 5; ++c) {
                            trace(traceW_, l, 2 * a + 1, c)[fp] = wL[c];
                            trace(traceW_, e, 2 * a, c)[fp] = wR[c];
                        }
                    }
                }
                auto& tw = gradient_traces();
                for (int c = 0; c < 5; ++c) {
                    const Real* wl = trace(tw, l, 2 * a + 1, c);
                    const Real* wr = trace(tw, e, 2 * a, c);
                    Real* cw = common(commonW_, e, a, c);
                    for (int fp = 0; fp < nf_; ++fp) cw[fp] = Real(0.5) * (wl[fp] + wr[fp]);
                }
            }
        }
    }

    // Pass 3: corrected gradients, gradient blocks and viscous fluxes.  With
    // blocksOut set only the blocks are produced.
    template <Scheme S>
    void viscous_element(const SolutionField<Real>& field, long e, GradientBlock<Real>* blocksOut) {
        thread_local std::vector<Real> grad, fv, jl, jr;
        grad.resize(15 * static_cast<std::size_t>(nv_));
        jl.resize(nf_);
        jr.resize(nf_);

        const Real* q = field.element(e);
        const Real* W = needs_prim_copy() ? prim_.data() + static_cast<std::size_t>(e) * 5 * nv_ : q;
        auto& tw = gradient_traces();
        for (int a = 0; a < 3; ++a) {
            const long r = mesh_.neighbour(e, a, +1);
            for (int c = 0; c < 5; ++c) {
                const Real* lo = trace(tw, e, 2 * a, c);
                const Real* hi = trace(tw, e, 2 * a + 1, c);
                const Real* cl = common(commonW_, e, a, c);
                const Real* cr = common(commonW_, r, a, c);
                for (int fp = 0; fp < nf_; ++fp) {
                    jl[fp] = cl[fp] - lo[fp];
                    jr[fp] = cr[fp] - hi[fp];
                }
                corrected_derivative(W + c * nv_, a, jl.data(), jr.data(), grad.data() + (a * 5 + c) * nv_);
            }
        }

        if (!blocksOut) fv.resize(15 * static_cast<std::size_t>(nv_));
        for (int i = 0; i < nv_; ++i) {
            GradientBlock<Real> raw;
            for (int c = 0; c < 5; ++c)
                for (int a = 0; a < 3; ++a) raw[c][a] = grad[(a * 5 + c) * nv_ + i];
            GradientBlock<Real> gb;
            Real u, v, w;
            try {
                if constexpr (S == Scheme::C) {
                    const Conserved<Real> cons{q[i], q[nv_ + i], q[2 * nv_ + i], q[3 * nv_ + i], q[4 * nv_ + i]};
                    gb = grad_path_C(cons, raw, gas_);
                    const Real inv = Real(1) / cons.rho;
                    u = cons.mx * inv;
                    v = cons.my * inv;
                    w = cons.mz * inv;
                } else {
                    const Primitive<Real> prim{W[i], W[nv_ + i], W[2 * nv_ + i], W[3 * nv_ + i], W[4 * nv_ + i]};
                    gb = grad_path_B(prim, raw, gas_);
                    u = prim.u;
                    v = prim.v;
                    w = prim.w;
                }
            } catch (const NonphysicalState& err) {
                fail(err, e, i, " in gradient");
            }
            if (blocksOut) {
                blocksOut[i] = gb;
                continue;
            }
            const auto Fv = viscous_flux(u, v, w, gb, gas_);
            for (int a = 0; a < 3; ++a)
                for (int c = 1; c < 5; ++c) {
                    fv[(a * 5 + c) * nv_ + i] = Fv[a][c];
                    flux(e, a, c)[i] -= Fv[a][c];
                }
        }
        if (blocksOut) return;
        for (int a = 0; a < 3; ++a)
            for (int c = 1; c < 5; ++c)
                extrapolate(fv.data() + (a * 5 + c) * nv_, a, trace(traceFv_, e, 2 * a, c),
                            trace(traceFv_, e, 2 * a + 1, c));
    }

    // Pass 4: BR1 common viscous flux folded into the common total flux.
    void viscous_interfaces(long e) {
        for (int a = 0; a < 3; ++a) {
            const long l = mesh_.neighbour(e, a, -1);
            for (int c = 1; c < 5; ++c) {
                const Real* fl = trace(traceFv_, l, 2 * a + 1, c);
                const Real* fr = trace(traceFv_, e, 2 * a, c);
                Real* cf = common(common_, e, a, c);
                for (int fp = 0; fp < nf_; ++fp) cf[fp] -= Real(0.5) * (fl[fp] + fr[fp]);
            }
        }
    }

    // Pass 5: corrected flux divergence.
    void divergence(long e, Real* out) {
        thread_local std::vector<Real> lo, hi, jl, jr, tmp;
        lo.resize(nf_);
        hi.resize(nf_);
        jl.resize(nf_);
        jr.resize(nf_);
        tmp.resize(nv_);
        std::fill(out, out + 5 * nv_, Real(0));
        for (int a = 0; a < 3; ++a) {
            const long r = mesh_.neighbour(e, a, +1);
            for (int c = 0; c < 5; ++c) {
                const Real* F = flux(e, a, c);
                extrapolate(F, a, lo.data(), hi.data());
                const Real* cl = common(common_, e, a, c);
                const Real* cr = common(common_, r, a, c);
                for (int fp = 0; fp < nf_; ++fp) {
                    jl[fp] = cl[fp] - lo[fp];
                    jr[fp] = cr[fp] - hi[fp];
                }
                corrected_derivative(F, a, jl.data(), jr.data(), tmp.data());
                Real* o = out + c * nv_;
                for (int i = 0; i < nv_; ++i) o[i] -= tmp[i];
            }
        }
    }

    template <Scheme S>
    void residual_impl(const SolutionField<Real>& field, std::span<Real> out) {
        const long ne = mesh_.count();
        parallel_for(ne, [&](long e) { prepare_element<S>(field, e, true); });
        parallel_for(ne, [&](long e) { interfaces<S>(e, true); });
        if (viscous_) {
            parallel_for(ne, [&](long e) { viscous_element<S>(field, e, nullptr); });
            parallel_for(ne, [&](long e) { viscous_interfaces(e); });
        }
        parallel_for(ne, [&](long e) { divergence(e, out.data() + static_cast<std::size_t>(e) * 5 * nv_); });
    }

    Mesh mesh_;
    int p_, n_, nv_ = 1, nf_ = 1;
    Scheme scheme_;
    GasModel gas_;
    bool viscous_;
    ReferenceOps<Real> ops_;
    std::array<Real, 3> scale_{};
    std::array<std::vector<int>, 3> base_;
    std::array<int, 3> stride_{};
    Real gamma_{}, gm1_{};

    std::vector<Real> flux_, prim_, traceS_, traceW_, traceFv_, common_, commonW_;
};

/// One-shot conserved-variable residual of a field.
template <class Real>
std::vector<Real> residual_3d(const SolutionField<Real>& field, const GasModel& gas, bool viscous) {
    FrOperator<Real> op(field.mesh(), field.order(), field.scheme(), gas, viscous);
    std::vector<Real> out(field.values().size());
    op.residual(field, out);
    return out;
}

/// Largest |u_n| + a over all nodes and axes.
template <class Real>
double max_signal_speed(const SolutionField<Real>& field, const GasModel& gas) {
    double s = 0.0;
    for (long e = 0; e < field.elements(); ++e)
        for (int i = 0; i < field.nodes_per_element(); ++i) {
            const auto q = field.primitive(e, i, gas);
            const double a = std::sqrt(gas.gamma * q.p / q.rho);
            s = std::max({s, std::abs(double(q.u)) + a, std::abs(double(q.v)) + a, std::abs(double(q.w)) + a});
        }
    return s;
}

}  // namespace frx
