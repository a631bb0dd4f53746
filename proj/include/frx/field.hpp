#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include "frx/core.hpp"
#include "frx/gas.hpp"

namespace frx {

/// Uniform, fully periodic Cartesian hexahedral mesh.
struct Mesh {
    std::array<int, 3> elements{1, 1, 1};
    std::array<double, 3> lower{0.0, 0.0, 0.0};
    std::array<double, 3> extent{1.0, 1.0, 1.0};

    Mesh() = default;
    Mesh(std::array<int, 3> n, std::array<double, 3> lo, std::array<double, 3> len)
        : elements(n), lower(lo), extent(len) {
        for (int d = 0; d < 3; ++d) {
            if (n[d] < 1) throw std::invalid_argument("Mesh: need at least one element per axis");
            if (!(len[d] > 0.0)) throw std::invalid_argument("Mesh: extents must be positive");
        }
    }

    double h(int axis) const { return extent[axis] / elements[axis]; }
    /// dx/dxi per axis.
    double jacobian(int axis) const { return 0.5 * h(axis); }
    long count() const { return static_cast<long>(elements[0]) * elements[1] * elements[2]; }
    double volume() const { return extent[0] * extent[1] * extent[2]; }

    long index(int ex, int ey, int ez) const {
        return ex + static_cast<long>(elements[0]) * (ey + static_cast<long>(elements[1]) * ez);
    }
    std::array<int, 3> coords(long e) const {
        const int ex = static_cast<int>(e % elements[0]);
        const long r = e / elements[0];
        return {ex, static_cast<int>(r % elements[1]), static_cast<int>(r / elements[1])};
    }
    /// Periodic neighbour of e along axis; dir is -1 or +1.
    long neighbour(long e, int axis, int dir) const {
        auto c = coords(e);
        c[axis] = (c[axis] + dir + elements[axis]) % elements[axis];
        return index(c[0], c[1], c[2]);
    }
    /// Physical coordinate of reference point xi in element slot i along axis.
    double coordinate(int axis, int i, double xi) const {
        return lower[axis] + h(axis) * (i + 0.5 * (xi + 1.0));
    }
};

/// Nodal state of every element in the scheme's stored variable set.
/// Layout: data[((e * 5) + var) * nodes + node], node = i + n (j + n k).
///   A: (rho, u, v, w, p)   B, C: (rho, rho u, rho v, rho w, E)   D: (rho, rho u, rho v, rho w, p)
template <class Real>
class SolutionField {
public:
    using value_type = Real;

    SolutionField() = default;
    SolutionField(Scheme scheme, int p, const Mesh& mesh)
        : scheme_(scheme), p_(p), n_(p + 1), mesh_(mesh) {
        if (p < 0) throw std::invalid_argument("SolutionField: order must be >= 0");
        nodes_ = n_ * n_ * n_;
        data_.assign(static_cast<std::size_t>(mesh.count()) * 5 * nodes_, Real(0));
    }

    Scheme scheme() const { return scheme_; }
    int order() const { return p_; }
    int points_per_axis() const { return n_; }
    int nodes_per_element() const { return nodes_; }
    const Mesh& mesh() const { return mesh_; }
    long elements() const { return mesh_.count(); }
    static constexpr Precision precision() {
        return sizeof(Real) == sizeof(float) ? Precision::fp32 : Precision::fp64;
    }

    std::span<Real> values() { return data_; }
    std::span<const Real> values() const { return data_; }

    Real* element(long e) { return data_.data() + static_cast<std::size_t>(e) * 5 * nodes_; }
    const Real* element(long e) const {
        return data_.data() + static_cast<std::size_t>(e) * 5 * nodes_;
    }
    Real& at(long e, int var, int node) { return element(e)[var * nodes_ + node]; }
    Real at(long e, int var, int node) const { return element(e)[var * nodes_ + node]; }

    Vec5<Real> stored(long e, int node) const {
        const Real* q = element(e);
        return {q[node], q[nodes_ + node], q[2 * nodes_ + node], q[3 * nodes_ + node],
                q[4 * nodes_ + node]};
    }
    void set_stored(long e, int node, const Vec5<Real>& v) {
        Real* q = element(e);
        for (int c = 0; c < 5; ++c) q[c * nodes_ + node] = v[c];
    }

    /// Writes a primitive state in this field's stored form.
    void set_primitive(long e, int node, const Primitive<Real>& q, const GasModel& gas) {
        switch (scheme_) {
        case Scheme::A: set_stored(e, node, as_array(q)); break;
        case Scheme::B:
        case Scheme::C: set_stored(e, node, as_array(prim_to_cons(q, gas))); break;
        case Scheme::D: set_stored(e, node, as_array(prim_to_mixed(q))); break;
        }
    }

    Primitive<Real> primitive(long e, int node, const GasModel& gas) const {
        const auto s = stored(e, node);
        switch (scheme_) {
        case Scheme::A: {
            const Primitive<Real> q{s[0], s[1], s[2], s[3], s[4]};
            detail::require_positive_density(q.rho);
            detail::require_positive_pressure(q.p);
            return q;
        }
        case Scheme::B:
        case Scheme::C: return cons_to_prim(Conserved<Real>{s[0], s[1], s[2], s[3], s[4]}, gas);
        case Scheme::D: {
            const auto q = mixed_to_prim(Mixed<Real>{s[0], s[1], s[2], s[3], s[4]});
            detail::require_positive_pressure(q.p);
            return q;
        }
        }
        return {};
    }

    Conserved<Real> conserved(long e, int node, const GasModel& gas) const {
        const auto s = stored(e, node);
        switch (scheme_) {
        case Scheme::A: return prim_to_cons(Primitive<Real>{s[0], s[1], s[2], s[3], s[4]}, gas);
        case Scheme::B:
        case Scheme::C: return {s[0], s[1], s[2], s[3], s[4]};
        case Scheme::D: return mixed_to_cons(Mixed<Real>{s[0], s[1], s[2], s[3], s[4]}, gas);
        }
        return {};
    }

    /// Physical position of a node.
    std::array<double, 3> position(long e, int node, const std::vector<double>& xi) const {
        const auto c = mesh_.coords(e);
        const int i = node % n_, j = (node / n_) % n_, k = node / (n_ * n_);
        return {mesh_.coordinate(0, c[0], xi[i]), mesh_.coordinate(1, c[1], xi[j]),
                mesh_.coordinate(2, c[2], xi[k])};
    }

private:
    Scheme scheme_ = Scheme::B;
    int p_ = 0;
    int n_ = 1;
    int nodes_ = 1;
    Mesh mesh_;
    std::vector<Real> data_;
};

/// Copy of a field converted to another storage scheme (and precision).
template <class To, class From>
SolutionField<To> convert_field(const SolutionField<From>& src, Scheme scheme,
                                const GasModel& gas) {
    SolutionField<To> dst(scheme, src.order(), src.mesh());
    for (long e = 0; e < src.elements(); ++e)
        for (int n = 0; n < src.nodes_per_element(); ++n) {
            const auto q = src.primitive(e, n, gas);
            dst.set_primitive(e, n, Primitive<To>{static_cast<To>(q.rho), static_cast<To>(q.u),
                                                  static_cast<To>(q.v), static_cast<To>(q.w),
                                                  static_cast<To>(q.p)},
                              gas);
        }
    return dst;
}

}  // namespace frx
