#pragma once

// Polynomial aliasing analysis: Legendre projection, the aliasing-error
// energy, brute-force interpolation/gradient/interface remainders, and the
// closed-form factorial bounds for the u^2 / u^4 flux pair.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "frx/refelem.hpp"

namespace frx::alias {

using Sampler = std::function<double(double)>;

/// f(x) = sum_n coeffs[n] * P_n(x).
struct LegendreSeries {
    std::vector<double> coeffs;

    int max_order() const { return static_cast<int>(coeffs.size()) - 1; }

    double operator()(double x) const {
        // Clenshaw for the Legendre recurrence
        double b1 = 0.0, b2 = 0.0;
        for (int k = max_order(); k >= 0; --k) {
            const double alpha = (2.0 * k + 1.0) / (k + 1.0);
            const double beta = (k + 1.0) / (k + 2.0);
            const double b0 = coeffs[k] + alpha * x * b1 - beta * b2;
            b2 = b1;
            b1 = b0;
        }
        return b1;
    }

    /// Coefficients of d/dx, using P_n' = sum_{k = n-1, n-3, ...} (2k+1) P_k.
    LegendreSeries derivative() const {
        LegendreSeries d;
        const int n = max_order();
        if (n <= 0) {
            d.coeffs = {0.0};
            return d;
        }
        d.coeffs.assign(n, 0.0);
        for (int k = n - 1; k >= 0; --k) {
            double s = 0.0;
            for (int m = k + 1; m <= n; m += 2) s += coeffs[m];
            d.coeffs[k] = (2.0 * k + 1.0) * s;
        }
        return d;
    }
};

/// Least-squares (truncated) Legendre series of f up to maxOrder, with
/// inner products by a (quadOrder+1)-point Gauss rule.
inline LegendreSeries project_legendre(const Sampler& f, int maxOrder, int quadOrder) {
    if (maxOrder < 0) throw std::invalid_argument("project_legendre: maxOrder < 0");
    if (quadOrder < maxOrder)
        throw std::invalid_argument("project_legendre: quadOrder " + std::to_string(quadOrder) +
                                    " below maxOrder " + std::to_string(maxOrder) +
                                    " would alias the projection");
    std::vector<double> x, w;
    detail::gauss_legendre_nodes(quadOrder + 1, x, w);
    std::vector<double> fx(x.size());
    for (std::size_t q = 0; q < x.size(); ++q) fx[q] = f(x[q]);

    LegendreSeries s;
    s.coeffs.assign(maxOrder + 1, 0.0);
    for (int n = 0; n <= maxOrder; ++n) {
        long double acc = 0.0L;
        for (std::size_t q = 0; q < x.size(); ++q) acc += w[q] * fx[q] * legendre_eval(n, x[q]);
        s.coeffs[n] = static_cast<double>((2.0L * n + 1.0L) / 2.0L * acc);
    }
    return s;
}

/// L2 energy of the modes a degree-p space cannot hold:
///   sum_{n >= p} 2 c_n^2 / (2n + 1)
/// where c_n are the coefficients of the derivative series.
inline double aliasing_energy(const LegendreSeries& derivSeries, int p) {
    if (p < 0) throw std::invalid_argument("aliasing_energy: p < 0");
    double e = 0.0;
    for (int n = p; n <= derivSeries.max_order(); ++n) {
        const double c = derivSeries.coeffs[n];
        e += 2.0 * c * c / (2.0 * n + 1.0);
    }
    return e;
}

struct RemainderReport {
    int p = 0;
    double normInterp = 0.0;  // sup |f - L_p f|
    double normGrad = 0.0;    // sup |f' - (L_p f)'|
    double edgeL = 0.0;       // |(f - L_p f)(-1)|
    double edgeR = 0.0;       // |(f - L_p f)(+1)|
};

inline constexpr int kDenseGrid = 10001;

namespace detail {

/// Sixth-order central difference.
inline double central_diff(const Sampler& f, double x, double h = 1e-3) {
    return (45.0 * (f(x + h) - f(x - h)) - 9.0 * (f(x + 2 * h) - f(x - 2 * h)) +
            (f(x + 3 * h) - f(x - 3 * h))) /
           (60.0 * h);
}

}  // namespace detail

/// Brute-force remainders of interpolating f on the given nodes, evaluated on
/// a uniform grid of denseN points over [-1, 1].  When no derivative sampler
/// is supplied f' comes from finite differences.
inline RemainderReport remainder_report(const Sampler& f, std::span<const double> nodes,
                                        int denseN = kDenseGrid,
                                        const std::optional<Sampler>& derivative = std::nullopt) {
    if (denseN < 1000) throw std::invalid_argument("remainder_report: denseN must be >= 1000");
    if (nodes.empty()) throw std::invalid_argument("remainder_report: no nodes");
    frx::detail::require_distinct(nodes);

    std::vector<double> values(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) values[i] = f(nodes[i]);

    RemainderReport r;
    r.p = static_cast<int>(nodes.size()) - 1;
    for (int k = 0; k < denseN; ++k) {
        const double x = -1.0 + 2.0 * k / (denseN - 1);
        const double interp = lagrange_interp(nodes, values, x);
        const double dinterp = lagrange_interp_deriv(nodes, values, x);
        const double df = derivative ? (*derivative)(x) : detail::central_diff(f, x);
        r.normInterp = std::max(r.normInterp, std::abs(f(x) - interp));
        r.normGrad = std::max(r.normGrad, std::abs(df - dinterp));
    }
    r.edgeL = std::abs(f(-1.0) - lagrange_interp(nodes, values, -1.0));
    r.edgeR = std::abs(f(1.0) - lagrange_interp(nodes, values, 1.0));
    return r;
}

enum class FluxVariant { F2, F4 };

inline std::string to_string(FluxVariant v) { return v == FluxVariant::F2 ? "F2" : "F4"; }

/// Remainders of f = u^2 (F2) or f = u^4 (F4) sampled pointwise from the
/// series u and interpolated on the nodes.
inline RemainderReport flux_remainder_study(const LegendreSeries& u, FluxVariant variant,
                                            std::span<const double> nodes,
                                            int denseN = kDenseGrid) {
    const LegendreSeries du = u.derivative();
    Sampler f, df;
    if (variant == FluxVariant::F2) {
        f = [u](double x) { const double v = u(x); return v * v; };
        df = [u, du](double x) { return 2.0 * u(x) * du(x); };
    } else {
        f = [u](double x) { const double v = u(x); return v * v * v * v; };
        df = [u, du](double x) { const double v = u(x); return 4.0 * v * v * v * du(x); };
    }
    return remainder_report(f, nodes, denseN, df);
}

namespace detail {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_int factorial(int n) {
    cpp_int v = 1;
    for (int k = 2; k <= n; ++k) v *= k;
    return v;
}

inline cpp_int pow2(int n) { return cpp_int(1) << n; }

inline void check_bound_order(int p, const char* who) {
    if (p < 1) throw std::invalid_argument(std::string(who) + ": p must be >= 1");
    if (p > kMaxOrder)
        throw std::overflow_error(std::string(who) + ": p beyond " + std::to_string(kMaxOrder) +
                                  " is outside the supported range");
}

}  // namespace detail

/// (3p+1)! / (2^{2p} p! (2p)!) as an exact rational.
inline boost::multiprecision::cpp_rational f2_factor(int p) {
    using namespace detail;
    return cpp_rational(factorial(3 * p + 1), pow2(2 * p) * factorial(p) * factorial(2 * p));
}

/// (5p+1)! / (2^{4p} (3p)! (4p)!) as an exact rational.
inline boost::multiprecision::cpp_rational f4_factor(int p) {
    using namespace detail;
    return cpp_rational(factorial(5 * p + 1),
                        pow2(4 * p) * factorial(3 * p) * factorial(4 * p));
}

/// 4 (3p+1)! / (2^{2p} p! (2p)! (p+1)!) * maxCoeff.
inline double bound_r2(int p, double maxCoeff) {
    detail::check_bound_order(p, "bound_r2");
    const auto r = 4 * f2_factor(p) / detail::cpp_rational(detail::factorial(p + 1));
    return static_cast<double>(r) * maxCoeff;
}

/// 4 (5p+1)! / (2^{4p} (3p)! (4p)! (p+1)!) * maxCoeff.
inline double bound_r4(int p, double maxCoeff) {
    detail::check_bound_order(p, "bound_r4");
    const auto r = 4 * f4_factor(p) / detail::cpp_rational(detail::factorial(p + 1));
    return static_cast<double>(r) * maxCoeff;
}

/// The two sides of the claimed ordering f2_factor(p) <= f4_factor(p),
/// evaluated exactly.
struct FactorComparison {
    int p = 0;
    double f2 = 0.0;
    double f4 = 0.0;
    bool holds = false;
};

inline FactorComparison compare_factors(int p) {
    detail::check_bound_order(p, "compare_factors");
    const auto a = f2_factor(p);
    const auto b = f4_factor(p);
    return {p, static_cast<double>(a), static_cast<double>(b), a <= b};
}

/// Largest |coefficient| of the Legendre series of u^k for u of order p,
/// projected exactly (u^k has degree k*p).
inline double max_flux_coeff(const LegendreSeries& u, int power) {
    const int deg = power * u.max_order();
    auto f = [&u, power](double x) { return std::pow(u(x), power); };
    const auto s = project_legendre(f, deg, deg + 1);
    double m = 0.0;
    for (double c : s.coeffs) m = std::max(m, std::abs(c));
    return m;
}

/// How sweep coefficients are drawn: unit magnitude with random signs, or
/// uniform on [-1, 1].
enum class CoeffDraw { unit_sign, uniform };

/// Series of order p with coefficients +-1, signs drawn at random.
inline LegendreSeries random_unit_series(std::mt19937_64& rng, int p) {
    std::bernoulli_distribution sign(0.5);
    LegendreSeries u;
    u.coeffs.resize(p + 1);
    for (auto& c : u.coeffs) c = sign(rng) ? 1.0 : -1.0;
    return u;
}

/// Series of order p with coefficients drawn uniformly from [-1, 1].
inline LegendreSeries random_series(std::mt19937_64& rng, int p) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    LegendreSeries u;
    u.coeffs.resize(p + 1);
    for (auto& c : u.coeffs) c = coeff(rng);
    return u;
}

struct SweepRow {
    int p = 0;
    FluxVariant variant = FluxVariant::F2;
    RemainderReport median;  // field-wise medians over the samples
    double boundR2 = 0.0;    // median of bound_r2(p, max |coeff of u^2|)
    double boundR4 = 0.0;    // median of bound_r4(p, max |coeff of u^4|)
};

struct OrderingStat {
    int p = 0;
    int samples = 0;
    int f4AtLeastF2 = 0;  // samples with normInterp(F4) >= normInterp(F2)
    double medianRatio = 0.0;
};

struct RemainderSweep {
    std::vector<SweepRow> rows;
    std::vector<OrderingStat> ordering;
};

namespace detail {

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// For each p in [pMin, pMax]: `samples` random series on the p+1 Gauss
/// points, one engine seeded once for the whole sweep.
inline RemainderSweep remainder_sweep(int pMin, int pMax, int samples, unsigned long seed,
                                      int denseN = kDenseGrid, CoeffDraw draw = CoeffDraw::unit_sign) {
    if (pMin < 1 || pMax < pMin || pMax > kMaxOrder)
        throw std::invalid_argument("remainder_sweep: need 1 <= pMin <= pMax <= " + std::to_string(kMaxOrder));
    if (samples < 1) throw std::invalid_argument("remainder_sweep: samples must be >= 1");
    std::mt19937_64 rng(seed);
    RemainderSweep out;
    for (int p = pMin; p <= pMax; ++p) {
        const auto rule = gauss_legendre_rule(p);
        std::vector<double> f[2][4], ratio, b2, b4;
        OrderingStat stat{p, samples, 0, 0.0};
        for (int s = 0; s < samples; ++s) {
            const auto u = draw == CoeffDraw::unit_sign ? random_unit_series(rng, p) : random_series(rng, p);
            const auto r2 = flux_remainder_study(u, FluxVariant::F2, rule.points, denseN);
            const auto r4 = flux_remainder_study(u, FluxVariant::F4, rule.points, denseN);
            if (r4.normInterp >= r2.normInterp) ++stat.f4AtLeastF2;
            ratio.push_back(r4.normInterp / r2.normInterp);
            int v = 0;
            for (const auto* r : {&r2, &r4}) {
                f[v][0].push_back(r->normInterp);
                f[v][1].push_back(r->normGrad);
                f[v][2].push_back(r->edgeL);
                f[v][3].push_back(r->edgeR);
                ++v;
            }
            b2.push_back(bound_r2(p, max_flux_coeff(u, 2)));
            b4.push_back(bound_r4(p, max_flux_coeff(u, 4)));
        }
        stat.medianRatio = detail::median(ratio);
        out.ordering.push_back(stat);
        for (int v = 0; v < 2; ++v) {
            SweepRow row;
            row.p = p;
            row.variant = v == 0 ? FluxVariant::F2 : FluxVariant::F4;
            row.median = {p, detail::median(f[v][0]), detail::median(f[v][1]), detail::median(f[v][2]),
                          detail::median(f[v][3])};
            row.boundR2 = detail::median(b2);
            row.boundR4 = detail::median(b4);
            out.rows.push_back(row);
        }
    }
    return out;
}

}  // namespace frx::alias
