#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "frx/alias.hpp"
#include "oracle.hpp"

using namespace frx;
using namespace frx::alias;

namespace {

/// sum c_n P_n(x) with P_n from the monomial oracle.
double series_value(const std::vector<double>& c, double x, int from = 0) {
    long double s = 0.0L;
    for (int n = from; n < static_cast<int>(c.size()); ++n) s += c[n] * oracle::horner(oracle::legendre_monomial(n), x);
    return static_cast<double>(s);
}

LegendreSeries series_of(std::vector<double> c) {
    LegendreSeries s;
    s.coeffs = std::move(c);
    return s;
}

}  // namespace

TEST(Projection, SingleLegendreMode) {
    const auto s = project_legendre([](double x) { return legendre_eval(3, x); }, 3, 3);
    ASSERT_EQ(s.coeffs.size(), 4u);
    EXPECT_NEAR(s.coeffs[0], 0.0, 1e-15);
    EXPECT_NEAR(s.coeffs[1], 0.0, 1e-15);
    EXPECT_NEAR(s.coeffs[2], 0.0, 1e-15);
    EXPECT_NEAR(s.coeffs[3], 1.0, 1e-14);
}

TEST(Projection, Constant) {
    const auto s = project_legendre([](double) { return 5.0; }, 4, 6);
    EXPECT_NEAR(s.coeffs[0], 5.0, 1e-14);
    for (int n = 1; n <= 4; ++n) EXPECT_NEAR(s.coeffs[n], 0.0, 1e-14);
}

TEST(Projection, ExponentialAgainstAdaptiveQuadrature) {
    const auto s = project_legendre([](double x) { return std::exp(x); }, 8, 20);
    for (int n = 0; n <= 8; ++n) {
        const auto P = oracle::legendre_monomial(n);
        const double integral = oracle::adaptive_simpson(
            [&](double x) { return std::exp(x) * static_cast<double>(oracle::horner(P, x)); }, -1.0, 1.0, 1e-15);
        EXPECT_NEAR(s.coeffs[n], (2.0 * n + 1.0) / 2.0 * integral, 1e-10) << "n=" << n;
    }
}

TEST(Projection, QuadratureBelowOrderThrows) {
    EXPECT_THROW(project_legendre([](double x) { return x; }, 5, 4), std::invalid_argument);
    EXPECT_THROW(project_legendre([](double x) { return x; }, -1, 4), std::invalid_argument);
}

TEST(Projection, RoundTripOfRandomSeries) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto u = random_series(rng, 9);
        const auto back = project_legendre([&u](double x) { return u(x); }, 9, 12);
        for (int n = 0; n <= 9; ++n) EXPECT_NEAR(back.coeffs[n], u.coeffs[n], 1e-10);
    }
}

TEST(Series, ClenshawMatchesMonomialSum) {
    std::mt19937_64 rng(2);
    const auto u = random_series(rng, 7);
    for (double x : {-1.0, -0.61, 0.0, 0.33, 1.0}) EXPECT_NEAR(u(x), series_value(u.coeffs, x), 1e-13);
}

TEST(Series, DerivativeMatchesDifferentiatedPolynomial) {
    std::mt19937_64 rng(6);
    const auto u = random_series(rng, 6);
    const auto du = u.derivative();
    std::vector<double> mono(7, 0.0);
    for (int n = 0; n <= 6; ++n) {
        const auto P = oracle::legendre_monomial(n);
        for (std::size_t k = 0; k < P.size(); ++k) mono[k] += u.coeffs[n] * P[k];
    }
    const auto dmono = oracle::poly_deriv(mono);
    for (double x : {-1.0, -0.2, 0.45, 1.0}) EXPECT_NEAR(du(x), static_cast<double>(oracle::horner(dmono, x)), 1e-12);
}

TEST(AliasingEnergy, ZeroWhenHighModesVanish) {
    EXPECT_EQ(aliasing_energy(series_of({1.0, 2.0, 3.0, 0.0, 0.0}), 3), 0.0);
}

TEST(AliasingEnergy, SingleMode) {
    for (int p = 0; p <= 6; ++p) {
        std::vector<double> c(p + 1, 0.0);
        c[p] = 1.0;
        EXPECT_NEAR(aliasing_energy(series_of(c), p), 2.0 / (2.0 * p + 1.0), 1e-15);
    }
}

TEST(AliasingEnergy, EqualsQuadratureOfTruncationResidual) {
    std::mt19937_64 rng(99);
    std::vector<double> x, w;
    oracle::gauss_rule(16, x, w);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = random_series(rng, 8);
        const auto d = f.derivative();
        const int p = 3;
        double q = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = series_value(d.coeffs, x[i], p);
            q += w[i] * r * r;
        }
        EXPECT_NEAR(aliasing_energy(d, p), q, 1e-10 * q);
    }
}

TEST(Remainder, PolynomialOfDegreeAtMostPIsExact) {
    const auto r = gauss_legendre_rule(4);
    const auto rep = remainder_report([](double x) { return 1.0 - 2.0 * x + x * x * x * x; }, r.points);
    EXPECT_EQ(rep.p, 4);
    EXPECT_LE(rep.normInterp, 1e-12);
    EXPECT_LE(rep.normGrad, 1e-12);
    EXPECT_LE(rep.edgeL, 1e-12);
    EXPECT_LE(rep.edgeR, 1e-12);
}

TEST(Remainder, EndpointNodesGiveZeroEdgeError) {
    const std::vector<double> nodes{-1.0, -0.4, 0.3, 1.0};
    const auto rep = remainder_report([](double x) { return std::exp(2 * x); }, nodes);
    EXPECT_EQ(rep.edgeL, 0.0);
    EXPECT_EQ(rep.edgeR, 0.0);
    EXPECT_GT(rep.normInterp, 0.0);
}

TEST(Remainder, NextPowerMatchesNodalPolynomial) {
    // x^(p+1) minus its interpolant is the monic nodal polynomial.
    const int p = 4;
    const auto r = gauss_legendre_rule(p);
    const auto rep = remainder_report([](double x) { return std::pow(x, p + 1); }, r.points);
    double expect = 0.0;
    for (int k = 0; k < kDenseGrid; ++k) {
        const long double x = -1.0L + 2.0L * k / (kDenseGrid - 1);
        long double w = 1.0L;
        for (double xi : r.points) w *= x - xi;
        expect = std::max(expect, static_cast<double>(std::fabs(w)));
    }
    EXPECT_NEAR(rep.normInterp, expect, 1e-10);
}

TEST(Remainder, FieldsNonNegative) {
    const auto r = gauss_legendre_rule(3);
    const auto rep = remainder_report([](double x) { return std::sin(3 * x); }, r.points);
    EXPECT_GE(rep.normInterp, 0.0);
    EXPECT_GE(rep.normGrad, 0.0);
    EXPECT_GE(rep.edgeL, 0.0);
    EXPECT_GE(rep.edgeR, 0.0);
}

TEST(Remainder, DenseGridTooSmallThrows) {
    const auto r = gauss_legendre_rule(2);
    EXPECT_THROW(remainder_report([](double x) { return x; }, r.points, 999), std::invalid_argument);
}

TEST(Remainder, FiniteDifferenceAndAnalyticDerivativeAgree) {
    const auto r = gauss_legendre_rule(3);
    auto f = [](double x) { return std::exp(x) * std::sin(2 * x); };
    auto df = [](double x) { return std::exp(x) * (std::sin(2 * x) + 2 * std::cos(2 * x)); };
    const auto a = remainder_report(f, r.points, 2001);
    const auto b = remainder_report(f, r.points, 2001, df);
    EXPECT_NEAR(a.normGrad, b.normGrad, 1e-9);
}

TEST(FluxRemainder, ConstantStateHasNoRemainder) {
    const auto r = gauss_legendre_rule(3);
    const auto u = series_of({0.7, 0.0, 0.0, 0.0});
    for (auto v : {FluxVariant::F2, FluxVariant::F4}) {
        const auto rep = flux_remainder_study(u, v, r.points);
        EXPECT_LE(rep.normInterp, 1e-14);
        EXPECT_LE(rep.normGrad, 1e-13);
        EXPECT_LE(rep.edgeL, 1e-14);
        EXPECT_LE(rep.edgeR, 1e-14);
    }
}

TEST(FluxRemainder, MatchesBruteForceInterpolation) {
    std::mt19937_64 rng(31);
    const auto u = random_series(rng, 3);
    const auto r = gauss_legendre_rule(3);
    for (auto v : {FluxVariant::F2, FluxVariant::F4}) {
        const int k = v == FluxVariant::F2 ? 2 : 4;
        std::vector<double> nodal;
        for (double x : r.points) nodal.push_back(std::pow(series_value(u.coeffs, x), k));
        double worst = 0.0;
        for (int i = 0; i < kDenseGrid; ++i) {
            const double x = -1.0 + 2.0 * i / (kDenseGrid - 1);
            worst = std::max(worst, std::abs(std::pow(series_value(u.coeffs, x), k) -
                                             static_cast<double>(oracle::lagrange(r.points, nodal, x))));
        }
        EXPECT_NEAR(flux_remainder_study(u, v, r.points).normInterp, worst, 1e-12);
    }
}

TEST(FluxRemainder, UnitCoefficientsQuarticExceedsQuadraticAtP3) {
    const auto r = gauss_legendre_rule(3);
    const auto u = series_of({1.0, 1.0, 1.0, 1.0});
    EXPECT_GE(flux_remainder_study(u, FluxVariant::F4, r.points).normInterp,
              flux_remainder_study(u, FluxVariant::F2, r.points).normInterp);
}

TEST(FluxRemainder, UnitCoefficientRatioGrowsWithOrder) {
    double prev = 0.0;
    for (int p = 2; p <= 5; ++p) {
        const auto r = gauss_legendre_rule(p);
        const auto u = series_of(std::vector<double>(p + 1, 1.0));
        const double ratio = flux_remainder_study(u, FluxVariant::F4, r.points).normInterp /
                             flux_remainder_study(u, FluxVariant::F2, r.points).normInterp;
        EXPECT_GE(ratio, prev) << "p=" << p;
        prev = ratio;
    }
}

TEST(FluxRemainder, GradientRemainderExceedsInterfaceRemainder) {
    std::mt19937_64 rng(77);
    for (int p = 2; p <= 5; ++p) {
        const auto r = gauss_legendre_rule(p);
        double sum = 0.0;
        const int trials = 40;
        for (int t = 0; t < trials; ++t) {
            const auto f = random_series(rng, 2 * p);
            const auto df = f.derivative();
            const auto rep = remainder_report([&f](double x) { return f(x); }, r.points, 2001,
                                              Sampler([&df](double x) { return df(x); }));
            sum += rep.normGrad / std::max(rep.edgeL, rep.edgeR);
        }
        EXPECT_GE(sum / trials, 1.0) << "p=" << p;
    }
}

TEST(Bounds, PrintedValuesAtOrderOne) {
    EXPECT_EQ(bound_r2(1, 1.0), 6.0);
    EXPECT_EQ(bound_r4(1, 1.0), 0.625);
}

TEST(Bounds, LinearInCoefficient) {
    for (int p = 1; p <= kMaxOrder; ++p) {
        EXPECT_EQ(bound_r2(p, 0.0), 0.0);
        EXPECT_EQ(bound_r4(p, 0.0), 0.0);
        EXPECT_DOUBLE_EQ(bound_r2(p, 3.0), 3.0 * bound_r2(p, 1.0));
    }
}

TEST(Bounds, OrderRange) {
    EXPECT_THROW(bound_r2(0, 1.0), std::invalid_argument);
    EXPECT_THROW(bound_r4(0, 1.0), std::invalid_argument);
    EXPECT_THROW(bound_r2(kMaxOrder + 1, 1.0), std::overflow_error);
    EXPECT_THROW(bound_r4(kMaxOrder + 1, 1.0), std::overflow_error);
}

TEST(Bounds, FactorialFactorsAgainstDirectProducts) {
    auto fact = [](int n) { long double v = 1; for (int k = 2; k <= n; ++k) v *= k; return v; };
    for (int p = 1; p <= 6; ++p) {
        const long double f2 = fact(3 * p + 1) / (std::pow(2.0L, 2 * p) * fact(p) * fact(2 * p));
        const long double f4 = fact(5 * p + 1) / (std::pow(2.0L, 4 * p) * fact(3 * p) * fact(4 * p));
        const auto cmp = compare_factors(p);
        EXPECT_NEAR(cmp.f2, static_cast<double>(f2), 1e-12 * static_cast<double>(f2));
        EXPECT_NEAR(cmp.f4, static_cast<double>(f4), 1e-12 * static_cast<double>(f4));
        EXPECT_EQ(cmp.holds, f2 <= f4);
    }
}

TEST(Bounds, ClaimedFactorOrderingFailsAtOrderOne) {
    const auto cmp = compare_factors(1);
    EXPECT_EQ(cmp.f2, 3.0);
    EXPECT_EQ(cmp.f4, 0.3125);
    EXPECT_FALSE(cmp.holds);
}

TEST(Bounds, MaxFluxCoefficientOfSquare) {
    // (P0 + P1)^2 = 1 + 2x + x^2 = 4/3 P0 + 2 P1 + 2/3 P2
    const auto u = series_of({1.0, 1.0});
    EXPECT_NEAR(max_flux_coeff(u, 2), 2.0, 1e-13);
}

TEST(Sweep, DeterministicAndShaped) {
    const auto a = remainder_sweep(2, 3, 5, 42, 1001);
    const auto b = remainder_sweep(2, 3, 5, 42, 1001);
    ASSERT_EQ(a.rows.size(), 4u);
    ASSERT_EQ(a.ordering.size(), 2u);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].median.normInterp, b.rows[i].median.normInterp);
        EXPECT_EQ(a.rows[i].boundR2, b.rows[i].boundR2);
    }
    EXPECT_EQ(a.rows[0].variant, FluxVariant::F2);
    EXPECT_EQ(a.rows[1].variant, FluxVariant::F4);
    EXPECT_THROW(remainder_sweep(0, 3, 5, 1), std::invalid_argument);
}

TEST(Sweep, UnitSeriesHasUnitMagnitudeCoefficients) {
    std::mt19937_64 rng(3);
    int negative = 0;
    for (int k = 0; k < 50; ++k) {
        const auto u = random_unit_series(rng, 4);
        ASSERT_EQ(u.coeffs.size(), 5u);
        for (double c : u.coeffs) {
            EXPECT_EQ(std::abs(c), 1.0);
            negative += c < 0;
        }
    }
    EXPECT_GT(negative, 50);
    EXPECT_LT(negative, 200);
}

TEST(Sweep, DrawModesDiffer) {
    const auto a = remainder_sweep(2, 2, 5, 7, 1001, CoeffDraw::unit_sign);
    const auto b = remainder_sweep(2, 2, 5, 7, 1001, CoeffDraw::uniform);
    EXPECT_NE(a.rows[0].median.normInterp, b.rows[0].median.normInterp);
}
