#pragma once

// Run orchestration: builds the case, marches every requested scheme, and
// writes diagnostics CSVs, the timing report or the remainder table.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "frx/alias.hpp"
#include "frx/cases.hpp"
#include "frx/config.hpp"
#include "frx/frcore.hpp"
#include "frx/march.hpp"

namespace frx {

enum ExitStatus : int { kCompleted = 0, kError = 1, kDiverged = 2 };

struct SchemeResult {
    Scheme scheme = Scheme::A;
    DiagnosticsSeries series;
    double dt = 0.0;
    std::string csvPath;
};

struct TimingRow {
    Scheme scheme = Scheme::A;
    double meanMs = 0.0;
    double savingPct = std::nan("");  // (t_A - t_X) / t_A * 100
};

inline IcvConfig icv_config(const RunConfig& c) {
    IcvConfig ic;
    ic.beta = c.beta;
    ic.elements = c.grid();
    ic.p = c.p;
    ic.gamma = c.gamma;
    return ic;
}

inline TgvConfig tgv_config(const RunConfig& c) {
    TgvConfig tc;
    tc.re = c.re;
    tc.ma = c.ma;
    tc.pr = c.pr;
    tc.gamma = c.gamma;
    tc.elements = c.grid();
    tc.p = c.p;
    return tc;
}

inline std::string csv_name(const RunConfig& c, Scheme s) {
    return to_string(c.kind) + "_" + std::string(to_string(s)) + "_" + std::string(to_string(c.precision)) +
           ".csv";
}

/// A flow case ready to march: initial field, operator and diagnostics.
template <class Real>
struct CaseSetup {
    SolutionField<Real> field;
    GasModel gas;
    FrOperator<Real> op;
    std::function<DiagnosticSample(const SolutionField<Real>&, double)> diagnose;
};

template <class Real>
CaseSetup<Real> make_case(const RunConfig& c, Scheme s) {
    if (c.kind == CaseKind::icv) {
        const IcvConfig ic = icv_config(c);
        auto field = icv_init<Real>(ic, s);
        const GasModel gas = ic.gas();
        FrOperator<Real> op(field.mesh(), ic.p, s, gas, false);
        auto diagnose = [ic, gas](const SolutionField<Real>& f, double t) {
            DiagnosticSample d;
            d.Ek = kinetic_energy(f, gas);
            d.errRho = density_error(f, gas, icv_exact(ic, t));
            return d;
        };
        return {std::move(field), gas, std::move(op), diagnose};
    }
    if (c.kind == CaseKind::tgv) {
        const TgvConfig tc = tgv_config(c);
        auto field = tgv_init<Real>(tc, s);
        const GasModel gas = tc.gas();
        FrOperator<Real> op(field.mesh(), tc.p, s, gas, true);
        // gradients need their own operator: the stepping one is in use
        auto probe = std::make_shared<FrOperator<Real>>(field.mesh(), tc.p, s, gas, true);
        auto blocks = std::make_shared<std::vector<GradientBlock<Real>>>();
        const double norm = tc.rho0 * tc.U0 * tc.U0;
        auto diagnose = [tc, gas, norm, probe, blocks](const SolutionField<Real>& f, double) {
            DiagnosticSample d;
            d.Ek = kinetic_energy(f, gas, norm);
            probe->gradients(f, *blocks);
            d.eps2 = enstrophy_dissipation(f, *blocks, gas, tc.rho0, tc.U0);
            return d;
        };
        return {std::move(field), gas, std::move(op), diagnose};
    }
    throw ConfigError("case: '" + to_string(c.kind) + "' is not a flow case");
}

/// Fixed step: the configured dt, or the CFL estimate from the initial
/// field; then shrunk so tEnd is a whole number of sampling intervals.
template <class Real>
MarchConfig march_config(const RunConfig& c, const SolutionField<Real>& field, const GasModel& gas) {
    MarchConfig mc;
    mc.tEnd = c.end_time();
    mc.precision = c.precision;
    mc.sampleEvery = c.sampleEvery;
    const double dt0 = c.dt ? *c.dt : cfl_time_step(field, gas, c.cfl, 0.0);
    if (mc.tEnd > 0.0) {
        const double intervals = std::ceil(mc.tEnd / (dt0 * c.sampleEvery) - 1e-9);
        mc.dt = mc.tEnd / (intervals * c.sampleEvery);
    } else {
        mc.dt = dt0;
    }
    return mc;
}

template <class Real>
SchemeResult run_scheme(const RunConfig& c, Scheme s) {
    auto setup = make_case<Real>(c, s);
    const MarchConfig mc = march_config(c, setup.field, setup.gas);
    auto& op = setup.op;
    SchemeResult r;
    r.scheme = s;
    r.dt = mc.dt;
    r.series = march(setup.field, mc, [&op](const SolutionField<Real>& y, std::span<Real> k) { op.rate(y, k); },
                     setup.diagnose);
    return r;
}

/// Round-robin over the schemes so drifting machine load hits all of them;
/// one untimed warm-up step each.  Only the RK step is timed.
template <class Real>
std::vector<TimingRow> profile_schemes(const RunConfig& c) {
    const std::size_t ns = c.schemes.size();
    std::vector<CaseSetup<Real>> setups;
    std::vector<Rk44Workspace<SolutionField<Real>>> ws(ns);
    std::vector<double> dts;
    for (Scheme s : c.schemes) {
        setups.push_back(make_case<Real>(c, s));
        dts.push_back(march_config(c, setups.back().field, setups.back().gas).dt);
    }
    auto step = [&](std::size_t k) {
        auto& op = setups[k].op;
        rk44_step(setups[k].field, dts[k],
                  [&op](const SolutionField<Real>& y, std::span<Real> r) { op.rate(y, r); }, ws[k]);
    };
    for (std::size_t k = 0; k < ns; ++k) step(k);
    std::vector<double> total(ns, 0.0);
    for (int round = 0; round < c.profileSteps; ++round)
        for (std::size_t k = 0; k < ns; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            step(k);
            total[k] += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        }
    std::vector<TimingRow> rows;
    double tA = std::nan("");
    for (std::size_t k = 0; k < ns; ++k) {
        rows.push_back({c.schemes[k], total[k] / c.profileSteps, std::nan("")});
        if (c.schemes[k] == Scheme::A) tA = rows.back().meanMs;
    }
    for (auto& r : rows)
        if (!std::isnan(tA)) r.savingPct = (tA - r.meanMs) / tA * 100.0;
    return rows;
}

inline void write_timing_table(std::ostream& os, const std::vector<TimingRow>& rows) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-8s %12s %12s\n", "scheme", "mean_ms", "saving_pct");
    os << buf;
    for (const auto& r : rows) {
        if (std::isnan(r.savingPct))
            std::snprintf(buf, sizeof buf, "%-8s %12.4f %12s\n", std::string(to_string(r.scheme)).c_str(), r.meanMs,
                          "n/a");
        else
            std::snprintf(buf, sizeof buf, "%-8s %12.4f %12.2f\n", std::string(to_string(r.scheme)).c_str(), r.meanMs,
                          r.savingPct);
        os << buf;
    }
}

inline void write_remainder_csv(std::ostream& os, const alias::RemainderSweep& sweep) {
    os << "p,variant,normInterp,normGrad,edgeL,edgeR,bound_r2,bound_r4\n";
    char buf[512];
    for (const auto& r : sweep.rows) {
        std::snprintf(buf, sizeof buf, "%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.p,
                      alias::to_string(r.variant).c_str(), r.median.normInterp, r.median.normGrad, r.median.edgeL,
                      r.median.edgeR, r.boundR2, r.boundR4);
        os << buf;
    }
}

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    return f;
}

template <class Real>
int run_flow(const RunConfig& c, std::ostream& log) {
    const std::filesystem::path dir(c.output);
    if (c.profile) {
        const auto rows = profile_schemes<Real>(c);
        write_timing_table(log, rows);
        auto f = open_output(dir / "timing.txt");
        write_timing_table(f, rows);
        return kCompleted;
    }
    int status = kCompleted;
    for (Scheme s : c.schemes) {
        auto r = run_scheme<Real>(c, s);
        const auto path = dir / csv_name(c, s);
        auto f = open_output(path);
        write_csv(f, r.series);
        const auto& last = r.series.rows.back();
        log << "scheme " << to_string(s) << ": " << (r.series.diverged ? "diverged" : "completed") << " t=" << last.t
            << " Ek=" << last.Ek;
        if (c.kind == CaseKind::icv) log << " err_rho=" << last.errRho;
        else log << " eps2=" << last.eps2;
        log << " mean_step_ms=" << r.series.mean_step_ms() << " -> " << path.string() << "\n";
        if (r.series.diverged) {
            log << "  " << r.series.message << "\n";
            status = kDiverged;
        }
    }
    return status;
}

}  // namespace detail

/// Executes a validated configuration.  Returns kCompleted, or kDiverged when
/// any scheme diverged (its partial CSV is still written).  Errors throw.
inline int run(const RunConfig& c, std::ostream& log = std::cout) {
    validate(c);
    set_worker_count(c.threads);
    if (c.kind == CaseKind::remainder) {
        const auto sweep = alias::remainder_sweep(c.pMin, c.pMax, c.samples, c.seed);
        const auto path = std::filesystem::path(c.output) / "remainder.csv";
        auto f = detail::open_output(path);
        write_remainder_csv(f, sweep);
        for (const auto& o : sweep.ordering)
            log << "p=" << o.p << ": normInterp(F4) >= normInterp(F2) in " << o.f4AtLeastF2 << "/" << o.samples
                << ", median ratio " << o.medianRatio << "\n";
        log << "-> " << path.string() << "\n";
        return kCompleted;
    }
    return c.precision == Precision::fp32 ? detail::run_flow<float>(c, log) : detail::run_flow<double>(c, log);
}

}  // namespace frx
