#pragma once

// Classical four-stage, fourth-order Runge-Kutta with a fixed step, and a
// time loop that samples diagnostics and times each step.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "frx/core.hpp"

namespace frx {

struct MarchConfig {
    double dt = 0.0;
    double tEnd = 0.0;
    Precision precision = Precision::fp64;
    int sampleEvery = 1;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("MarchConfig: dt must be positive");
        if (!(tEnd >= 0.0)) throw std::invalid_argument("MarchConfig: tEnd must be non-negative");
        if (sampleEvery < 1) throw std::invalid_argument("MarchConfig: sampleEvery must be >= 1");
    }

    long steps() const {
        return static_cast<long>(std::ceil(tEnd / dt - 1e-9));
    }
};

/// A stage state went nonphysical during a step.
class Divergence : public std::runtime_error {
public:
    Divergence(long step, const std::string& what)
        : std::runtime_error("diverged at step " + std::to_string(step) + ": " + what), step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

/// Stage buffers for rk44_step, reusable across steps.
template <class State>
struct Rk44Workspace {
    State stage;
    using Real = std::remove_cvref_t<decltype(std::declval<State&>().values()[0])>;
    std::vector<Real> k, acc;
};

/// One classical RK4 step on state.values().  rate(const State&, span<Real>)
/// writes d(values)/dt.
template <class State, class Rate>
void rk44_step(State& y, double dt, Rate&& rate, Rk44Workspace<State>& ws) {
    using Real = typename Rk44Workspace<State>::Real;
    auto y0 = y.values();
    const std::size_t n = y0.size();
    ws.stage = y;
    ws.k.resize(n);
    ws.acc.resize(n);
    auto ys = ws.stage.values();
    const Real h = static_cast<Real>(dt);
    const Real half = h / Real(2);
    const Real sixth = h / Real(6);

    // k1
    rate(static_cast<const State&>(y), std::span<Real>(ws.k));
    for (std::size_t i = 0; i < n; ++i) {
        ws.acc[i] = ws.k[i];
        ys[i] = y0[i] + half * ws.k[i];
    }
    // k2
    rate(static_cast<const State&>(ws.stage), std::span<Real>(ws.k));
    for (std::size_t i = 0; i < n; ++i) {
        ws.acc[i] += Real(2) * ws.k[i];
        ys[i] = y0[i] + half * ws.k[i];
    }
    // k3
    rate(static_cast<const State&>(ws.stage), std::span<Real>(ws.k));
    for (std::size_t i = 0; i < n; ++i) {
        ws.acc[i] += Real(2) * ws.k[i];
        ys[i] = y0[i] + h * ws.k[i];
    }
    // k4
    rate(static_cast<const State&>(ws.stage), std::span<Real>(ws.k));
    for (std::size_t i = 0; i < n; ++i) y0[i] += sixth * (ws.acc[i] + ws.k[i]);
}

template <class State, class Rate>
void rk44_step(State& y, double dt, Rate&& rate) {
    Rk44Workspace<State> ws;
    rk44_step(y, dt, std::forward<Rate>(rate), ws);
}

struct DiagnosticSample {
    double Ek = 0.0;
    double eps2 = 0.0;
    double errRho = std::nan("");
};

struct DiagnosticRow {
    double t = 0.0;
    double Ek = 0.0;
    double eps1 = 0.0;
    double eps2 = 0.0;
    double errRho = std::nan("");
    double stepMs = 0.0;  // mean wall time of the steps since the previous row
};

struct DiagnosticsSeries {
    std::vector<DiagnosticRow> rows;
    std::vector<double> stepMs;  // every step
    bool diverged = false;
    std::string message;

    double mean_step_ms() const {
        if (stepMs.empty()) return 0.0;
        double s = 0.0;
        for (double v : stepMs) s += v;
        return s / static_cast<double>(stepMs.size());
    }
    double median_step_ms() const {
        if (stepMs.empty()) return 0.0;
        auto v = stepMs;
        std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
        double m = v[v.size() / 2];
        if (v.size() % 2 == 0) {
            const double lo = *std::max_element(v.begin(), v.begin() + v.size() / 2);
            m = 0.5 * (m + lo);
        }
        return m;
    }
};

/// eps1 = -dEk/dt by central differences of the sampled series (one-sided
/// at the ends).
inline void ke_dissipation_rate(std::vector<DiagnosticRow>& rows) {
    const std::size_t n = rows.size();
    if (n < 2) {
        for (auto& r : rows) r.eps1 = 0.0;
        return;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = i + 1 == n ? n - 1 : i + 1;
        rows[i].eps1 = -(rows[b].Ek - rows[a].Ek) / (rows[b].t - rows[a].t);
    }
}

/// Advances field to cfg.tEnd with fixed steps.  diagnostics(const State&, t)
/// is sampled at t = 0 and every sampleEvery steps.  A nonphysical stage
/// ends the run with the partial series flagged as diverged.
template <class State, class Rate, class Diagnose>
DiagnosticsSeries march(State& field, const MarchConfig& cfg, Rate&& rate, Diagnose&& diagnostics) {
    cfg.validate();
    DiagnosticsSeries out;
    const long steps = cfg.steps();
    const double dt = steps > 0 ? cfg.tEnd / static_cast<double>(steps) : cfg.dt;

    auto sample = [&](double t, double ms) {
        const DiagnosticSample s = diagnostics(static_cast<const State&>(field), t);
        out.rows.push_back({t, s.Ek, 0.0, s.eps2, s.errRho, ms});
    };
    sample(0.0, 0.0);

    Rk44Workspace<State> ws;
    double sinceSample = 0.0;
    for (long step = 1; step <= steps; ++step) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            rk44_step(field, dt, rate, ws);
        } catch (const NonphysicalState& err) {
            out.diverged = true;
            out.message = Divergence(step, err.what()).what();
            break;
        }
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        out.stepMs.push_back(ms);
        sinceSample += ms;
        if (step % cfg.sampleEvery == 0) {
            try {
                sample(static_cast<double>(step) * dt, sinceSample / cfg.sampleEvery);
            } catch (const NonphysicalState& err) {
                out.diverged = true;
                out.message = Divergence(step, err.what()).what();
                break;
            }
            sinceSample = 0.0;
        }
    }
    if (!out.diverged) {
        for (auto v : field.values())
            if (!std::isfinite(static_cast<double>(v))) {
                out.diverged = true;
                out.message = "non-finite state at end of run";
                break;
            }
    }
    ke_dissipation_rate(out.rows);
    return out;
}

}  // namespace frx
