#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qtransfer/errors.hpp"

namespace qtransfer {

// Adaptive Dormand-Prince 5(4) configuration. h_max <= 0 means "auto":
// (t1 - t0) / 10, chosen when the integration window is known.
struct IntegratorConfig {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h0 = 1e-3;
    double h_min = 1e-12;
    double h_max = 0.0;
    std::int64_t max_steps = 5'000'000;

    void validate() const {
        if (!(rtol > 0.0 && rtol <= 1e-2)) throw ConfigError("rtol must be in (0, 1e-2]");
        if (!(atol > 0.0)) throw ConfigError("atol must be > 0");
        if (!(h_min > 0.0 && h0 >= h_min)) throw ConfigError("need 0 < h_min <= h0");
        if (h_max > 0.0 && h0 > h_max) throw ConfigError("need h0 <= h_max");
        if (max_steps <= 0) throw ConfigError("max_steps must be > 0");
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::int64_t accepted_steps = 0;
    std::int64_t rejected_steps = 0;
};

namespace dopri {

// Dormand-Prince 5(4) tableau. The 5th-order solution propagates; e[] gives
// the embedded 4th/5th difference.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

} // namespace dopri

namespace detail {

struct StepWorkspace {
    std::vector<double> k1, k2, k3, k4, k5, k6, k7, ytmp;
    void resize(std::size_t n) {
        k1.resize(n); k2.resize(n); k3.resize(n); k4.resize(n);
        k5.resize(n); k6.resize(n); k7.resize(n); ytmp.resize(n);
    }
};

// One embedded step. Writes the 5th-order solution into y5 and returns the
// weighted RMS error norm (infinity when the step produced non-finite data).
template <class Rhs>
double dopri5_step_ws(Rhs&& rhs, double t, std::span<const double> y, double h,
                      std::span<double> y5, const IntegratorConfig& cfg, StepWorkspace& ws) {
    using namespace dopri;
    const std::size_t n = y.size();
    ws.resize(n);
    auto& k1 = ws.k1; auto& k2 = ws.k2; auto& k3 = ws.k3; auto& k4 = ws.k4;
    auto& k5 = ws.k5; auto& k6 = ws.k6; auto& k7 = ws.k7; auto& yt = ws.ytmp;

    rhs(t, y.data(), k1.data());
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, yt.data(), k2.data());
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, yt.data(), k3.data());
    for (std::size_t i = 0; i < n; ++i)
        yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, yt.data(), k4.data());
    for (std::size_t i = 0; i < n; ++i)
        yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, yt.data(), k5.data());
    for (std::size_t i = 0; i < n; ++i)
        yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, yt.data(), k6.data());
    for (std::size_t i = 0; i < n; ++i)
        y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    rhs(t + h, y5.data(), k7.data());

    double sumsq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double err =
            h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double w = cfg.atol + cfg.rtol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
        const double q = err / w;
        sumsq += q * q;
        if (!std::isfinite(y5[i])) return std::numeric_limits<double>::infinity();
    }
    const double norm = std::sqrt(sumsq / static_cast<double>(n));
    return std::isfinite(norm) ? norm : std::numeric_limits<double>::infinity();
}

} // namespace detail

// Single embedded step, public form. Throws IntegrationError when the RHS
// produced non-finite output.
template <class Rhs>
std::pair<std::vector<double>, double> step_embedded(Rhs&& rhs, double t,
                                                     std::span<const double> y, double h,
                                                     const IntegratorConfig& cfg = {}) {
    if (!(h > 0.0)) throw ConfigError("step_embedded: h must be > 0");
    detail::StepWorkspace ws;
    std::vector<double> y5(y.size());
    const double err = detail::dopri5_step_ws(rhs, t, y, h, y5, cfg, ws);
    if (!std::isfinite(err))
        throw IntegrationError("step_embedded: non-finite state (numerical blowup)");
    return {std::move(y5), err};
}

// Adaptive integration from t0 to t1. The observer is called at t0 and after
// every accepted step. Step acceptance: err_norm <= 1; step update
// h *= clamp(0.9 * err^(-1/5), 0.2, 5.0), clamped to [h_min, h_max]; the final
// step is shortened to land exactly on t1 (and on sample points when the
// caller requests a cadence).
template <class Rhs, class Observer>
void integrate_observe(Rhs&& rhs, double t0, double t1, std::vector<double>& y,
                       const IntegratorConfig& cfg_in, Observer&& observe,
                       std::optional<double> sample_every = std::nullopt,
                       std::int64_t* accepted_out = nullptr,
                       std::int64_t* rejected_out = nullptr) {
    if (!(t0 < t1)) throw ConfigError("integrate: need t0 < t1");
    IntegratorConfig cfg = cfg_in;
    if (cfg.h_max <= 0.0) cfg.h_max = (t1 - t0) / 10.0;
    cfg.h0 = std::min(cfg.h0, cfg.h_max);
    cfg.validate();
    if (sample_every && !(*sample_every > 0.0))
        throw ConfigError("integrate: sample_every must be > 0");

    detail::StepWorkspace ws;
    std::vector<double> y5(y.size());
    double t = t0;
    double h = cfg.h0;
    std::int64_t accepted = 0, rejected = 0, attempts = 0;
    double next_sample = sample_every ? t0 + *sample_every : t1;

    observe(t, std::span<const double>(y));
    while (t < t1) {
        const double target = sample_every ? std::min(next_sample, t1) : t1;
        double h_try = std::min(h, cfg.h_max);
        if (t + h_try > target) h_try = target - t;
        if (h_try < cfg.h_min) h_try = cfg.h_min;
        if (++attempts > cfg.max_steps)
            throw IntegrationError("integrate: step budget exceeded");

        const double err = detail::dopri5_step_ws(rhs, t, std::span<const double>(y), h_try, y5,
                                                  cfg, ws);
        if (err <= 1.0) {
            t = (t + h_try >= target) ? target : t + h_try;
            std::copy(y5.begin(), y5.end(), y.begin());
            ++accepted;
            observe(t, std::span<const double>(y));
            if (sample_every && t >= next_sample - 1e-14 * std::fabs(next_sample))
                next_sample += *sample_every;
            const double grow = (err == 0.0) ? 5.0
                                             : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
            h = std::clamp(h_try * grow, cfg.h_min, cfg.h_max);
        } else {
            ++rejected;
            if (h_try <= cfg.h_min)
                throw IntegrationError("integrate: error control failed at h_min (stiffness)");
            const double shrink = std::isfinite(err)
                                      ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0)
                                      : 0.2;
            h = std::max(h_try * shrink, cfg.h_min);
        }
    }
    if (accepted_out) *accepted_out = accepted;
    if (rejected_out) *rejected_out = rejected;
}

// Trajectory-recording front end. Records t0, t1 and, when sample_every is
// given, every crossing of the cadence (recorded points land on the cadence
// exactly); otherwise every accepted step is kept.
template <class Rhs>
Trajectory integrate(Rhs&& rhs, double t0, double t1, std::vector<double> y0,
                     const IntegratorConfig& cfg = {},
                     std::optional<double> sample_every = std::nullopt) {
    Trajectory traj;
    double next_record = t0;
    integrate_observe(
        rhs, t0, t1, y0, cfg,
        [&](double t, std::span<const double> y) {
            if (!sample_every || t >= next_record - 1e-14 * std::max(1.0, std::fabs(t)) ||
                t == t1) {
                traj.times.push_back(t);
                traj.states.emplace_back(y.begin(), y.end());
                if (sample_every) next_record += *sample_every;
            }
        },
        sample_every, &traj.accepted_steps, &traj.rejected_steps);
    if (traj.times.back() != t1) {
        // unreachable by construction, kept as a cheap invariant
        throw IntegrationError("integrate: did not land on t1");
    }
    return traj;
}

// Final-state-only variant for hot loops (sweeps).
template <class Rhs>
std::vector<double> integrate_final(Rhs&& rhs, double t0, double t1, std::vector<double> y0,
                                    const IntegratorConfig& cfg = {},
                                    std::int64_t* accepted = nullptr,
                                    std::int64_t* rejected = nullptr) {
    integrate_observe(rhs, t0, t1, y0, cfg, [](double, std::span<const double>) {}, std::nullopt,
                      accepted, rejected);
    return y0;
}

// Classical fixed-step RK4, used as the independent oracle in tests.
template <class Rhs>
std::vector<double> rk4_fixed(Rhs&& rhs, double t0, double t1, std::vector<double> y,
                              double h) {
    const std::size_t n = y.size();
    std::vector<double> k1(n), k2(n), k3(n), k4(n), yt(n);
    double t = t0;
    while (t < t1 - 1e-15 * std::max(1.0, std::fabs(t1))) {
        const double hs = std::min(h, t1 - t);
        rhs(t, y.data(), k1.data());
        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + 0.5 * hs * k1[i];
        rhs(t + 0.5 * hs, yt.data(), k2.data());
        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + 0.5 * hs * k2[i];
        rhs(t + 0.5 * hs, yt.data(), k3.data());
        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + hs * k3[i];
        rhs(t + hs, yt.data(), k4.data());
        for (std::size_t i = 0; i < n; ++i)
            y[i] += hs / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t += hs;
    }
    return y;
}

} // namespace qtransfer
