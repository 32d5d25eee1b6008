#include "qtransfer/cavity4.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace qtransfer {

namespace {

enum Idx { A0A0 = 0, B0B0, B1B1, C0C0, E0E0, A0E0, A0B1, B1E0 };

// Window rule: coverage half-width beyond each center, with the delay as
// extra padding before the leading pulse. Lorentzian runs get a symmetric
// max(40 sigma, 20 dt) half-width and are widened further by the doubling
// check in run_cavity4_transfer.
std::pair<double, double> protocol_window(const PulseSpec& lead, const PulseSpec& trail) {
    const double delay = std::fabs(trail.center - lead.center);
    const double half = std::max(coverage_halfwidth(lead), coverage_halfwidth(trail));
    const double lo = std::min(lead.center, trail.center);
    const double hi = std::max(lead.center, trail.center);
    const bool lorentzian =
        lead.shape == PulseShape::Lorentzian || trail.shape == PulseShape::Lorentzian;
    if (lorentzian) {
        const double pad = std::max(half, 20.0 * delay);
        return {lo - pad, hi + pad};
    }
    return {lo - half - delay, hi + half};
}

double min_pulse_width(const Cavity4Config& cfg) {
    double w = cfg.pulse_omega.shape == PulseShape::Constant
                   ? std::numeric_limits<double>::infinity()
                   : cfg.pulse_omega.width;
    if (cfg.pulse_g.shape != PulseShape::Constant) w = std::min(w, cfg.pulse_g.width);
    return w;
}

TransferResult run_once(const Cavity4Config& cfg, const IntegratorConfig& icfg_in,
                        const Cavity4Options& opts) {
    IntegratorConfig icfg = icfg_in;
    const double span = cfg.window_t1 - cfg.window_t0;
    // Keep steps at or below the narrowest pulse so a localized envelope
    // interior to a wide window cannot be stepped over unsampled.
    const double cap = min_pulse_width(cfg);
    if (icfg.h_max <= 0.0) icfg.h_max = span / 10.0;
    if (std::isfinite(cap)) icfg.h_max = std::min(icfg.h_max, cap);
    icfg.h0 = std::min(icfg.h0, icfg.h_max);

    auto rhs = [&cfg](double t, const double* y, double* dy) { cavity4_rhs(cfg, t, y, dy); };

    TransferResult out;
    out.window_t0 = cfg.window_t0;
    out.window_t1 = cfg.window_t1;
    const double amp = std::max(cfg.pulse_omega.amplitude, cfg.pulse_g.amplitude);
    const double edge = std::max({std::fabs(eval_pulse(cfg.pulse_omega, cfg.window_t0)),
                                  std::fabs(eval_pulse(cfg.pulse_omega, cfg.window_t1)),
                                  std::fabs(eval_pulse(cfg.pulse_g, cfg.window_t0)),
                                  std::fabs(eval_pulse(cfg.pulse_g, cfg.window_t1))});
    out.endpoint_warning = edge > 1e-6 * amp;

    std::vector<double> y(kCavity4Dim, 0.0);
    y[A0A0] = 1.0;
    double max_trace_err = 0.0;
    double next_sample = cfg.window_t0;
    integrate_observe(
        rhs, cfg.window_t0, cfg.window_t1, y, icfg,
        [&](double t, std::span<const double> s) {
            out.peak_excited = std::max(out.peak_excited, s[E0E0]);
            const double tr = s[A0A0] + s[B0B0] + s[B1B1] + s[C0C0] + s[E0E0];
            max_trace_err = std::max(max_trace_err, std::fabs(tr - 1.0));
            if (opts.sample_every && t >= next_sample - 1e-12) {
                out.sample_times.push_back(t);
                out.samples.emplace_back(s.begin(), s.end());
                next_sample += *opts.sample_every;
            }
        },
        opts.sample_every, &out.accepted_steps, &out.rejected_steps);

    out.trace_drift = max_trace_err;
    out.populations = {{"rho_a0a0", y[A0A0]}, {"rho_b0b0", y[B0B0]}, {"rho_b1b1", y[B1B1]},
                       {"rho_c0c0", y[C0C0]}, {"rho_e0e0", y[E0E0]}};
    const double target_pop = cfg.target == TargetConvention::PhotonOnly
                                  ? y[B1B1]
                                  : y[B1B1] + y[B0B0];
    out.set_p(1.0 - target_pop);
    return out;
}

} // namespace

void Cavity4Config::validate() const {
    pulse_omega.validate();
    pulse_g.validate();
    if (gamma < 0.0 || kappa < 0.0) throw ConfigError("gamma and kappa must be >= 0");
    if (!(window_t0 < window_t1)) throw ConfigError("cavity4 window must satisfy t0 < t1");
}

void cavity4_rhs(const Cavity4Config& cfg, double t, const double y[8], double dy[8]) {
    const double w = eval_pulse(cfg.pulse_omega, t);
    const double g = eval_pulse(cfg.pulse_g, t);
    const double G = cfg.gamma;
    const double k = cfg.kappa;
    dy[A0A0] = -2.0 * w * y[A0E0] + G / 3.0 * y[E0E0];
    dy[B0B0] = G / 3.0 * y[E0E0] + k * y[B1B1];
    dy[B1B1] = -k * y[B1B1] - 2.0 * g * y[B1E0];
    dy[C0C0] = G / 3.0 * y[E0E0];
    dy[E0E0] = -G * y[E0E0] + 2.0 * w * y[A0E0] + 2.0 * g * y[B1E0];
    dy[A0E0] = -0.5 * G * y[A0E0] - w * (y[E0E0] - y[A0A0]) + g * y[A0B1];
    dy[A0B1] = -0.5 * k * y[A0B1] - w * y[B1E0] - g * y[A0E0];
    dy[B1E0] = -0.5 * (G + k) * y[B1E0] + w * y[A0B1] - g * (y[E0E0] - y[B1B1]);
}

std::array<double, 2> dark_state_family(double omega_val, double g_val, int n) {
    if (n < 0) throw ConfigError("dark_state_family: photon number must be >= 0");
    const double gg = 2.0 * g_val * std::sqrt(static_cast<double>(n) + 1.0);
    const double norm = std::sqrt(omega_val * omega_val + gg * gg);
    if (norm == 0.0) throw DomainError("dark_state_family: degenerate at Omega = g = 0");
    return {gg / norm, omega_val / norm};
}

std::array<double, kCavity4Dim> coupling_dark_density(double omega_val, double g_val) {
    const double n2 = omega_val * omega_val + g_val * g_val;
    if (n2 == 0.0) throw DomainError("coupling_dark_density: degenerate at Omega = g = 0");
    std::array<double, kCavity4Dim> rho{};
    rho[A0A0] = g_val * g_val / n2;
    rho[B1B1] = omega_val * omega_val / n2;
    rho[A0B1] = -g_val * omega_val / n2;
    return rho;
}

Cavity4Config make_adiabatic_config(PulseSpec omega, PulseSpec g, double delay, double gamma,
                                    double kappa, TargetConvention target) {
    if (delay < 0.0) throw ConfigError("adiabatic protocol: delay must be >= 0");
    g.center = 0.0;
    omega.center = delay;
    Cavity4Config cfg{omega, g, gamma, kappa, 0.0, 0.0, target};
    std::tie(cfg.window_t0, cfg.window_t1) = protocol_window(g, omega);
    cfg.validate();
    return cfg;
}

Cavity4Config make_pi_config(PulseSpec omega, PulseSpec g, double delay, double gamma,
                             double kappa, TargetConvention target) {
    if (delay < 0.0) throw ConfigError("pi protocol: delay must be >= 0");
    omega.center = 0.0;
    g.center = delay;
    Cavity4Config cfg{omega, g, gamma, kappa, 0.0, 0.0, target};
    std::tie(cfg.window_t0, cfg.window_t1) = protocol_window(omega, g);
    cfg.validate();
    return cfg;
}

TransferResult run_cavity4_transfer(const Cavity4Config& cfg_in, const IntegratorConfig& icfg,
                                    const Cavity4Options& opts) {
    Cavity4Config cfg = cfg_in;
    cfg.validate();
    TransferResult result = run_once(cfg, icfg, opts);
    const bool lorentzian = cfg.pulse_omega.shape == PulseShape::Lorentzian ||
                            cfg.pulse_g.shape == PulseShape::Lorentzian;
    if (lorentzian && opts.lorentzian_doubling) {
        // Lorentzian tails fall off only as 1/t^2; widen until log10 p settles.
        const double mid = 0.5 * (cfg.window_t0 + cfg.window_t1);
        double half = 0.5 * (cfg.window_t1 - cfg.window_t0);
        for (int i = 0; i < 6; ++i) {
            half *= 2.0;
            Cavity4Config wide = cfg;
            wide.window_t0 = mid - half;
            wide.window_t1 = mid + half;
            TransferResult next = run_once(wide, icfg, opts);
            result.window_doubled_delta = std::fabs(next.log10_p - result.log10_p);
            next.window_doubled_delta = result.window_doubled_delta;
            result = next;
            if (result.window_doubled_delta < 0.02) break;
        }
    }
    return result;
}

TransferResult adiabatic_transfer(const Cavity4Config& cfg, const IntegratorConfig& icfg,
                                  const Cavity4Options& opts) {
    if (cfg.pulse_omega.center < cfg.pulse_g.center)
        throw ConfigError("adiabatic protocol expects Omega delayed with respect to g");
    return run_cavity4_transfer(cfg, icfg, opts);
}

TransferResult pi_pulse_transfer(const Cavity4Config& cfg, const IntegratorConfig& icfg,
                                 const Cavity4Options& opts) {
    if (cfg.pulse_g.center < cfg.pulse_omega.center)
        throw ConfigError("pi protocol expects g delayed with respect to Omega");
    return run_cavity4_transfer(cfg, icfg, opts);
}

} // namespace qtransfer
