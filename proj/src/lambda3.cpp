#include "qtransfer/lambda3.hpp"

#include <algorithm>
#include <cmath>

namespace qtransfer {

void lambda3_rhs(const Lambda3Params& par, double t, const double y[6], double dy[6]) {
    const double w1 = eval_pulse(par.pump, t);
    const double w2 = eval_pulse(par.stokes, t);
    const double da = par.delta1;
    const double db = par.delta1 + par.delta2;
    // C = (ca, cb, cc) complex; Cdot = -i H C, ca = y0 + i y1, ...
    const double re_ha = da * y[0] + 0.5 * w1 * y[4];
    const double im_ha = da * y[1] + 0.5 * w1 * y[5];
    const double re_hb = db * y[2] + 0.5 * w2 * y[4];
    const double im_hb = db * y[3] + 0.5 * w2 * y[5];
    const double re_hc = 0.5 * (w1 * y[0] + w2 * y[2]);
    const double im_hc = 0.5 * (w1 * y[1] + w2 * y[3]);
    dy[0] = im_ha;
    dy[1] = -re_ha;
    dy[2] = im_hb;
    dy[3] = -re_hb;
    dy[4] = im_hc;
    dy[5] = -re_hc;
}

DressedBasis dressed_states(double omega1, double omega2) {
    const double omega = std::sqrt(omega1 * omega1 + omega2 * omega2);
    if (omega == 0.0) throw DomainError("dressed_states: degenerate basis at Omega_1 = Omega_2 = 0");
    const double s = omega1 / omega; // sin Phi
    const double c = omega2 / omega; // cos Phi
    const double r = 1.0 / std::sqrt(2.0);
    DressedBasis b;
    b.w_plus = {r * s, r * c, r};
    b.w_zero = {c, -s, 0.0};
    b.w_minus = {r * s, r * c, -r};
    b.omega_plus = 0.5 * omega;
    b.omega_zero = 0.0;
    b.omega_minus = -0.5 * omega;
    return b;
}

double adiabaticity_margin(const PulseSpec& p1, const PulseSpec& p2, double t) {
    const double w1 = eval_pulse(p1, t);
    const double w2 = eval_pulse(p2, t);
    const double omega_eff = 0.5 * std::sqrt(w1 * w1 + w2 * w2);
    if (omega_eff == 0.0) throw DomainError("adiabaticity_margin: Omega_eff vanishes");
    return std::fabs(nonadiabatic_coupling(p1, p2, t)) / omega_eff;
}

std::pair<double, double> lambda3_window(const PulseSpec& p1, const PulseSpec& p2) {
    const double lo = std::min(p1.center - coverage_halfwidth(p1), p2.center - coverage_halfwidth(p2));
    const double hi = std::max(p1.center + coverage_halfwidth(p1), p2.center + coverage_halfwidth(p2));
    return {lo, hi};
}

TransferResult stirap_transfer(const PulseSpec& pump, const PulseSpec& stokes, double delta1,
                               double delta2, double t0, double t1, const IntegratorConfig& cfg,
                               const StirapOptions& opts) {
    pump.validate();
    stokes.validate();
    Lambda3Params par{pump, stokes, delta1, delta2};
    auto rhs = [&par](double t, const double* y, double* dy) { lambda3_rhs(par, t, y, dy); };

    TransferResult out;
    out.window_t0 = t0;
    out.window_t1 = t1;
    const double edge = std::max({std::fabs(eval_pulse(pump, t0)), std::fabs(eval_pulse(pump, t1)),
                                  std::fabs(eval_pulse(stokes, t0)),
                                  std::fabs(eval_pulse(stokes, t1))});
    out.endpoint_warning = edge > 1e-6 * std::max(pump.amplitude, stokes.amplitude);

    std::vector<double> y(6, 0.0);
    if (opts.initial) {
        std::copy(opts.initial->begin(), opts.initial->end(), y.begin());
    } else {
        y[0] = 1.0;
    }
    double norm0 = 0.0;
    for (double v : y) norm0 += v * v;

    double next_sample = t0;
    integrate_observe(
        rhs, t0, t1, y, cfg,
        [&](double t, std::span<const double> s) {
            const double pc = s[4] * s[4] + s[5] * s[5];
            out.peak_excited = std::max(out.peak_excited, pc);
            if (opts.sample_every && t >= next_sample - 1e-12) {
                out.sample_times.push_back(t);
                out.samples.emplace_back(s.begin(), s.end());
                next_sample += *opts.sample_every;
            }
        },
        opts.sample_every, &out.accepted_steps, &out.rejected_steps);

    const double pa = y[0] * y[0] + y[1] * y[1];
    const double pb = y[2] * y[2] + y[3] * y[3];
    const double pc = y[4] * y[4] + y[5] * y[5];
    out.populations = {{"p_a", pa}, {"p_b", pb}, {"p_c", pc}};
    out.trace_drift = std::fabs(pa + pb + pc - norm0);
    out.set_p(1.0 - pb);
    return out;
}

} // namespace qtransfer
