#include "qtransfer/bloch2.hpp"

#include <cmath>

namespace qtransfer {

std::array<double, 3> pseudospin_rhs(const TorqueSpec& ts, double t, const PseudospinState& s) {
    const double omega = eval_pulse(ts.pulse, t);
    const double delta = ts.detuning;
    return {-delta * s.v, delta * s.u + omega * s.w, -omega * s.v};
}

PseudospinState rotation_solution(double theta, const PseudospinState& s0) {
    const double c = std::cos(theta);
    const double sn = std::sin(theta);
    return {s0.u, s0.w * sn + s0.v * c, -s0.v * sn + s0.w * c};
}

Bloch2Result simulate_two_level(const TorqueSpec& ts, double t0, double t1,
                                const PseudospinState& s0, const IntegratorConfig& cfg) {
    ts.pulse.validate();
    auto rhs = [&ts](double t, const double* y, double* dy) {
        const PseudospinState s{y[0], y[1], y[2]};
        const auto d = pseudospin_rhs(ts, t, s);
        dy[0] = d[0];
        dy[1] = d[1];
        dy[2] = d[2];
    };
    Bloch2Result out;
    std::vector<double> y{s0.u, s0.v, s0.w};
    const double norm0 = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    integrate_observe(
        rhs, t0, t1, y, cfg,
        [&out, norm0](double, std::span<const double> s) {
            const double n = std::sqrt(s[0] * s[0] + s[1] * s[1] + s[2] * s[2]);
            out.norm_drift = std::max(out.norm_drift, std::fabs(n - norm0));
        },
        std::nullopt, &out.accepted_steps, &out.rejected_steps);
    out.final_state = {y[0], y[1], y[2]};
    out.area = pulse_area(ts.pulse, t0, t1);
    return out;
}

} // namespace qtransfer
