#pragma once

#include <string>
#include <string_view>

#include "qtransfer/errors.hpp"

namespace qtransfer {

// Pulse envelope families. SinWindow and CosWindow are the two branches of
// the windowed sin/cos pair: a quarter-period sine (signed) and cosine,
// supported on |t - center| <= width*pi/2 and zero outside.
enum class PulseShape { Gaussian, Sech, Lorentzian, Constant, SinWindow, CosWindow };

bool same_family(PulseShape a, PulseShape b);
std::string_view shape_name(PulseShape s);

struct PulseSpec {
    PulseShape shape = PulseShape::Gaussian;
    double amplitude = 1.0; // peak Rabi frequency Omega_0
    double width = 1.0;     // scale parameter sigma (or T for the windowed pair)
    double center = 0.0;    // t_c

    void validate() const; // amplitude >= 0, width > 0

    PulseSpec with_center(double c) const {
        PulseSpec p = *this;
        p.center = c;
        return p;
    }
    PulseSpec with_amplitude(double a) const {
        PulseSpec p = *this;
        p.amplitude = a;
        return p;
    }
    PulseSpec with_width(double w) const {
        PulseSpec p = *this;
        p.width = w;
        return p;
    }
};

// Envelope value Omega(t) and its analytic time derivative.
double eval_pulse(const PulseSpec& p, double t);
double eval_pulse_deriv(const PulseSpec& p, double t);

// Mixing angle Phi = atan2(Omega_1, Omega_2). Throws DomainError when both
// envelopes vanish at t.
double mixing_angle(const PulseSpec& p1, const PulseSpec& p2, double t);

// Phi_dot from the analytic envelope derivatives. Throws ConfigError for
// mixed shape families and DomainError when both envelopes vanish.
double nonadiabatic_coupling(const PulseSpec& p1, const PulseSpec& p2, double t);

struct CouplingValue {
    double value = 0.0;
    bool analytic = true; // false when the finite-difference fallback was used
};

// Same as nonadiabatic_coupling but falls back to a central finite difference
// of mixing_angle for mixed shape families, flagging the result.
CouplingValue nonadiabatic_coupling_or_numeric(const PulseSpec& p1, const PulseSpec& p2, double t);

// Omega_1(t)/Omega_2(t). Throws DomainError on zero denominator.
double pulse_ratio(const PulseSpec& p1, const PulseSpec& p2, double t);

enum class LimitKind { Zero, FiniteConstant, Infinite };

struct LimitTag {
    LimitKind kind = LimitKind::Zero;
    double value = 0.0; // set for FiniteConstant
};

struct AsymptoticClass {
    LimitTag limit_neg; // t -> -infinity
    LimitTag limit_pos; // t -> +infinity
};

// t -> +/-infinity behavior of the ratio Omega_1/Omega_2 per shape family.
// Throws ConfigError for mixed families, DomainError for the windowed pair
// (both envelopes vanish outside their supports).
AsymptoticClass classify_asymptotics(const PulseSpec& p1, const PulseSpec& p2);

// Integral of the envelope over [t0, t1], closed form per shape.
double pulse_area(const PulseSpec& p, double t0, double t1);

// Full-line area. Throws ConfigError for Constant (divergent).
double pulse_area_full(const PulseSpec& p);

// Half-width beyond the center after which the envelope stays below
// 1e-6 * amplitude (practical infinity per shape). Lorentzian uses the wide
// 40*sigma floor; callers integrating Lorentzians are expected to apply the
// doubling convergence check on top.
double coverage_halfwidth(const PulseSpec& p);

// Text form `shape:amp=<f>,width=<f>,center=<f>` (center optional, default 0).
// Parsing is case-insensitive. Shape names: gaussian, sech, lorentzian,
// constant, sinwin, coswin.
PulseSpec parse_pulse(std::string_view text);
std::string format_pulse(const PulseSpec& p);

} // namespace qtransfer
