#include "qtransfer/pulse.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qtransfer {

namespace {

constexpr double kPi = std::numbers::pi;

bool windowed(PulseShape s) { return s == PulseShape::SinWindow || s == PulseShape::CosWindow; }

// erf-based Gaussian antiderivative: int_0^x exp(-u^2/2) du = sqrt(pi/2) erf(x/sqrt(2))
double gauss_cdf_term(double x) { return std::sqrt(kPi / 2.0) * std::erf(x / std::sqrt(2.0)); }

// int sech(u) du = 2 atan(tanh(u/2)) (Gudermannian)
double sech_antideriv(double u) { return 2.0 * std::atan(std::tanh(0.5 * u)); }

} // namespace

bool same_family(PulseShape a, PulseShape b) {
    if (a == b) return true;
    return windowed(a) && windowed(b);
}

std::string_view shape_name(PulseShape s) {
    switch (s) {
        case PulseShape::Gaussian: return "gaussian";
        case PulseShape::Sech: return "sech";
        case PulseShape::Lorentzian: return "lorentzian";
        case PulseShape::Constant: return "constant";
        case PulseShape::SinWindow: return "sinwin";
        case PulseShape::CosWindow: return "coswin";
    }
    return "?";
}

void PulseSpec::validate() const {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw ConfigError("pulse amplitude must be >= 0");
    if (!(width > 0.0) || !std::isfinite(width))
        throw ConfigError("pulse width must be > 0");
    if (!std::isfinite(center)) throw ConfigError("pulse center must be finite");
}

double eval_pulse(const PulseSpec& p, double t) {
    const double u = t - p.center;
    switch (p.shape) {
        case PulseShape::Gaussian:
            return p.amplitude * std::exp(-u * u / (2.0 * p.width * p.width));
        case PulseShape::Sech:
            return p.amplitude / std::cosh(u / p.width);
        case PulseShape::Lorentzian:
            return p.amplitude * p.width * p.width / (u * u + p.width * p.width);
        case PulseShape::Constant:
            return p.amplitude;
        case PulseShape::SinWindow:
            return std::fabs(u) <= p.width * kPi / 2.0 ? p.amplitude * std::sin(u / p.width) : 0.0;
        case PulseShape::CosWindow:
            return std::fabs(u) <= p.width * kPi / 2.0 ? p.amplitude * std::cos(u / p.width) : 0.0;
    }
    return 0.0;
}

double eval_pulse_deriv(const PulseSpec& p, double t) {
    const double u = t - p.center;
    const double s = p.width;
    switch (p.shape) {
        case PulseShape::Gaussian:
            return eval_pulse(p, t) * (-u / (s * s));
        case PulseShape::Sech:
            return -p.amplitude / s * std::tanh(u / s) / std::cosh(u / s);
        case PulseShape::Lorentzian: {
            const double d = u * u + s * s;
            return -2.0 * p.amplitude * s * s * u / (d * d);
        }
        case PulseShape::Constant:
            return 0.0;
        case PulseShape::SinWindow:
            return std::fabs(u) <= s * kPi / 2.0 ? p.amplitude / s * std::cos(u / s) : 0.0;
        case PulseShape::CosWindow:
            return std::fabs(u) <= s * kPi / 2.0 ? -p.amplitude / s * std::sin(u / s) : 0.0;
    }
    return 0.0;
}

double mixing_angle(const PulseSpec& p1, const PulseSpec& p2, double t) {
    const double w1 = eval_pulse(p1, t);
    const double w2 = eval_pulse(p2, t);
    if (w1 == 0.0 && w2 == 0.0)
        throw DomainError("mixing angle undefined: both envelopes vanish");
    return std::atan2(w1, w2);
}

double nonadiabatic_coupling(const PulseSpec& p1, const PulseSpec& p2, double t) {
    if (!same_family(p1.shape, p2.shape))
        throw ConfigError("nonadiabatic coupling: mixed pulse shape families");
    const double w1 = eval_pulse(p1, t);
    const double w2 = eval_pulse(p2, t);
    const double den = w1 * w1 + w2 * w2;
    if (den == 0.0) throw DomainError("nonadiabatic coupling undefined: both envelopes vanish");
    const double d1 = eval_pulse_deriv(p1, t);
    const double d2 = eval_pulse_deriv(p2, t);
    return (d1 * w2 - w1 * d2) / den;
}

CouplingValue nonadiabatic_coupling_or_numeric(const PulseSpec& p1, const PulseSpec& p2, double t) {
    if (same_family(p1.shape, p2.shape)) return {nonadiabatic_coupling(p1, p2, t), true};
    const double h = 1e-6;
    const double fwd = mixing_angle(p1, p2, t + h);
    const double bwd = mixing_angle(p1, p2, t - h);
    return {(fwd - bwd) / (2.0 * h), false};
}

double pulse_ratio(const PulseSpec& p1, const PulseSpec& p2, double t) {
    const double w2 = eval_pulse(p2, t);
    if (w2 == 0.0) throw DomainError("pulse ratio: zero denominator");
    return eval_pulse(p1, t) / w2;
}

AsymptoticClass classify_asymptotics(const PulseSpec& p1, const PulseSpec& p2) {
    if (!same_family(p1.shape, p2.shape))
        throw ConfigError("classify_asymptotics: mixed pulse shape families");
    const double dt = p1.center - p2.center;
    const double s1 = p1.width, s2 = p2.width;
    const double a1 = p1.amplitude, a2 = p2.amplitude;
    auto fin = [](double v) { return LimitTag{LimitKind::FiniteConstant, v}; };
    const LimitTag zero{LimitKind::Zero, 0.0};
    const LimitTag inf{LimitKind::Infinite, 0.0};
    switch (p1.shape) {
        case PulseShape::Gaussian:
            if (s1 > s2) return {inf, inf};
            if (s1 < s2) return {zero, zero};
            if (dt > 0.0) return {zero, inf};
            if (dt < 0.0) return {inf, zero};
            return {fin(a1 / a2), fin(a1 / a2)};
        case PulseShape::Sech:
            if (s1 > s2) return {inf, inf};
            if (s1 < s2) return {zero, zero};
            return {fin(a1 / a2 * std::exp(-dt / s1)), fin(a1 / a2 * std::exp(dt / s1))};
        case PulseShape::Lorentzian: {
            const double r = a1 * s1 * s1 / (a2 * s2 * s2);
            return {fin(r), fin(r)};
        }
        case PulseShape::Constant:
            return {fin(a1 / a2), fin(a1 / a2)};
        case PulseShape::SinWindow:
        case PulseShape::CosWindow:
            throw DomainError("classify_asymptotics: windowed pulses vanish identically at infinity");
    }
    return {zero, zero};
}

double pulse_area(const PulseSpec& p, double t0, double t1) {
    if (t0 > t1) throw ConfigError("pulse_area: t0 must be <= t1");
    const double s = p.width;
    const double u0 = (t0 - p.center) / s;
    const double u1 = (t1 - p.center) / s;
    switch (p.shape) {
        case PulseShape::Gaussian:
            return p.amplitude * s * (gauss_cdf_term(u1) - gauss_cdf_term(u0));
        case PulseShape::Sech:
            return p.amplitude * s * (sech_antideriv(u1) - sech_antideriv(u0));
        case PulseShape::Lorentzian:
            return p.amplitude * s * (std::atan(u1) - std::atan(u0));
        case PulseShape::Constant:
            return p.amplitude * (t1 - t0);
        case PulseShape::SinWindow: {
            const double a = std::clamp(u0, -kPi / 2.0, kPi / 2.0);
            const double b = std::clamp(u1, -kPi / 2.0, kPi / 2.0);
            return p.amplitude * s * (std::cos(a) - std::cos(b));
        }
        case PulseShape::CosWindow: {
            const double a = std::clamp(u0, -kPi / 2.0, kPi / 2.0);
            const double b = std::clamp(u1, -kPi / 2.0, kPi / 2.0);
            return p.amplitude * s * (std::sin(b) - std::sin(a));
        }
    }
    return 0.0;
}

double pulse_area_full(const PulseSpec& p) {
    switch (p.shape) {
        case PulseShape::Gaussian:
            return p.amplitude * p.width * std::sqrt(2.0 * kPi);
        case PulseShape::Sech:
        case PulseShape::Lorentzian:
            return kPi * p.amplitude * p.width;
        case PulseShape::Constant:
            throw ConfigError("pulse_area_full: constant pulse has no full-line area");
        case PulseShape::SinWindow:
            return 0.0; // odd about the center
        case PulseShape::CosWindow:
            return 2.0 * p.amplitude * p.width;
    }
    return 0.0;
}

double coverage_halfwidth(const PulseSpec& p) {
    switch (p.shape) {
        case PulseShape::Gaussian:
            return 6.0 * p.width; // exp(-18) ~ 1.5e-8
        case PulseShape::Sech:
            return 16.0 * p.width; // sech(16) ~ 2.3e-7
        case PulseShape::Lorentzian:
            return 40.0 * p.width; // floor; callers double until converged
        case PulseShape::Constant:
            return 0.0;
        case PulseShape::SinWindow:
        case PulseShape::CosWindow:
            return p.width * kPi / 2.0; // exact support
    }
    return 0.0;
}

PulseSpec parse_pulse(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const auto colon = lower.find(':');
    if (colon == std::string::npos)
        throw ConfigError("pulse spec must look like shape:amp=<f>,width=<f>[,center=<f>]");
    const std::string name = lower.substr(0, colon);
    PulseSpec p;
    if (name == "gaussian" || name == "gauss") p.shape = PulseShape::Gaussian;
    else if (name == "sech") p.shape = PulseShape::Sech;
    else if (name == "lorentzian" || name == "lorentz") p.shape = PulseShape::Lorentzian;
    else if (name == "constant" || name == "const") p.shape = PulseShape::Constant;
    else if (name == "sinwin" || name == "sin") p.shape = PulseShape::SinWindow;
    else if (name == "coswin" || name == "cos") p.shape = PulseShape::CosWindow;
    else throw ConfigError("unknown pulse shape '" + name + "'");

    bool have_amp = false, have_width = false;
    std::stringstream rest(lower.substr(colon + 1));
    std::string field;
    while (std::getline(rest, field, ',')) {
        if (field.empty()) continue;
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw ConfigError("bad pulse field '" + field + "'");
        const std::string key = field.substr(0, eq);
        double value = 0.0;
        try {
            value = std::stod(field.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad numeric value in pulse field '" + field + "'");
        }
        if (key == "amp" || key == "amplitude") { p.amplitude = value; have_amp = true; }
        else if (key == "width" || key == "sigma") { p.width = value; have_width = true; }
        else if (key == "center") { p.center = value; }
        else throw ConfigError("unknown pulse field '" + key + "'");
    }
    if (!have_amp || !have_width)
        throw ConfigError("pulse spec needs amp=<f> and width=<f>");
    p.validate();
    return p;
}

std::string format_pulse(const PulseSpec& p) {
    std::ostringstream out;
    out << shape_name(p.shape) << ":amp=" << p.amplitude << ",width=" << p.width
        << ",center=" << p.center;
    return out.str();
}

} // namespace qtransfer
