#include "qtransfer/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "qtransfer/quadrature.hpp"

namespace qtransfer {

namespace {

constexpr double kPi = std::numbers::pi;

double omega_total(const PulseSpec& p1, const PulseSpec& p2, double t) {
    const double w1 = eval_pulse(p1, t);
    const double w2 = eval_pulse(p2, t);
    return std::sqrt(w1 * w1 + w2 * w2);
}

// Phi_dot, defined as zero where both envelopes vanish (the mixing direction
// is frozen there).
double phi_dot_or_zero(const PulseSpec& p1, const PulseSpec& p2, double t) {
    const double w1 = eval_pulse(p1, t);
    const double w2 = eval_pulse(p2, t);
    const double den = w1 * w1 + w2 * w2;
    if (den == 0.0) return 0.0;
    return (eval_pulse_deriv(p1, t) * w2 - w1 * eval_pulse_deriv(p2, t)) / den;
}

struct PhasedQuad {
    const PulseSpec& p1;
    const PulseSpec& p2;
    double inner_tol;

    double phase_piece(double a, double b) const {
        return integrate_adaptive(
            [this](double t) { return 0.5 * omega_total(p1, p2, t); }, a, b, inner_tol, 4);
    }

    // Adaptive Simpson for integrand f(t) * exp(-i tau(t)), carrying tau at
    // the nodes so the inner phase is only ever integrated over short pieces.
    template <class F>
    std::complex<double> recurse(F& f, double a, double tau_a, double b, double tau_b,
                                 std::complex<double> fa, std::complex<double> fm,
                                 std::complex<double> fb, std::complex<double> whole,
                                 double tau_m, double tol, int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double tau_lm = tau_a + phase_piece(a, lm);
        const double tau_rm = tau_m + phase_piece(m, rm);
        const std::complex<double> flm = f(lm, tau_lm);
        const std::complex<double> frm = f(rm, tau_rm);
        const std::complex<double> left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const std::complex<double> right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const std::complex<double> delta = left + right - whole;
        const double floor = 4.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(left) + std::abs(right));
        if (std::abs(delta) <= 15.0 * tol || std::abs(delta) <= floor)
            return left + right + delta / 15.0;
        if (depth <= 0)
            throw QuadratureError("failure integral: quadrature did not converge");
        return recurse(f, a, tau_a, m, tau_m, fa, flm, fm, left, tau_lm, 0.5 * tol, depth - 1) +
               recurse(f, m, tau_m, b, tau_b, fm, frm, fb, right, tau_rm, 0.5 * tol, depth - 1);
    }

    // int_{t0}^{t1} f(t) exp(-i tau(t)) dt with tau(t0) = 0.
    template <class F>
    std::complex<double> oscillatory(F f, double t0, double t1, double tol, int panels = 64,
                                     int max_depth = 44) const {
        std::complex<double> total{0.0, 0.0};
        const double h = (t1 - t0) / panels;
        double tau_left = 0.0;
        auto fw = [&](double t, double tau) { return f(t) * std::exp(std::complex<double>(0.0, -tau)); };
        for (int i = 0; i < panels; ++i) {
            const double a = t0 + i * h;
            const double b = (i + 1 == panels) ? t1 : t0 + (i + 1) * h;
            const double m = 0.5 * (a + b);
            const double tau_m = tau_left + phase_piece(a, m);
            const double tau_b = tau_m + phase_piece(m, b);
            const std::complex<double> fa = fw(a, tau_left);
            const std::complex<double> fm = fw(m, tau_m);
            const std::complex<double> fb = fw(b, tau_b);
            const std::complex<double> whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
            total += recurse(fw, a, tau_left, b, tau_b, fa, fm, fb, whole, tau_m, tol / panels,
                             max_depth);
            tau_left = tau_b;
        }
        return total;
    }
};

} // namespace

AngleState to_spherical(const std::array<double, 3>& c) {
    const double norm = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    if (std::fabs(norm - 1.0) > 1e-9)
        throw ConfigError("to_spherical: state vector must be normalized to 1e-9");
    AngleState a;
    a.theta = std::acos(std::clamp(c[2], -1.0, 1.0));
    const double s = std::sqrt(c[0] * c[0] + c[1] * c[1]);
    if (s < 1e-12) throw DomainError("to_spherical: azimuth undefined at the poles");
    a.phi = std::atan2(c[1], c[0]);
    return a;
}

std::array<double, 3> from_spherical(const AngleState& a) {
    return {std::sin(a.theta) * std::cos(a.phi), std::sin(a.theta) * std::sin(a.phi),
            std::cos(a.theta)};
}

AngleDeriv angle_rhs(double omega_tot, double mix_angle, const AngleState& a) {
    const double c = std::cos(a.theta);
    const double s = std::sin(a.theta);
    if (std::fabs(s) < 1e-12) throw DomainError("angle_rhs: singular at theta = 0 or pi");
    AngleDeriv d;
    // tan(theta - pi/2) = -cos(theta)/sin(theta)
    d.dphi = 0.5 * (-c / s) * omega_tot * std::cos(a.phi + mix_angle);
    d.dtheta = -0.5 * omega_tot * std::sin(a.phi + mix_angle);
    return d;
}

double rescaled_time(const PulseSpec& p1, const PulseSpec& p2, double t0, double t,
                     double abs_tol) {
    if (t == t0) return 0.0;
    return integrate_adaptive(
        [&](double u) { return 0.5 * omega_total(p1, p2, u); }, t0, t, abs_tol, 32);
}

DeviationPair linearized_deviations(const PulseSpec& p1, const PulseSpec& p2, double t0,
                                    double t1, double outer_tol) {
    p1.validate();
    p2.validate();
    const double phi0 = mixing_angle(p1, p2, t0);
    PhasedQuad q{p1, p2, 1e-11};
    const std::complex<double> conv =
        q.oscillatory([&](double t) { return phi_dot_or_zero(p1, p2, t); }, t0, t1, outer_tol);
    const double tau1 = rescaled_time(p1, p2, t0, t1, 1e-11);

    DeviationPair d;
    // delta_phi = Phi(t0) cos(tau1) + Re[e^{i tau1} I],
    // delta_theta = -Phi(t0) sin(tau1) - Im[e^{i tau1} I],
    // with I = int e^{-i tau(t')} Phi_dot dt'.
    const std::complex<double> rot = std::exp(std::complex<double>(0.0, tau1)) * conv;
    d.coherent_dphi = phi0 * std::cos(tau1);
    d.coherent_dtheta = -phi0 * std::sin(tau1);
    d.convolution_dphi = rot.real();
    d.convolution_dtheta = -rot.imag();
    d.dphi = d.coherent_dphi + d.convolution_dphi;
    d.dtheta = d.coherent_dtheta + d.convolution_dtheta;
    d.small_angle_ok = std::fabs(d.dphi) <= 0.3 && std::fabs(d.dtheta) <= 0.3;
    return d;
}

double failure_integral(const PulseSpec& p1, const PulseSpec& p2, double t0, double t1,
                        double outer_tol) {
    p1.validate();
    p2.validate();
    PhasedQuad q{p1, p2, 1e-11};
    const std::complex<double> i_conv =
        q.oscillatory([&](double t) { return phi_dot_or_zero(p1, p2, t); }, t0, t1, outer_tol);
    // |e^{i tau(t1)} I| = |I|; the inner phase from t to t1 differs from
    // -tau(t) by the constant tau(t1).
    return std::norm(i_conv);
}

double analytic_example_p(double x) {
    if (!(x > 0.0)) throw ConfigError("analytic_example_p: x must be > 0");
    const double s = std::sin(kPi * x / 4.0);
    return 16.0 * s * s / (x * x);
}

std::pair<PulseSpec, PulseSpec> make_sincos_pair(double omega0, double T) {
    PulseSpec pump{PulseShape::SinWindow, omega0, T, 0.0};
    PulseSpec coupling{PulseShape::CosWindow, omega0, T, 0.0};
    return {pump, coupling};
}

std::pair<double, double> sincos_window(double T) { return {-T * kPi / 2.0, T * kPi / 2.0}; }

} // namespace qtransfer
