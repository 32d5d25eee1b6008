#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qtransfer/pulse.hpp"
#include "qtransfer/quadrature.hpp"

using namespace qtransfer;

namespace {
constexpr double kPi = std::numbers::pi;

PulseSpec make(PulseShape s, double a, double w, double c = 0.0) { return {s, a, w, c}; }
} // namespace

TEST_CASE("envelope values at reference points") {
    CHECK(eval_pulse(make(PulseShape::Gaussian, 2.0, 1.0), 0.0) == doctest::Approx(2.0));
    CHECK(eval_pulse(make(PulseShape::Lorentzian, 1.0, 1.0), 1.0) == doctest::Approx(0.5));
    CHECK(eval_pulse(make(PulseShape::Sech, 1.0, 2.0, 3.0), 3.0) == doctest::Approx(1.0));
    CHECK(eval_pulse(make(PulseShape::Constant, 0.7, 1.0), 123.0) == doctest::Approx(0.7));
    // windowed pair: peak of the cos branch at its center, hard zero outside
    CHECK(eval_pulse(make(PulseShape::CosWindow, 2.0, 1.0), 0.0) == doctest::Approx(2.0));
    CHECK(eval_pulse(make(PulseShape::CosWindow, 2.0, 1.0), kPi / 2 + 0.01) == 0.0);
    CHECK(eval_pulse(make(PulseShape::SinWindow, 2.0, 1.0), -kPi / 4) ==
          doctest::Approx(-2.0 * std::sin(kPi / 4)));
}

TEST_CASE("symmetric envelopes are even about the center") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> offset(0.0, 4.0);
    for (PulseShape s : {PulseShape::Gaussian, PulseShape::Sech, PulseShape::Lorentzian,
                         PulseShape::Constant, PulseShape::CosWindow}) {
        const PulseSpec p = make(s, 1.7, 0.8, 0.4);
        for (int i = 0; i < 40; ++i) {
            const double d = offset(rng);
            CHECK(std::fabs(eval_pulse(p, p.center + d) - eval_pulse(p, p.center - d)) <
                  1e-12);
        }
    }
    // the sin branch is the odd partner by construction
    const PulseSpec sp = make(PulseShape::SinWindow, 1.0, 1.0);
    CHECK(eval_pulse(sp, 0.5) == doctest::Approx(-eval_pulse(sp, -0.5)));
}

TEST_CASE("peak is attained only at the center for localized shapes") {
    for (PulseShape s : {PulseShape::Gaussian, PulseShape::Sech, PulseShape::Lorentzian}) {
        const PulseSpec p = make(s, 2.0, 1.3, -0.7);
        CHECK(eval_pulse(p, p.center) == doctest::Approx(p.amplitude));
        for (double d : {0.1, 0.5, 2.0, 10.0}) {
            CHECK(eval_pulse(p, p.center + d) < p.amplitude);
            CHECK(eval_pulse(p, p.center - d) < p.amplitude);
        }
    }
}

TEST_CASE("mixing angle") {
    const PulseSpec g1 = make(PulseShape::Gaussian, 1.0, 1.0);
    SUBCASE("equal envelopes give pi/4") {
        CHECK(mixing_angle(g1, g1, 0.3) == doctest::Approx(kPi / 4));
    }
    SUBCASE("vanishing first pulse gives 0") {
        const PulseSpec off = make(PulseShape::Gaussian, 0.0, 1.0);
        CHECK(mixing_angle(off, g1, 0.0) == doctest::Approx(0.0));
    }
    SUBCASE("delayed equal-width pair tends to pi/2") {
        const PulseSpec delayed = g1.with_center(1.0);
        CHECK(mixing_angle(delayed, g1, 25.0) == doctest::Approx(kPi / 2).epsilon(1e-9));
    }
    SUBCASE("both zero is an error") {
        const PulseSpec c1 = make(PulseShape::CosWindow, 1.0, 1.0);
        CHECK_THROWS_AS((void)mixing_angle(c1, c1, 10.0), DomainError);
    }
}

TEST_CASE("nonadiabatic coupling reference values") {
    SUBCASE("proportional pulses have zero coupling") {
        const PulseSpec a = make(PulseShape::Sech, 2.0, 1.5);
        const PulseSpec b = make(PulseShape::Sech, 0.5, 1.5);
        for (double t : {-2.0, 0.0, 0.7, 3.0})
            CHECK(std::fabs(nonadiabatic_coupling(a, b, t)) < 1e-15);
    }
    SUBCASE("equal gaussians, dt = 1, at the midpoint") {
        const PulseSpec p1 = make(PulseShape::Gaussian, 1.0, 1.0, 1.0);
        const PulseSpec p2 = make(PulseShape::Gaussian, 1.0, 1.0, 0.0);
        CHECK(nonadiabatic_coupling(p1, p2, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("equal sech pulses against the finite-difference oracle") {
        const PulseSpec p1 = make(PulseShape::Sech, 1.0, 1.0, 2.0);
        const PulseSpec p2 = make(PulseShape::Sech, 1.0, 1.0, 0.0);
        const double h = 1e-6;
        const double fd = (mixing_angle(p1, p2, 1.0 + h) - mixing_angle(p1, p2, 1.0 - h)) / (2 * h);
        CHECK(nonadiabatic_coupling(p1, p2, 1.0) == doctest::Approx(fd).epsilon(1e-8));
        // midpoint of an equal pair: the coupling equals tanh(dt/2) here
        CHECK(nonadiabatic_coupling(p1, p2, 1.0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-12));
    }
    SUBCASE("mixed families: error, numeric fallback flagged") {
        const PulseSpec g = make(PulseShape::Gaussian, 1.0, 1.0, 1.0);
        const PulseSpec s = make(PulseShape::Sech, 1.0, 1.0);
        CHECK_THROWS_AS((void)nonadiabatic_coupling(g, s, 0.5), ConfigError);
        const auto fallback = nonadiabatic_coupling_or_numeric(g, s, 0.5);
        CHECK_FALSE(fallback.analytic);
        const double h = 1e-6;
        const double fd = (mixing_angle(g, s, 0.5 + h) - mixing_angle(g, s, 0.5 - h)) / (2 * h);
        CHECK(fallback.value == doctest::Approx(fd));
    }
}

TEST_CASE("analytic coupling matches the finite-difference oracle over random draws") {
    std::mt19937 rng(20250810);
    std::uniform_real_distribution<double> amp(0.3, 3.0), width(0.4, 2.5), dt(0.2, 2.0),
        tt(-2.0, 3.0);
    for (PulseShape s : {PulseShape::Gaussian, PulseShape::Sech, PulseShape::Lorentzian}) {
        int checked = 0;
        while (checked < 100) {
            const PulseSpec p1 = make(s, amp(rng), width(rng), dt(rng));
            const PulseSpec p2 = make(s, amp(rng), width(rng), 0.0);
            const double t = tt(rng);
            const double analytic = nonadiabatic_coupling(p1, p2, t);
            if (std::fabs(analytic) < 1e-3) continue; // keep the relative check conditioned
            const double h = 1e-6;
            const double fd = (mixing_angle(p1, p2, t + h) - mixing_angle(p1, p2, t - h)) / (2 * h);
            CHECK(analytic == doctest::Approx(fd).epsilon(1e-6));
            ++checked;
        }
    }
}

TEST_CASE("pulse ratio") {
    const PulseSpec p = make(PulseShape::Lorentzian, 2.0, 0.7, 0.0);
    CHECK(pulse_ratio(p, p, 1.3) == doctest::Approx(1.0));
    SUBCASE("lorentzian far-tail ratio approaches amp1 s1^2 / amp2 s2^2") {
        const PulseSpec p1 = make(PulseShape::Lorentzian, 2.0, 0.7, 3.0);
        const PulseSpec p2 = make(PulseShape::Lorentzian, 1.0, 1.1, 0.0);
        const double expect = 2.0 * 0.7 * 0.7 / (1.1 * 1.1);
        CHECK(pulse_ratio(p1, p2, 2000.0) == doctest::Approx(expect).epsilon(2e-2));
        CHECK(pulse_ratio(p1, p2, -2000.0) == doctest::Approx(expect).epsilon(2e-2));
    }
    SUBCASE("equal gaussians cross at half the delay") {
        const PulseSpec p1 = make(PulseShape::Gaussian, 1.5, 1.0, 2.0);
        const PulseSpec p2 = make(PulseShape::Gaussian, 1.5, 1.0, 0.0);
        CHECK(pulse_ratio(p1, p2, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("zero denominator") {
        const PulseSpec cz = make(PulseShape::CosWindow, 1.0, 1.0);
        CHECK_THROWS_AS((void)pulse_ratio(p, cz, 10.0), DomainError);
    }
}

TEST_CASE("asymptotic classification") {
    auto tag_is = [](const LimitTag& t, LimitKind k) { return t.kind == k; };
    SUBCASE("equal-width gaussians, positive delay") {
        const auto c = classify_asymptotics(make(PulseShape::Gaussian, 1.0, 1.0, 1.0),
                                            make(PulseShape::Gaussian, 1.0, 1.0, 0.0));
        CHECK(tag_is(c.limit_neg, LimitKind::Zero));
        CHECK(tag_is(c.limit_pos, LimitKind::Infinite));
    }
    SUBCASE("equal-width sechs, delay sigma") {
        const auto c = classify_asymptotics(make(PulseShape::Sech, 1.0, 1.0, 1.0),
                                            make(PulseShape::Sech, 1.0, 1.0, 0.0));
        REQUIRE(tag_is(c.limit_neg, LimitKind::FiniteConstant));
        REQUIRE(tag_is(c.limit_pos, LimitKind::FiniteConstant));
        CHECK(c.limit_neg.value == doctest::Approx(std::exp(-1.0)));
        CHECK(c.limit_pos.value == doctest::Approx(std::exp(1.0)));
    }
    SUBCASE("lorentzians are finite both ways regardless of delay") {
        const auto c = classify_asymptotics(make(PulseShape::Lorentzian, 1.0, 1.0, 4.2),
                                            make(PulseShape::Lorentzian, 1.0, 1.0, 0.0));
        REQUIRE(tag_is(c.limit_neg, LimitKind::FiniteConstant));
        CHECK(c.limit_neg.value == doctest::Approx(1.0));
        CHECK(c.limit_pos.value == doctest::Approx(1.0));
    }
    SUBCASE("width ordering dominates for gaussians and sechs") {
        for (PulseShape s : {PulseShape::Gaussian, PulseShape::Sech}) {
            const auto wide = classify_asymptotics(make(s, 1.0, 2.0, 1.0), make(s, 1.0, 1.0, 0.0));
            CHECK(tag_is(wide.limit_neg, LimitKind::Infinite));
            CHECK(tag_is(wide.limit_pos, LimitKind::Infinite));
            const auto narrow = classify_asymptotics(make(s, 1.0, 1.0, 1.0), make(s, 1.0, 2.0, 0.0));
            CHECK(tag_is(narrow.limit_neg, LimitKind::Zero));
            CHECK(tag_is(narrow.limit_pos, LimitKind::Zero));
        }
    }
    SUBCASE("mixed families rejected") {
        CHECK_THROWS_AS((void)classify_asymptotics(make(PulseShape::Gaussian, 1, 1),
                                                   make(PulseShape::Sech, 1, 1)),
                        ConfigError);
    }
}

TEST_CASE("classification agrees with the ratio at a far horizon") {
    auto horizon_check = [](const PulseSpec& p1, const PulseSpec& p2, double rel_tol) {
        const auto c = classify_asymptotics(p1, p2);
        const double far = 50.0 * std::max(p1.width, p2.width);
        const double hi = std::max(p1.center, p2.center) + far;
        const double lo = std::min(p1.center, p2.center) - far;
        auto agree = [&](const LimitTag& tag, double t) {
            const double r = pulse_ratio(p1, p2, t);
            switch (tag.kind) {
                case LimitKind::Zero: CHECK(r < 1e-6); break;
                case LimitKind::Infinite: CHECK(r > 1e6); break;
                case LimitKind::FiniteConstant:
                    CHECK(r == doctest::Approx(tag.value).epsilon(rel_tol));
                    break;
            }
        };
        agree(c.limit_neg, lo);
        agree(c.limit_pos, hi);
    };
    // gaussian envelopes underflow doubles at 50 sigma; 20 sigma clears the
    // 1e6 thresholds by many decades
    {
        const PulseSpec p1 = make(PulseShape::Gaussian, 1.2, 1.0, 1.0);
        const PulseSpec p2 = make(PulseShape::Gaussian, 0.8, 1.0);
        const auto cls = classify_asymptotics(p1, p2);
        CHECK(cls.limit_neg.kind == LimitKind::Zero);
        CHECK(cls.limit_pos.kind == LimitKind::Infinite);
        CHECK(pulse_ratio(p1, p2, -20.0) < 1e-6);
        CHECK(pulse_ratio(p1, p2, 21.0) > 1e6);
    }
    horizon_check(make(PulseShape::Sech, 1.0, 1.0, 1.0), make(PulseShape::Sech, 2.0, 1.0), 0.05);
    // the lorentzian ratio approaches its limit as 2 dt / t, so the 1% claim
    // needs the delay small against the 50-sigma horizon
    horizon_check(make(PulseShape::Lorentzian, 1.5, 0.8, 0.2), make(PulseShape::Lorentzian, 1.0, 1.2), 0.01);
}

TEST_CASE("pulse areas") {
    CHECK(pulse_area_full(make(PulseShape::Sech, 1.0, 1.0)) == doctest::Approx(kPi));
    CHECK(pulse_area_full(make(PulseShape::Gaussian, 1.0, 1.0)) ==
          doctest::Approx(std::sqrt(2.0 * kPi)));
    CHECK(pulse_area_full(make(PulseShape::Lorentzian, 2.0, 0.5)) == doctest::Approx(kPi));
    CHECK(pulse_area(make(PulseShape::Constant, 1.0, 1.0), 0.0, kPi) == kPi);
    CHECK_THROWS_AS((void)pulse_area_full(make(PulseShape::Constant, 1.0, 1.0)), ConfigError);

    SUBCASE("closed forms agree with quadrature") {
        struct Case { PulseSpec p; double t0, t1; };
        const Case cases[] = {
            {make(PulseShape::Gaussian, 1.3, 0.9, 0.2), -4.0, 5.0},
            {make(PulseShape::Sech, 0.8, 1.4, -1.0), -9.0, 6.0},
            {make(PulseShape::Lorentzian, 2.1, 0.6, 1.0), -20.0, 30.0},
            {make(PulseShape::Constant, 0.4, 1.0), -2.0, 7.0},
            // windowed shapes: integrate over the exact support (the sin
            // branch jumps at its edges) and over an interior slice
            {make(PulseShape::SinWindow, 1.1, 0.7, 0.3), 0.3 - 0.7 * kPi / 2, 0.3 + 0.7 * kPi / 2},
            {make(PulseShape::CosWindow, 1.1, 0.7, 0.3), 0.3 - 0.7 * kPi / 2, 0.3 + 0.7 * kPi / 2},
            {make(PulseShape::SinWindow, 1.1, 0.7, 0.3), -0.2, 0.9},
        };
        for (const auto& c : cases) {
            const double quad = integrate_adaptive(
                [&](double t) { return eval_pulse(c.p, t); }, c.t0, c.t1, 1e-12, 64);
            CHECK(pulse_area(c.p, c.t0, c.t1) == doctest::Approx(quad).epsilon(1e-9));
        }
    }
    SUBCASE("full-line closed forms agree with a wide quadrature") {
        for (PulseShape s : {PulseShape::Gaussian, PulseShape::Sech}) {
            const PulseSpec p = make(s, 1.7, 1.1, 0.5);
            const double quad = integrate_adaptive(
                [&](double t) { return eval_pulse(p, t); }, -40.0, 41.0, 1e-12, 64);
            CHECK(pulse_area_full(p) == doctest::Approx(quad).epsilon(1e-9));
        }
    }
}

TEST_CASE("pulse text syntax") {
    const PulseSpec p = parse_pulse("GAUSSIAN:amp=2.0,width=1.0,center=0.5");
    CHECK(p.shape == PulseShape::Gaussian);
    CHECK(p.amplitude == 2.0);
    CHECK(p.width == 1.0);
    CHECK(p.center == 0.5);

    const PulseSpec d = parse_pulse("sech:amp=1,width=2");
    CHECK(d.center == 0.0); // missing center defaults to 0

    CHECK(parse_pulse("coswin:amp=1,width=2").shape == PulseShape::CosWindow);
    CHECK(parse_pulse("sin:amp=1,width=2").shape == PulseShape::SinWindow);

    CHECK_THROWS_AS((void)parse_pulse("triangle:amp=1,width=1"), ConfigError);
    CHECK_THROWS_AS((void)parse_pulse("gaussian:amp=1"), ConfigError);
    CHECK_THROWS_AS((void)parse_pulse("gaussian:amp=1,width=-2"), ConfigError);
    CHECK_THROWS_AS((void)parse_pulse("gaussian:amp=x,width=1"), ConfigError);

    const PulseSpec round = parse_pulse(format_pulse(p));
    CHECK(round.shape == p.shape);
    CHECK(round.amplitude == p.amplitude);
    CHECK(round.width == p.width);
    CHECK(round.center == p.center);
}
