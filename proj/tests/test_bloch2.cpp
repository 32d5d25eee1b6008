#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qtransfer/bloch2.hpp"

using namespace qtransfer;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("pseudospin rhs") {
    SUBCASE("no drive, no detuning") {
        TorqueSpec ts{{PulseShape::Constant, 0.0, 1.0, 0.0}, 0.0};
        const auto d = pseudospin_rhs(ts, 0.0, {0.3, -0.5, 0.8});
        CHECK(d[0] == 0.0);
        CHECK(d[1] == 0.0);
        CHECK(d[2] == 0.0);
    }
    SUBCASE("resonant drive on the ground state") {
        TorqueSpec ts{{PulseShape::Constant, 1.0, 1.0, 0.0}, 0.0};
        const auto d = pseudospin_rhs(ts, 0.0, {0.0, 0.0, -1.0});
        CHECK(d[0] == 0.0);
        CHECK(d[1] == -1.0);
        CHECK(d[2] == 0.0);
    }
    SUBCASE("derivative is orthogonal to the state") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        TorqueSpec ts{{PulseShape::Gaussian, 1.7, 0.8, 0.2}, 0.6};
        for (int i = 0; i < 50; ++i) {
            const PseudospinState s{u(rng), u(rng), u(rng)};
            const auto d = pseudospin_rhs(ts, u(rng), s);
            CHECK(std::fabs(d[0] * s.u + d[1] * s.v + d[2] * s.w) < 1e-14);
        }
    }
}

TEST_CASE("rotation solution") {
    const PseudospinState ground{0.0, 0.0, -1.0};
    SUBCASE("pi pulse inverts the population") {
        const auto s = rotation_solution(kPi, ground);
        CHECK(s.u == doctest::Approx(0.0));
        CHECK(std::fabs(s.v) < 1e-15);
        CHECK(s.w == doctest::Approx(1.0));
    }
    SUBCASE("zero area is the identity") {
        const PseudospinState s0{0.2, -0.4, 0.7};
        const auto s = rotation_solution(0.0, s0);
        CHECK(s.u == s0.u);
        CHECK(s.v == s0.v);
        CHECK(s.w == s0.w);
    }
    SUBCASE("half-pi pulse") {
        const auto s = rotation_solution(kPi / 2, ground);
        CHECK(s.v == doctest::Approx(-1.0));
        CHECK(std::fabs(s.w) < 1e-15);
    }
}

TEST_CASE("two-level simulation") {
    const PseudospinState ground{0.0, 0.0, -1.0};
    SUBCASE("constant pi pulse inverts within 1e-7") {
        TorqueSpec ts{{PulseShape::Constant, 1.0, 1.0, 0.0}, 0.0};
        const auto r = simulate_two_level(ts, 0.0, kPi, ground);
        CHECK(std::fabs(r.final_state.w - 1.0) < 1e-7);
        CHECK(r.area == doctest::Approx(kPi));
    }
    SUBCASE("gaussian with area 2 pi returns the population") {
        const double sigma = 1.0;
        const double amp = 2.0 * kPi / (sigma * std::sqrt(2.0 * kPi));
        TorqueSpec ts{{PulseShape::Gaussian, amp, sigma, 0.0}, 0.0};
        const auto r = simulate_two_level(ts, -8.0, 8.0, ground);
        CHECK(std::fabs(r.final_state.w + 1.0) < 1e-6);
    }
    SUBCASE("pure detuning precession has period 2 pi") {
        TorqueSpec ts{{PulseShape::Constant, 0.0, 1.0, 0.0}, 1.0};
        const auto r = simulate_two_level(ts, 0.0, 2.0 * kPi, {1.0, 0.0, 0.0});
        CHECK(std::fabs(r.final_state.u - 1.0) < 1e-7);
        CHECK(std::fabs(r.final_state.v) < 1e-7);
    }
}

TEST_CASE("resonant simulation agrees with the area-theorem rotation") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> amp(0.3, 3.0), width(0.4, 1.6), comp(-1.0, 1.0);
    for (PulseShape shape : {PulseShape::Gaussian, PulseShape::Sech, PulseShape::Lorentzian}) {
        for (int i = 0; i < 50; ++i) {
            PulseSpec pulse{shape, amp(rng), width(rng), 0.0};
            double s0u = comp(rng), s0v = comp(rng), s0w = comp(rng);
            const double n = std::sqrt(s0u * s0u + s0v * s0v + s0w * s0w);
            if (n < 1e-3) continue;
            const PseudospinState s0{s0u / n, s0v / n, s0w / n};
            const double half = coverage_halfwidth(pulse);
            TorqueSpec ts{pulse, 0.0};
            IntegratorConfig cfg;
            cfg.rtol = 1e-9;
            cfg.atol = 1e-12;
            const auto sim = simulate_two_level(ts, -half, half, s0, cfg);
            const auto exact = rotation_solution(pulse_area(pulse, -half, half), s0);
            CHECK(std::fabs(sim.final_state.u - exact.u) < 1e-6);
            CHECK(std::fabs(sim.final_state.v - exact.v) < 1e-6);
            CHECK(std::fabs(sim.final_state.w - exact.w) < 1e-6);
            CHECK(sim.norm_drift < 1e-8);
        }
    }
}
