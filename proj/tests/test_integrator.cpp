#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "qtransfer/integrator.hpp"
#include "qtransfer/lambda3.hpp"

using namespace qtransfer;

namespace {

constexpr double kPi = std::numbers::pi;

auto decay = [](double, const double* y, double* dy) { dy[0] = -y[0]; };
auto oscillator = [](double, const double* y, double* dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
};
// rotating-frame pseudospin with Omega = 0, Delta = 1
auto precession = [](double, const double* y, double* dy) {
    dy[0] = -y[1];
    dy[1] = y[0];
    dy[2] = 0.0;
};

Lambda3Params gaussian_pair() {
    PulseSpec pump{PulseShape::Gaussian, 2.0, 1.0, 1.0};
    PulseSpec stokes{PulseShape::Gaussian, 2.0, 1.0, 0.0};
    return {pump, stokes, 0.0, 0.0};
}

} // namespace

TEST_CASE("embedded step") {
    SUBCASE("zero rhs reproduces the state with zero error") {
        auto zero = [](double, const double*, double* dy) { dy[0] = dy[1] = 0.0; };
        const std::vector<double> y{0.3, -2.0};
        const auto [y5, err] = step_embedded(zero, 0.0, y, 0.5);
        CHECK(y5 == y);
        CHECK(err == 0.0);
    }
    SUBCASE("exponential decay over one step") {
        const std::vector<double> y{1.0};
        const auto [y5, err] = step_embedded(decay, 0.0, y, 0.1);
        CHECK(y5[0] == doctest::Approx(std::exp(-0.1)).epsilon(1e-8));
        CHECK(err >= 0.0);
    }
    SUBCASE("harmonic oscillator energy is conserved to 1e-12 over a tiny step") {
        const std::vector<double> y{1.0, 0.0};
        const auto [y5, err] = step_embedded(oscillator, 0.0, y, 0.01);
        const double energy = y5[0] * y5[0] + y5[1] * y5[1];
        CHECK(std::fabs(energy - 1.0) < 1e-12);
    }
    SUBCASE("non-finite rhs is a blowup error") {
        auto bad = [](double, const double*, double* dy) { dy[0] = std::nan(""); };
        const std::vector<double> y{1.0};
        CHECK_THROWS_AS((void)step_embedded(bad, 0.0, y, 0.1), IntegrationError);
    }
}

TEST_CASE("adaptive integration of reference problems") {
    SUBCASE("exponential decay to t = 1") {
        const auto traj = integrate(decay, 0.0, 1.0, {1.0});
        CHECK(traj.times.front() == 0.0);
        CHECK(traj.times.back() == 1.0);
        CHECK(traj.states.back()[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-7));
    }
    SUBCASE("pseudospin precession returns after one period") {
        const auto y = integrate_final(precession, 0.0, 2.0 * kPi, {1.0, 0.0, 0.0});
        CHECK(std::fabs(y[0] - 1.0) < 1e-7);
        CHECK(std::fabs(y[1]) < 1e-7);
    }
    SUBCASE("resonant three-level system matches fixed-step RK4") {
        const Lambda3Params par = gaussian_pair();
        auto rhs = [&par](double t, const double* y, double* dy) { lambda3_rhs(par, t, y, dy); };
        std::vector<double> y0{1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
        const auto adaptive = integrate_final(rhs, -5.0, 6.0, y0);
        const auto oracle = rk4_fixed(rhs, -5.0, 6.0, y0, 1e-4);
        for (int i = 0; i < 6; ++i) CHECK(std::fabs(adaptive[i] - oracle[i]) < 1e-6);
    }
}

TEST_CASE("halving the tolerances never increases the final error") {
    struct Problem {
        std::function<void(double, const double*, double*)> rhs;
        std::vector<double> y0;
        double t0, t1;
    };
    const Lambda3Params par = gaussian_pair();
    std::vector<Problem> problems = {
        {decay, {1.0}, 0.0, 1.0},
        {precession, {1.0, 0.0, 0.0}, 0.0, 2.0 * kPi},
        {[&par](double t, const double* y, double* dy) { lambda3_rhs(par, t, y, dy); },
         {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, -5.0, 6.0},
    };
    for (auto& prob : problems) {
        const auto oracle = rk4_fixed(prob.rhs, prob.t0, prob.t1, prob.y0, 1e-4);
        double last_err = -1.0;
        IntegratorConfig cfg;
        cfg.rtol = 1e-5;
        cfg.atol = 1e-7;
        for (int level = 0; level < 4; ++level) {
            const auto y = integrate_final(prob.rhs, prob.t0, prob.t1, prob.y0, cfg);
            double err = 0.0;
            for (std::size_t i = 0; i < y.size(); ++i)
                err = std::max(err, std::fabs(y[i] - oracle[i]));
            if (last_err >= 0.0) CHECK(err <= last_err + 1e-12);
            last_err = err;
            cfg.rtol *= 0.5;
            cfg.atol *= 0.5;
        }
    }
}

TEST_CASE("integration is deterministic") {
    const Lambda3Params par = gaussian_pair();
    auto rhs = [&par](double t, const double* y, double* dy) { lambda3_rhs(par, t, y, dy); };
    const auto a = integrate(rhs, -5.0, 6.0, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0});
    const auto b = integrate(rhs, -5.0, 6.0, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0});
    REQUIRE(a.times.size() == b.times.size());
    CHECK(a.times == b.times);
    CHECK(a.states == b.states);
}

TEST_CASE("norm drift bound for an antisymmetric generator") {
    // generator norm 1, span 2 pi: drift <= 10 * rtol * span * 1
    IntegratorConfig cfg;
    cfg.rtol = 1e-8;
    cfg.atol = 1e-12;
    const auto y = integrate_final(precession, 0.0, 2.0 * kPi, {1.0, 0.0, 0.0}, cfg);
    const double norm = std::sqrt(y[0] * y[0] + y[1] * y[1] + y[2] * y[2]);
    CHECK(std::fabs(norm - 1.0) <= 10.0 * cfg.rtol * 2.0 * kPi);
}

TEST_CASE("sampling cadence lands on requested times") {
    const auto traj = integrate(decay, 0.0, 1.0, {1.0}, {}, 0.25);
    REQUIRE(traj.times.size() == 5);
    for (int i = 0; i < 5; ++i) CHECK(traj.times[i] == doctest::Approx(0.25 * i).epsilon(1e-14));
    for (int i = 0; i < 5; ++i)
        CHECK(traj.states[i][0] == doctest::Approx(std::exp(-traj.times[i])).epsilon(1e-8));
}

TEST_CASE("failure modes") {
    SUBCASE("step budget") {
        IntegratorConfig cfg;
        cfg.max_steps = 10;
        CHECK_THROWS_AS((void)integrate_final(oscillator, 0.0, 1000.0, {1.0, 0.0}, cfg),
                        IntegrationError);
    }
    SUBCASE("stiffness at h_min") {
        auto nasty = [](double, const double*, double* dy) { dy[0] = std::nan(""); };
        IntegratorConfig cfg;
        cfg.h_min = 1e-3;
        cfg.h0 = 1e-2;
        CHECK_THROWS_AS((void)integrate_final(nasty, 0.0, 1.0, {1.0}, cfg), IntegrationError);
    }
    SUBCASE("bad window") {
        CHECK_THROWS_AS((void)integrate_final(decay, 1.0, 0.0, {1.0}), ConfigError);
    }
    SUBCASE("bad tolerances") {
        IntegratorConfig cfg;
        cfg.rtol = 0.5; // above the 1e-2 cap
        CHECK_THROWS_AS((void)integrate_final(decay, 0.0, 1.0, {1.0}, cfg), ConfigError);
    }
}
