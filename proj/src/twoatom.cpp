#include "qtransfer/twoatom.hpp"

#include <algorithm>
#include <cmath>

namespace qtransfer {

const std::array<const char*, kRho25Dim> kRho25Labels = {
    "rho_abab", "rhot_abcb", "rho_abbb", "rhot_abbc", "rho_abba",
    "rhot_cbab", "rho_cbcb", "rhot_cbbb", "rho_cbbc", "rhot_cbba",
    "rho_bbab", "rhot_bbcb", "rho_bbbb", "rhot_bbbc", "rho_bbba",
    "rhot_bcab", "rho_bccb", "rhot_bcbb", "rho_bcbc", "rhot_bcba",
    "rho_baab", "rhot_bacb", "rho_babb", "rhot_babc", "rho_baba"};

namespace {

enum AmpIdx { AB = 0, CB, BB, BC, BA };

// Flat indices into the 25-vector (row-major over the amp5 basis).
enum RhoIdx {
    ABAB = 0, ABCB, ABBB, ABBC, ABBA,
    CBAB, CBCB, CBBB, CBBC, CBBA,
    BBAB, BBCB, BBBB, BBBC, BBBA,
    BCAB, BCCB, BCBB, BCBC, BCBA,
    BAAB, BACB, BABB, BABC, BABA
};

} // namespace

void TwoAtomParams::validate() const {
    omega1.validate();
    omega2.validate();
    if (gamma < 0.0) throw ConfigError("gamma must be >= 0");
    if (!std::isfinite(g)) throw ConfigError("g must be finite");
}

void amp5_rhs(const TwoAtomParams& par, double t, const double y[5], double dy[5]) {
    const double w1 = eval_pulse(par.omega1, t);
    const double w2 = eval_pulse(par.omega2, t);
    const double g = par.g;
    const double G = par.gamma;
    dy[AB] = -0.5 * w1 * y[CB];
    dy[CB] = -0.5 * G * y[CB] + 0.5 * w1 * y[AB] + 0.5 * g * y[BB];
    dy[BB] = -0.5 * g * (y[CB] + y[BC]);
    dy[BC] = -0.5 * G * y[BC] + 0.5 * w2 * y[BA] + 0.5 * g * y[BB];
    dy[BA] = -0.5 * w2 * y[BC];
}

void rho25_rhs(const TwoAtomParams& par, double t, const double r[25], double dr[25]) {
    const double w1 = 0.5 * eval_pulse(par.omega1, t);
    const double w2 = 0.5 * eval_pulse(par.omega2, t);
    const double g = 0.5 * par.g;
    const double G = par.gamma;
    const double Gh = 0.5 * G;
    const double Gt = G / 3.0;

    // diagonal elements
    dr[ABAB] = w1 * (r[ABCB] - r[CBAB]) + Gt * r[CBCB];
    dr[CBCB] = w1 * (r[CBAB] - r[ABCB]) + g * (r[CBBB] - r[BBCB]) - G * r[CBCB];
    dr[BBBB] = g * (r[BBCB] + r[BBBC] - r[CBBB] - r[BCBB]) + Gt * (r[CBCB] + r[BCBC]);
    dr[BCBC] = w2 * (r[BCBA] - r[BABC]) + g * (r[BCBB] - r[BBBC]) - G * r[BCBC];
    dr[BABA] = w2 * (r[BABC] - r[BCBA]) + Gt * r[BCBC];

    // off-diagonal elements
    dr[ABCB] = w1 * (r[CBCB] - r[ABAB]) - g * r[ABBB] - Gh * r[ABCB];
    dr[ABBB] = -w1 * r[CBBB] + g * (r[ABCB] + r[ABBC]);
    dr[ABBC] = w1 * r[CBBC] - w2 * r[ABBA] - g * r[ABBB] - Gh * r[ABBC];
    dr[ABBA] = -w1 * r[CBBA] + w2 * r[ABBC];
    dr[CBAB] = w1 * (r[ABAB] - r[CBCB]) + g * r[BBAB] - Gh * r[CBAB];
    dr[CBBB] = w1 * r[ABBB] + g * (r[BBBB] - r[CBCB] - r[CBBC]) - Gh * r[CBBB];
    dr[CBBC] = -w1 * r[ABBC] + w2 * r[CBBA] + g * (r[CBBB] - r[BBBC]) - G * r[CBBC];
    dr[CBBA] = w1 * r[ABBA] - w2 * r[CBBC] + g * r[BBBA] - Gh * r[CBBA];
    dr[BBAB] = w1 * r[BBCB] - g * (r[CBAB] + r[BCAB]);
    dr[BBCB] = -w1 * r[BBAB] + g * (r[CBCB] + r[BCCB] - r[BBBB]) - Gh * r[BBCB];
    dr[BBBC] = -w2 * r[BBBA] + g * (r[CBBC] + r[BCBC] - r[BBBB]) - Gh * r[BBBC];
    dr[BBBA] = w2 * r[BBBC] - g * (r[CBBA] + r[BCBA]);
    dr[BCAB] = -w1 * r[BCCB] + w2 * r[BAAB] + g * r[BBAB] - Gh * r[BCAB];
    dr[BCCB] = w1 * r[BCAB] - w2 * r[BACB] + g * (r[BCBB] - r[BBCB]) - G * r[BCCB];
    dr[BCBB] = w2 * r[BABB] + g * (r[BBBB] - r[BCCB] - r[BCBC]) - Gh * r[BCBB];
    dr[BCBA] = w2 * (r[BABA] - r[BCBC]) + g * r[BBBA] - Gh * r[BCBA];
    dr[BAAB] = w1 * r[BACB] - w2 * r[BCAB];
    dr[BACB] = -w1 * r[BAAB] + w2 * r[BCCB] - g * r[BABB] - Gh * r[BACB];
    dr[BABB] = -w2 * r[BCBB] + g * (r[BACB] + r[BABC]);
    dr[BABC] = w2 * (r[BCBC] - r[BABA]) - g * r[BABB] - Gh * r[BABC];
}

std::array<double, 3> dark_state(double omega1_val, double omega2_val, double g) {
    const double w0sq = omega1_val * omega1_val + omega2_val * omega2_val;
    const double norm2 = w0sq * g * g + omega1_val * omega1_val * omega2_val * omega2_val;
    if (norm2 == 0.0) throw DomainError("dark_state: degenerate parameters");
    const double norm = std::sqrt(norm2);
    return {omega2_val * g / norm, -omega1_val * omega2_val / norm, omega1_val * g / norm};
}

void symmetric_rhs(const PulseSpec& omega, double g, double gamma, double t, const double y[3],
                   double dy[3]) {
    const double w = eval_pulse(omega, t);
    const double gs = g / std::sqrt(2.0);
    dy[0] = -0.5 * w * y[1];
    dy[1] = 0.5 * w * y[0] - 0.5 * gamma * y[1] + gs * y[2];
    dy[2] = -gs * y[1];
}

void antisymmetric_rhs(const PulseSpec& omega, double gamma, double t, const double y[2],
                       double dy[2]) {
    const double w = eval_pulse(omega, t);
    dy[0] = -0.5 * w * y[1];
    dy[1] = 0.5 * w * y[0] - 0.5 * gamma * y[1];
}

SymAntiState decompose(const std::array<double, 5>& c) {
    const double r = 1.0 / std::sqrt(2.0);
    SymAntiState s;
    s.b1 = r * (c[AB] + c[BA]);
    s.b2 = r * (c[CB] + c[BC]);
    s.b3 = c[BB];
    s.a1 = r * (c[AB] - c[BA]);
    s.a2 = r * (c[CB] - c[BC]);
    return s;
}

std::array<double, 5> reconstruct(const SymAntiState& s) {
    const double r = 1.0 / std::sqrt(2.0);
    return {r * (s.b1 + s.a1), r * (s.b2 + s.a2), s.b3, r * (s.b2 - s.a2), r * (s.b1 - s.a1)};
}

std::pair<double, double> twoatom_window(const PulseSpec& omega1, const PulseSpec& omega2) {
    const double lo =
        std::min(omega1.center - coverage_halfwidth(omega1), omega2.center - coverage_halfwidth(omega2));
    const double hi =
        std::max(omega1.center + coverage_halfwidth(omega1), omega2.center + coverage_halfwidth(omega2));
    return {lo, hi};
}

SymAntiRun symanti_transfer(const PulseSpec& omega, double g, double gamma,
                            const IntegratorConfig& icfg_in, const CoherenceOptions& opts) {
    omega.validate();
    double t0, t1;
    if (opts.window) std::tie(t0, t1) = *opts.window;
    else std::tie(t0, t1) = twoatom_window(omega, omega);

    IntegratorConfig icfg = icfg_in;
    if (icfg.h_max <= 0.0) icfg.h_max = (t1 - t0) / 10.0;
    icfg.h_max = std::min(icfg.h_max, omega.width);
    icfg.h0 = std::min(icfg.h0, icfg.h_max);

    SymAntiRun run;
    run.initial_state = decompose({1.0, 0.0, 0.0, 0.0, 0.0});

    std::vector<double> b{run.initial_state.b1, run.initial_state.b2, run.initial_state.b3};
    auto sym = [&](double t, const double* y, double* dy) { symmetric_rhs(omega, g, gamma, t, y, dy); };
    std::int64_t acc_b = 0, rej_b = 0;
    integrate_observe(sym, t0, t1, b, icfg, [](double, std::span<const double>) {}, std::nullopt,
                      &acc_b, &rej_b);

    std::vector<double> a{run.initial_state.a1, run.initial_state.a2};
    auto anti = [&](double t, const double* y, double* dy) { antisymmetric_rhs(omega, gamma, t, y, dy); };
    std::int64_t acc_a = 0, rej_a = 0;
    integrate_observe(anti, t0, t1, a, icfg, [](double, std::span<const double>) {}, std::nullopt,
                      &acc_a, &rej_a);

    run.final_state = {b[0], b[1], b[2], a[0], a[1]};
    run.reconstructed_final = reconstruct(run.final_state);
    const auto& c = run.reconstructed_final;

    TransferResult& out = run.result;
    out.window_t0 = t0;
    out.window_t1 = t1;
    out.accepted_steps = acc_b + acc_a;
    out.rejected_steps = rej_b + rej_a;
    out.peak_excited = c[BB] * c[BB];
    double norm = 0.0;
    for (double v : c) norm += v * v;
    out.populations = {{"p_ab", c[AB] * c[AB]}, {"p_cb", c[CB] * c[CB]}, {"p_bb", c[BB] * c[BB]},
                       {"p_bc", c[BC] * c[BC]}, {"p_ba", c[BA] * c[BA]}};
    out.trace_drift = gamma == 0.0 ? std::fabs(norm - 1.0) : std::max(0.0, norm - 1.0);
    out.set_p(1.0 - c[BA] * c[BA]);
    return run;
}

TransferResult coherence_transfer(CoherenceModel model, PulseSpec omega1, PulseSpec omega2,
                                  double delay, double g, double gamma,
                                  const IntegratorConfig& icfg_in, const CoherenceOptions& opts) {
    if (delay < 0.0) throw ConfigError("coherence_transfer: delay must be >= 0");
    omega2.center = 0.0;
    omega1.center = delay;
    TwoAtomParams par{omega1, omega2, g, gamma};
    par.validate();

    double t0, t1;
    if (opts.window) std::tie(t0, t1) = *opts.window;
    else std::tie(t0, t1) = twoatom_window(omega1, omega2);

    IntegratorConfig icfg = icfg_in;
    if (icfg.h_max <= 0.0) icfg.h_max = (t1 - t0) / 10.0;
    icfg.h_max = std::min(icfg.h_max, std::min(omega1.width, omega2.width));
    icfg.h0 = std::min(icfg.h0, icfg.h_max);

    TransferResult out;
    out.window_t0 = t0;
    out.window_t1 = t1;
    const double amp = std::max(omega1.amplitude, omega2.amplitude);
    const double edge = std::max({std::fabs(eval_pulse(omega1, t0)), std::fabs(eval_pulse(omega1, t1)),
                                  std::fabs(eval_pulse(omega2, t0)), std::fabs(eval_pulse(omega2, t1))});
    out.endpoint_warning = edge > 1e-6 * amp;

    double next_sample = t0;
    auto record = [&](double t, std::span<const double> s) {
        if (opts.sample_every && t >= next_sample - 1e-12) {
            out.sample_times.push_back(t);
            out.samples.emplace_back(s.begin(), s.end());
            next_sample += *opts.sample_every;
        }
    };

    if (model == CoherenceModel::Amplitudes) {
        auto rhs = [&par](double t, const double* y, double* dy) { amp5_rhs(par, t, y, dy); };
        std::vector<double> y(kAmp5Dim, 0.0);
        y[AB] = 1.0;
        integrate_observe(
            rhs, t0, t1, y, icfg,
            [&](double t, std::span<const double> s) {
                out.peak_excited = std::max(out.peak_excited, s[BB] * s[BB]);
                record(t, s);
            },
            opts.sample_every, &out.accepted_steps, &out.rejected_steps);
        double norm = 0.0;
        for (double v : y) norm += v * v;
        out.populations = {{"p_ab", y[AB] * y[AB]},
                           {"p_cb", y[CB] * y[CB]},
                           {"p_bb", y[BB] * y[BB]},
                           {"p_bc", y[BC] * y[BC]},
                           {"p_ba", y[BA] * y[BA]}};
        out.trace_drift = gamma == 0.0 ? std::fabs(norm - 1.0) : std::max(0.0, norm - 1.0);
        out.set_p(1.0 - y[BA] * y[BA]);
    } else {
        auto rhs = [&par](double t, const double* y, double* dy) { rho25_rhs(par, t, y, dy); };
        std::vector<double> y(kRho25Dim, 0.0);
        y[ABAB] = 1.0;
        integrate_observe(
            rhs, t0, t1, y, icfg,
            [&](double t, std::span<const double> s) {
                out.peak_excited = std::max(out.peak_excited, s[BBBB]);
                record(t, s);
            },
            opts.sample_every, &out.accepted_steps, &out.rejected_steps);
        const double trace = y[ABAB] + y[CBCB] + y[BBBB] + y[BCBC] + y[BABA];
        out.populations = {{"rho_abab", y[ABAB]},
                           {"rho_cbcb", y[CBCB]},
                           {"rho_bbbb", y[BBBB]},
                           {"rho_bcbc", y[BCBC]},
                           {"rho_baba", y[BABA]}};
        out.trace_drift = gamma == 0.0 ? std::fabs(trace - 1.0) : std::max(0.0, trace - 1.0);
        out.set_p(1.0 - y[BABA]);
    }
    return out;
}

} // namespace qtransfer
