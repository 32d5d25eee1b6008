// qtransfer - population/coherence transfer simulator CLI.
// Exit codes: 0 success, 2 configuration error, 3 integration error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtransfer/analytic.hpp"
#include "qtransfer/bloch2.hpp"
#include "qtransfer/cavity4.hpp"
#include "qtransfer/lambda3.hpp"
#include "qtransfer/sweep.hpp"
#include "qtransfer/tables.hpp"
#include "qtransfer/twoatom.hpp"

namespace qt = qtransfer;
using nlohmann::json;

namespace {

std::pair<double, double> parse_window(const std::string& text) {
    const auto sep = text.find(':');
    if (sep == std::string::npos) throw qt::ConfigError("window must look like t0:t1");
    try {
        const double t0 = std::stod(text.substr(0, sep));
        const double t1 = std::stod(text.substr(sep + 1));
        if (!(t0 < t1)) throw qt::ConfigError("window needs t0 < t1");
        return {t0, t1};
    } catch (const qt::ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw qt::ConfigError("bad window '" + text + "'");
    }
}

std::array<double, 3> parse_range(const std::string& text) {
    std::array<double, 3> out{};
    std::stringstream ss(text);
    std::string piece;
    int i = 0;
    while (std::getline(ss, piece, ':') && i < 3) out[i++] = std::stod(piece);
    if (i != 3) throw qt::ConfigError("range must look like x0:x1:dx");
    return out;
}

qt::SweepAxis parse_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw qt::ConfigError("axis must look like name=min:max:step");
    const auto r = parse_range(text.substr(eq + 1));
    qt::SweepAxis axis{text.substr(0, eq), r[0], r[1], r[2]};
    axis.validate();
    return axis;
}

void attach_samples(json& j, const qt::TransferResult& r) {
    if (r.sample_times.empty()) return;
    j["samples"] = {{"times", r.sample_times}, {"states", r.samples}};
}

json result_to_json(const qt::TransferResult& r, const char* peak_key) {
    json j;
    j["p"] = r.p;
    j["log10_p"] = r.log10_p;
    json pops;
    for (const auto& [name, value] : r.populations) pops[name] = value;
    j["populations"] = pops;
    j["trace_drift"] = r.trace_drift;
    j[peak_key] = r.peak_excited;
    j["window"] = {r.window_t0, r.window_t1};
    j["endpoint_warning"] = r.endpoint_warning;
    j["accepted_steps"] = r.accepted_steps;
    j["rejected_steps"] = r.rejected_steps;
    if (r.window_doubled_delta != 0.0) j["window_doubled_delta"] = r.window_doubled_delta;
    return j;
}

// --config support: JSON keys mirror long flag names; values from the file
// are injected before the user's flags so explicit flags win.
std::vector<std::string> inject_config(std::vector<std::string> args, const json& cfg) {
    std::vector<std::string> extra;
    for (const auto& [key, value] : cfg.items()) {
        auto push = [&extra, &key](const json& v) {
            extra.push_back("--" + key);
            if (v.is_string()) extra.push_back(v.get<std::string>());
            else if (v.is_boolean()) { if (!v.get<bool>()) extra.pop_back(); }
            else extra.push_back(v.dump());
        };
        if (value.is_array()) {
            for (const auto& v : value) push(v);
        } else {
            push(value);
        }
    }
    // insert after the subcommand path (leading non-flag tokens)
    std::size_t at = 0;
    while (at < args.size() && !args[at].empty() && args[at][0] != '-') ++at;
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), extra.begin(), extra.end());
    return args;
}

void take_last_everywhere(CLI::App* app) {
    for (auto* opt : app->get_options()) {
        if (opt->get_expected_max() <= 1 && opt->get_name() != "--axis")
            opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }
    for (auto* sub : app->get_subcommands({})) take_last_everywhere(sub);
}

struct SimulateArgs {
    std::string system;
    std::string pulse1, pulse2;
    std::string window;
    std::string protocol = "adiabatic";
    std::string model = "density";
    double detuning = 0.0, delta1 = 0.0, delta2 = 0.0;
    double delay = 0.0, gamma = 0.0, kappa = 0.0, g = 1.0;
    double rtol = 1e-8, atol = 1e-10;
    double sample_every = 0.0;
};

int run_simulate(const SimulateArgs& a) {
    qt::IntegratorConfig icfg;
    icfg.rtol = a.rtol;
    icfg.atol = a.atol;
    json out;

    if (a.system == "bloch2") {
        if (a.pulse1.empty()) throw qt::ConfigError("bloch2 needs --pulse1");
        const qt::PulseSpec pulse = qt::parse_pulse(a.pulse1);
        double t0, t1;
        if (!a.window.empty()) std::tie(t0, t1) = parse_window(a.window);
        else {
            const double half = qt::coverage_halfwidth(pulse);
            if (half <= 0.0) throw qt::ConfigError("constant pulse needs an explicit --window");
            t0 = pulse.center - half;
            t1 = pulse.center + half;
        }
        const qt::TorqueSpec ts{pulse, a.detuning};
        const auto r = qt::simulate_two_level(ts, t0, t1, qt::PseudospinState{0.0, 0.0, -1.0}, icfg);
        out["final_u"] = r.final_state.u;
        out["final_v"] = r.final_state.v;
        out["final_w"] = r.final_state.w;
        out["area"] = r.area;
        out["norm_drift"] = r.norm_drift;
        out["window"] = {t0, t1};
    } else if (a.system == "lambda3") {
        if (a.pulse1.empty() || a.pulse2.empty()) throw qt::ConfigError("lambda3 needs --pulse1 and --pulse2");
        const qt::PulseSpec pump = qt::parse_pulse(a.pulse1);
        const qt::PulseSpec stokes = qt::parse_pulse(a.pulse2);
        double t0, t1;
        if (!a.window.empty()) std::tie(t0, t1) = parse_window(a.window);
        else std::tie(t0, t1) = qt::lambda3_window(pump, stokes);
        qt::StirapOptions opts;
        if (a.sample_every > 0.0) opts.sample_every = a.sample_every;
        const auto r = qt::stirap_transfer(pump, stokes, a.delta1, a.delta2, t0, t1, icfg, opts);
        out = result_to_json(r, "peak_excited");
        attach_samples(out, r);
    } else if (a.system == "cavity4") {
        if (a.pulse1.empty() || a.pulse2.empty()) throw qt::ConfigError("cavity4 needs --pulse1 and --pulse2");
        const qt::PulseSpec omega = qt::parse_pulse(a.pulse1);
        const qt::PulseSpec gp = qt::parse_pulse(a.pulse2);
        const auto cfg = a.protocol == "pi"
                             ? qt::make_pi_config(omega, gp, a.delay, a.gamma, a.kappa)
                             : qt::make_adiabatic_config(omega, gp, a.delay, a.gamma, a.kappa);
        qt::Cavity4Options opts;
        if (a.sample_every > 0.0) opts.sample_every = a.sample_every;
        const auto r = a.protocol == "pi" ? qt::pi_pulse_transfer(cfg, icfg, opts)
                                          : qt::adiabatic_transfer(cfg, icfg, opts);
        out = result_to_json(r, "peak_e_population");
        attach_samples(out, r);
        out["protocol"] = a.protocol;
    } else if (a.system == "twoatom") {
        if (a.pulse1.empty()) throw qt::ConfigError("twoatom needs --pulse1");
        const qt::PulseSpec omega1 = qt::parse_pulse(a.pulse1);
        const qt::PulseSpec omega2 = a.pulse2.empty() ? omega1 : qt::parse_pulse(a.pulse2);
        if (a.model == "sym-anti") {
            const auto r = qt::symanti_transfer(omega1, a.g, a.gamma, icfg);
            out = result_to_json(r.result, "peak_bbbb");
            out["decomposition"] = {{"b1", r.final_state.b1}, {"b2", r.final_state.b2},
                                    {"b3", r.final_state.b3}, {"a1", r.final_state.a1},
                                    {"a2", r.final_state.a2}};
            out["reconstructed"] = r.reconstructed_final;
        } else {
            const auto model = a.model == "amp" ? qt::CoherenceModel::Amplitudes
                                                : qt::CoherenceModel::Density;
            qt::CoherenceOptions opts;
            if (a.sample_every > 0.0) opts.sample_every = a.sample_every;
            const auto r =
                qt::coherence_transfer(model, omega1, omega2, a.delay, a.g, a.gamma, icfg, opts);
            out = result_to_json(r, "peak_bbbb");
            attach_samples(out, r);
        }
        out["model"] = a.model;
    } else {
        throw qt::ConfigError("unknown system '" + a.system + "'");
    }
    std::cout << out.dump(2) << std::endl;
    return 0;
}

struct SweepArgs {
    qt::SweepBase base;
    std::string pulse1, pulse2;
    std::vector<std::string> axis_texts;
    std::string out_path;
    std::string format = "csv";
    bool refine = false;
    int threads = 0;
    double rtol = 1e-8, atol = 1e-10;
};

int run_sweep_cmd(SweepArgs& a) {
    if (a.pulse1.empty() || a.pulse2.empty()) throw qt::ConfigError("sweep needs --pulse1 and --pulse2");
    a.base.pulse1 = qt::parse_pulse(a.pulse1);
    a.base.pulse2 = qt::parse_pulse(a.pulse2);
    a.base.icfg.rtol = a.rtol;
    a.base.icfg.atol = a.atol;
    std::vector<qt::SweepAxis> axes;
    for (const auto& t : a.axis_texts) axes.push_back(parse_axis(t));
    if (axes.empty()) throw qt::ConfigError("sweep needs at least one --axis");
    const int threads = a.threads > 0 ? a.threads : qt::default_thread_count();

    const auto surface = qt::run_sweep(a.base, axes, threads);
    if (!a.out_path.empty()) {
        std::ofstream file(a.out_path);
        if (!file) throw qt::ConfigError("cannot open output file '" + a.out_path + "'");
        if (a.format == "json") qt::write_surface_json(surface, file);
        else qt::write_surface_csv(surface, file);
    }

    json summary;
    summary["cells"] = surface.cell_count();
    summary["failed_cells"] = surface.failures.size();
    summary["threads"] = threads;
    if (surface.argmin_index >= 0) {
        const auto best = qt::find_minimum(
            surface, a.refine ? std::optional<qt::RefineSpec>{qt::RefineSpec{}} : std::nullopt,
            &a.base, threads);
        summary["argmin"] = {{"value", best.value}, {"params", best.params}};
        summary["refined"] = a.refine;
    } else {
        summary["argmin"] = nullptr;
    }
    if (!a.out_path.empty()) summary["out"] = a.out_path;
    std::cout << summary.dump(2) << std::endl;
    return 0;
}

int run_tables(const std::string& table, const std::vector<int>& rows) {
    std::size_t count = 0;
    if (table == "pi") count = qt::pi_pulse_table().size();
    else if (table == "adiabatic") count = qt::adiabatic_table().size();
    else if (table == "coherence") count = qt::coherence_table().size();
    else throw qt::ConfigError("table must be pi, adiabatic, or coherence");

    std::vector<int> selected = rows;
    if (selected.empty())
        for (std::size_t i = 0; i < count; ++i) selected.push_back(static_cast<int>(i));

    double worst = 0.0;
    for (int idx : selected) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= count)
            throw qt::ConfigError("row index out of range");
        qt::RowOutcome o;
        std::string line;
        if (table == "pi") { o = qt::run_pi_row(idx); line = qt::describe_pi_row(o); }
        else if (table == "adiabatic") { o = qt::run_adiabatic_row(idx); line = qt::describe_adiabatic_row(o); }
        else { o = qt::run_coherence_row(idx); line = qt::describe_coherence_row(o); }
        worst = std::max(worst, std::fabs(o.delta));
        std::cout << line << '\n';
    }
    std::cout << "max |delta| = " << worst << std::endl;
    return 0;
}

int run_analytic_example(const std::string& range) {
    const auto r = parse_range(range);
    std::cout << "x,p_closed_form,p_quadrature\n";
    std::cout.precision(12);
    for (double x = r[0]; x <= r[1] + 1e-12; x += r[2]) {
        const auto [pump, coupling] = qt::make_sincos_pair(x, 1.0);
        const auto [t0, t1] = qt::sincos_window(1.0);
        std::cout << x << ',' << qt::analytic_example_p(x) << ','
                  << qt::failure_integral(pump, coupling, t0, t1) << '\n';
    }
    return 0;
}

int run_analytic_failure(const std::string& p1_text, const std::string& p2_text,
                         const std::string& window_text) {
    const qt::PulseSpec p1 = qt::parse_pulse(p1_text);
    const qt::PulseSpec p2 = qt::parse_pulse(p2_text);
    double t0, t1;
    if (!window_text.empty()) std::tie(t0, t1) = parse_window(window_text);
    else std::tie(t0, t1) = qt::lambda3_window(p1, p2);
    const double p = qt::failure_integral(p1, p2, t0, t1);
    const double mid = 0.5 * (t0 + t1);
    const double half = 0.5 * (t1 - t0);
    const double p2x = qt::failure_integral(p1, p2, mid - 2.0 * half, mid + 2.0 * half);
    json out;
    out["p"] = p;
    out["window"] = {t0, t1};
    out["window_doubled_delta"] = std::fabs(p2x - p);
    std::cout << out.dump(2) << std::endl;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Population and coherence transfer simulations for atom + cavity systems"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run one transfer simulation");
    simulate->add_option("--system", sim.system, "bloch2|lambda3|cavity4|twoatom")->required();
    simulate->add_option("--pulse1", sim.pulse1, "pulse spec shape:amp=..,width=..[,center=..]");
    simulate->add_option("--pulse2", sim.pulse2, "second pulse spec");
    simulate->add_option("--window", sim.window, "integration window t0:t1");
    simulate->add_option("--protocol", sim.protocol, "cavity4: adiabatic|pi");
    simulate->add_option("--model", sim.model, "twoatom: amp|density|sym-anti");
    simulate->add_option("--detuning", sim.detuning, "bloch2 detuning");
    simulate->add_option("--delta1", sim.delta1, "lambda3 one-photon detuning");
    simulate->add_option("--delta2", sim.delta2, "lambda3 two-photon detuning");
    simulate->add_option("--delay", sim.delay, "protocol pulse delay");
    simulate->add_option("--gamma", sim.gamma, "spontaneous emission rate");
    simulate->add_option("--kappa", sim.kappa, "cavity decay rate");
    simulate->add_option("--g", sim.g, "two-atom cavity coupling");
    simulate->add_option("--rtol", sim.rtol, "integrator relative tolerance");
    simulate->add_option("--atol", sim.atol, "integrator absolute tolerance");
    simulate->add_option("--sample-every", sim.sample_every,
                         "record trajectory samples at this cadence");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Grid sweep of log10 failure probability");
    sweep_cmd->add_option("--system", sweep.base.system, "cavity4|twoatom|lambda3")->required();
    sweep_cmd->add_option("--protocol", sweep.base.protocol,
                          "cavity4: adiabatic|pi, twoatom: density|amp");
    sweep_cmd->add_option("--pulse1", sweep.pulse1, "pulse spec")->required();
    sweep_cmd->add_option("--pulse2", sweep.pulse2, "pulse spec")->required();
    sweep_cmd->add_option("--delay", sweep.base.delay, "base delay");
    sweep_cmd->add_option("--gamma", sweep.base.gamma, "base gamma");
    sweep_cmd->add_option("--kappa", sweep.base.kappa, "base kappa");
    sweep_cmd->add_option("--g", sweep.base.g, "base two-atom coupling");
    sweep_cmd->add_option("--axis", sweep.axis_texts, "axis name=min:max:step (1 or 2)");
    sweep_cmd->add_option("--out", sweep.out_path, "output file path");
    sweep_cmd->add_option("--format", sweep.format, "csv|json");
    sweep_cmd->add_flag("--refine", sweep.refine, "local refinement around the minimum");
    sweep_cmd->add_option("--threads", sweep.threads, "worker threads (default: env/hardware)");
    sweep_cmd->add_option("--rtol", sweep.rtol, "integrator relative tolerance");
    sweep_cmd->add_option("--atol", sweep.atol, "integrator absolute tolerance");

    auto* tables = app.add_subcommand("tables", "Reference-table tools");
    std::string table_name;
    std::vector<int> table_rows;
    auto* reproduce = tables->add_subcommand("reproduce", "Re-run reference table rows");
    reproduce->add_option("--table", table_name, "pi|adiabatic|coherence")->required();
    reproduce->add_option("--rows", table_rows, "row indices (default: all)")->delimiter(',');

    auto* analytic = app.add_subcommand("analytic", "Closed-form failure-probability tools");
    std::string range_text;
    auto* example = analytic->add_subcommand("example", "Windowed sin/cos example vs closed form");
    example->add_option("--range", range_text, "x0:x1:dx")->required();
    std::string fp1, fp2, fwindow;
    auto* failure = analytic->add_subcommand("failure", "Failure integral for a pulse pair");
    failure->add_option("--pulse1", fp1, "pulse spec")->required();
    failure->add_option("--pulse2", fp2, "pulse spec")->required();
    failure->add_option("--window", fwindow, "integration window t0:t1");

    // --config: JSON file whose keys mirror the long flag names.
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
            break;
        }
    }

    try {
        if (!config_path.empty()) {
            std::ifstream file(config_path);
            if (!file) throw qt::ConfigError("cannot read config file '" + config_path + "'");
            json cfg;
            file >> cfg;
            args = inject_config(std::move(args), cfg);
        }
        take_last_everywhere(&app);
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (simulate->parsed()) return run_simulate(sim);
        if (sweep_cmd->parsed()) return run_sweep_cmd(sweep);
        if (tables->parsed() && reproduce->parsed()) return run_tables(table_name, table_rows);
        if (analytic->parsed() && example->parsed()) return run_analytic_example(range_text);
        if (analytic->parsed() && failure->parsed()) return run_analytic_failure(fp1, fp2, fwindow);
        throw qt::ConfigError("missing subcommand");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const qt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const qt::DomainError& e) {
        std::cerr << "config error: " << e.what() << std::endl;
        return 2;
    } catch (const qt::IntegrationError& e) {
        std::cerr << "integration error: " << e.what() << std::endl;
        return 3;
    } catch (const qt::QuadratureError& e) {
        std::cerr << "integration error: " << e.what() << std::endl;
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    }
}
