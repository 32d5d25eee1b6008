#include "qtransfer/sweep.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "qtransfer/cavity4.hpp"
#include "qtransfer/lambda3.hpp"
#include "qtransfer/twoatom.hpp"

namespace qtransfer {

namespace {

const std::vector<std::string> kAxisNames = {"amp1", "width1", "amp2", "width2",
                                             "delay", "gamma", "kappa", "g"};

void apply_axis(SweepBase& base, const std::string& name, double v) {
    if (name == "amp1") base.pulse1.amplitude = v;
    else if (name == "width1") base.pulse1.width = v;
    else if (name == "amp2") base.pulse2.amplitude = v;
    else if (name == "width2") base.pulse2.width = v;
    else if (name == "delay") base.delay = v;
    else if (name == "gamma") base.gamma = v;
    else if (name == "kappa") base.kappa = v;
    else if (name == "g") base.g = v;
    else throw ConfigError("unknown sweep axis '" + name + "'");
}

double evaluate_base(const SweepBase& b) {
    if (b.system == "cavity4") {
        const auto cfg = b.protocol == "pi"
                             ? make_pi_config(b.pulse1, b.pulse2, b.delay, b.gamma, b.kappa)
                             : make_adiabatic_config(b.pulse1, b.pulse2, b.delay, b.gamma, b.kappa);
        return run_cavity4_transfer(cfg, b.icfg).log10_p;
    }
    if (b.system == "twoatom") {
        const auto model =
            b.protocol == "amp" ? CoherenceModel::Amplitudes : CoherenceModel::Density;
        return coherence_transfer(model, b.pulse1, b.pulse2, b.delay, b.g, b.gamma, b.icfg)
            .log10_p;
    }
    if (b.system == "lambda3") {
        PulseSpec pump = b.pulse1.with_center(b.delay);
        PulseSpec stokes = b.pulse2.with_center(0.0);
        const auto [t0, t1] = lambda3_window(pump, stokes);
        return stirap_transfer(pump, stokes, 0.0, 0.0, t0, t1, b.icfg).log10_p;
    }
    throw ConfigError("unknown sweep system '" + b.system + "'");
}

} // namespace

void SweepAxis::validate() const {
    bool known = false;
    for (const auto& n : kAxisNames) known = known || n == name;
    if (!known) throw ConfigError("unknown sweep axis '" + name + "'");
    if (!(min < max)) throw ConfigError("sweep axis needs min < max");
    if (!(step > 0.0)) throw ConfigError("sweep axis needs step > 0");
    if ((max - min) / step > 4000.0) throw ConfigError("sweep axis exceeds 4000 cells");
}

int SweepAxis::cells() const {
    return static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
}

void SweepBase::validate() const {
    pulse1.validate();
    pulse2.validate();
    if (system != "cavity4" && system != "twoatom" && system != "lambda3")
        throw ConfigError("sweep system must be cavity4, twoatom, or lambda3");
    if (system == "cavity4" && protocol != "adiabatic" && protocol != "pi")
        throw ConfigError("cavity4 protocol must be adiabatic or pi");
    if (system == "twoatom" && protocol != "density" && protocol != "amp")
        throw ConfigError("twoatom protocol must be density or amp");
    if (gamma < 0.0 || kappa < 0.0) throw ConfigError("gamma and kappa must be >= 0");
}

double evaluate_cell(const SweepBase& base, const std::vector<SweepAxis>& axes,
                     const std::vector<int>& cell) {
    SweepBase b = base;
    for (std::size_t k = 0; k < axes.size(); ++k) apply_axis(b, axes[k].name, axes[k].value(cell[k]));
    return evaluate_base(b);
}

int SweepSurface::cell_count() const {
    int n = 1;
    for (const auto& a : axes) n *= a.cells();
    return n;
}

std::vector<int> SweepSurface::unflatten(int flat) const {
    if (axes.size() == 1) return {flat};
    const int n2 = axes[1].cells();
    return {flat / n2, flat % n2};
}

SweepSurface run_sweep(const SweepBase& base, const std::vector<SweepAxis>& axes, int threads) {
    base.validate();
    if (axes.empty() || axes.size() > 2) throw ConfigError("sweep needs 1 or 2 axes");
    for (const auto& a : axes) a.validate();
    if (threads < 1) throw ConfigError("thread count must be >= 1");

    SweepSurface s;
    s.axes = axes;
    s.meta = {base.system,
              base.protocol,
              format_pulse(base.pulse1),
              format_pulse(base.pulse2),
              base.delay,
              base.gamma,
              base.kappa,
              base.g,
              kToolVersion};
    const int total = s.cell_count();
    s.values.assign(static_cast<std::size_t>(total), std::numeric_limits<double>::quiet_NaN());
    std::vector<char> failed(static_cast<std::size_t>(total), 0);

    // Cells are independent tasks; each writes only its own slot, so the
    // merged surface is identical for any thread count.
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= total) return;
            try {
                s.values[static_cast<std::size_t>(i)] = evaluate_cell(base, axes, s.unflatten(i));
            } catch (const std::exception&) {
                failed[static_cast<std::size_t>(i)] = 1;
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (int i = 0; i < total; ++i) {
        if (failed[static_cast<std::size_t>(i)]) s.failures.push_back(i);
        const double v = s.values[static_cast<std::size_t>(i)];
        if (std::isfinite(v) && (s.argmin_index < 0 || v < s.argmin_value)) {
            s.argmin_index = i;
            s.argmin_value = v;
        }
    }
    if (s.argmin_index >= 0) {
        const auto cell = s.unflatten(s.argmin_index);
        for (std::size_t k = 0; k < axes.size(); ++k)
            s.argmin_params.push_back(axes[k].value(cell[k]));
    }
    return s;
}

BestCell find_minimum(const SweepSurface& surface, std::optional<RefineSpec> refine,
                      const SweepBase* base, int threads) {
    if (surface.argmin_index < 0) throw DomainError("find_minimum: every cell failed");
    BestCell best{surface.argmin_value, surface.argmin_params, surface.argmin_index};
    if (!refine) return best;
    if (!base) throw ConfigError("find_minimum: refinement needs the sweep base");

    std::vector<SweepAxis> axes = surface.axes;
    std::vector<double> center = best.params;
    for (int pass = 0; pass < refine->passes; ++pass) {
        std::vector<SweepAxis> fine;
        for (std::size_t k = 0; k < axes.size(); ++k) {
            SweepAxis a = axes[k];
            const double step = a.step / refine->factor;
            const double lo = std::max(a.min, center[k] - refine->halo * a.step);
            const double hi = std::min(a.max, center[k] + refine->halo * a.step);
            fine.push_back({a.name, lo, hi, step});
        }
        const SweepSurface child = run_sweep(*base, fine, threads);
        if (child.argmin_index >= 0 && child.argmin_value < best.value) {
            best.value = child.argmin_value;
            best.params = child.argmin_params;
            best.flat_index = -1;
            center = child.argmin_params;
        }
        axes = fine;
    }
    return best;
}

void write_surface_csv(const SweepSurface& s, std::ostream& out) {
    out << std::setprecision(9);
    if (s.axes.size() == 1) {
        out << s.axes[0].name << ",log10_p\n";
        for (int i = 0; i < s.cell_count(); ++i) {
            const double v = s.values[static_cast<std::size_t>(i)];
            out << s.axes[0].value(i) << ',';
            if (std::isfinite(v)) out << v;
            else out << "nan";
            out << '\n';
        }
        return;
    }
    out << s.axes[0].name << ',' << s.axes[1].name << ",log10_p\n";
    for (int i = 0; i < s.cell_count(); ++i) {
        const auto cell = s.unflatten(i);
        const double v = s.values[static_cast<std::size_t>(i)];
        out << s.axes[0].value(cell[0]) << ',' << s.axes[1].value(cell[1]) << ',';
        if (std::isfinite(v)) out << v;
        else out << "nan";
        out << '\n';
    }
}

namespace {

nlohmann::json axis_to_json(const SweepAxis& a) {
    return {{"name", a.name}, {"min", a.min}, {"max", a.max}, {"step", a.step}};
}

SweepAxis axis_from_json(const nlohmann::json& j) {
    return {j.at("name").get<std::string>(), j.at("min").get<double>(), j.at("max").get<double>(),
            j.at("step").get<double>()};
}

} // namespace

void write_surface_json(const SweepSurface& s, std::ostream& out) {
    nlohmann::json j;
    j["axes"] = nlohmann::json::array();
    for (const auto& a : s.axes) j["axes"].push_back(axis_to_json(a));
    auto& vals = j["values"] = nlohmann::json::array();
    for (double v : s.values) {
        if (std::isfinite(v)) vals.push_back(v);
        else vals.push_back(nullptr); // JSON has no NaN
    }
    j["failures"] = s.failures;
    if (s.argmin_index >= 0) {
        j["argmin"] = {{"index", s.argmin_index},
                       {"value", s.argmin_value},
                       {"params", s.argmin_params}};
    } else {
        j["argmin"] = nullptr;
    }
    j["metadata"] = {{"system", s.meta.system},
                     {"base_config",
                      {{"protocol", s.meta.protocol},
                       {"pulse1", s.meta.base_pulse1},
                       {"pulse2", s.meta.base_pulse2},
                       {"delay", s.meta.delay},
                       {"gamma", s.meta.gamma},
                       {"kappa", s.meta.kappa},
                       {"g", s.meta.g}}},
                     {"tool_version", s.meta.tool_version}};
    out << j.dump(2) << '\n';
}

SweepSurface read_surface_json(std::istream& in) {
    nlohmann::json j;
    in >> j;
    SweepSurface s;
    for (const auto& a : j.at("axes")) s.axes.push_back(axis_from_json(a));
    for (const auto& v : j.at("values")) {
        if (v.is_null()) s.values.push_back(std::numeric_limits<double>::quiet_NaN());
        else s.values.push_back(v.get<double>());
    }
    for (const auto& f : j.at("failures")) s.failures.push_back(f.get<int>());
    if (!j.at("argmin").is_null()) {
        s.argmin_index = j["argmin"].at("index").get<int>();
        s.argmin_value = j["argmin"].at("value").get<double>();
        s.argmin_params = j["argmin"].at("params").get<std::vector<double>>();
    }
    const auto& meta = j.at("metadata");
    s.meta.system = meta.at("system").get<std::string>();
    const auto& bc = meta.at("base_config");
    s.meta.protocol = bc.at("protocol").get<std::string>();
    s.meta.base_pulse1 = bc.at("pulse1").get<std::string>();
    s.meta.base_pulse2 = bc.at("pulse2").get<std::string>();
    s.meta.delay = bc.at("delay").get<double>();
    s.meta.gamma = bc.at("gamma").get<double>();
    s.meta.kappa = bc.at("kappa").get<double>();
    s.meta.g = bc.at("g").get<double>();
    s.meta.tool_version = meta.at("tool_version").get<std::string>();
    return s;
}

int default_thread_count() {
    if (const char* env = std::getenv("QTRANSFER_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace qtransfer
