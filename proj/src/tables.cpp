#include "qtransfer/tables.hpp"

#include <array>
#include <chrono>
#include <sstream>

#include "qtransfer/cavity4.hpp"
#include "qtransfer/twoatom.hpp"

namespace qtransfer {

namespace {

using PS = PulseShape;

constexpr std::array<Cavity4Row, 15> kPiTable = {{
    {PS::Gaussian, 0.01, 2.14, 0.29, 1.00, 0.63, 1.26, -2.05},
    {PS::Gaussian, 0.02, 2.15, 0.29, 1.00, 0.63, 1.16, -1.78},
    {PS::Gaussian, 0.05, 2.03, 0.31, 1.00, 0.63, 1.01, -1.44},
    {PS::Gaussian, 0.10, 2.11, 0.30, 1.00, 0.63, 0.89, -1.19},
    {PS::Gaussian, 0.20, 2.18, 0.29, 1.00, 0.63, 0.75, -0.95},
    {PS::Sech, 0.01, 1.84, 0.26, 1.00, 0.50, 1.52, -1.94},
    {PS::Sech, 0.02, 2.01, 0.25, 1.00, 0.50, 1.35, -1.69},
    {PS::Sech, 0.05, 2.16, 0.23, 1.00, 0.50, 1.11, -1.37},
    {PS::Sech, 0.10, 2.26, 0.22, 1.00, 0.50, 0.94, -1.13},
    {PS::Sech, 0.20, 2.43, 0.21, 1.00, 0.50, 0.77, -0.91},
    {PS::Lorentzian, 0.01, 5.71, 0.09, 1.00, 0.50, 2.28, -1.63},
    {PS::Lorentzian, 0.02, 5.53, 0.09, 1.00, 0.50, 1.80, -1.43},
    {PS::Lorentzian, 0.05, 5.56, 0.09, 1.00, 0.50, 1.32, -1.16},
    {PS::Lorentzian, 0.10, 5.80, 0.09, 1.00, 0.50, 1.04, -0.96},
    {PS::Lorentzian, 0.20, 6.28, 0.08, 1.00, 0.50, 0.82, -0.77},
}};

constexpr std::array<Cavity4Row, 19> kAdiabaticTable = {{
    {PS::Gaussian, 0.00, 2.00, 1.00, 2.00, 1.00, 1.31, -4.88},
    {PS::Gaussian, 0.00, 4.00, 1.00, 19.20, 1.00, 1.90, -4.53},
    {PS::Gaussian, 0.00, 6.00, 1.00, 5.70, 1.00, 1.50, -6.83},
    {PS::Gaussian, 0.00, 6.70, 1.50, 2.00, 1.00, 2.72, -5.67},
    {PS::Gaussian, 0.10, 3.39, 3.23, 1.00, 2.45, 5.85, -1.99},
    {PS::Gaussian, 0.10, 2.75, 3.09, 1.00, 2.48, 5.29, -2.00},
    {PS::Gaussian, 0.20, 3.30, 3.30, 1.00, 2.50, 5.90, -1.73},
    {PS::Gaussian, 0.20, 2.40, 3.30, 1.00, 3.00, 5.38, -1.80},
    {PS::Gaussian, 0.20, 2.30, 4.20, 1.00, 4.48, 6.62, -1.96},
    {PS::Gaussian, 0.20, 2.10, 4.60, 1.00, 5.00, 7.09, -2.01},
    {PS::Sech, 0.00, 2.00, 1.00, 2.00, 1.00, 0.80, -7.79},
    {PS::Sech, 0.10, 2.60, 1.40, 1.00, 1.20, 2.70, -1.71},
    {PS::Sech, 0.10, 5.00, 1.50, 1.00, 2.00, 3.80, -1.90},
    {PS::Sech, 0.10, 4.50, 1.70, 1.00, 2.40, 4.10, -1.89},
    {PS::Sech, 0.10, 4.20, 1.80, 1.00, 2.60, 4.30, -1.86},
    {PS::Sech, 0.10, 6.30, 3.40, 1.00, 4.01, 12.01, -2.00},
    {PS::Sech, 0.20, 14.70, 5.00, 1.00, 7.00, 21.40, -2.06},
    {PS::Lorentzian, 0.00, 2.00, 1.00, 2.00, 1.00, 0.32, -4.46},
    {PS::Lorentzian, 0.10, 9.20, 0.60, 1.00, 2.00, 2.29, -1.05},
}};

constexpr std::array<CoherenceRow, 15> kCoherenceTable = {{
    {PS::Gaussian, 0.00, 2.60, 10.00, 1.00, 1.00, 1.00, 6.50, -0.68},
    {PS::Gaussian, 0.00, 14.40, 10.10, 1.00, 4.00, 1.00, 25.29, -1.54},
    {PS::Gaussian, 0.00, 0.70, 7.00, 1.00, 2.00, 2.00, 3.48, -2.19},
    {PS::Gaussian, 0.01, 1.10, 4.50, 1.00, 1.00, 1.00, 0.00, -0.61},
    {PS::Gaussian, 0.01, 15.00, 10.20, 1.00, 4.00, 1.00, 25.70, -1.40},
    {PS::Gaussian, 0.01, 14.80, 13.60, 1.00, 7.00, 1.00, 36.10, -2.13},
    {PS::Gaussian, 0.10, 2.50, 7.30, 1.00, 4.00, 2.00, 11.69, -1.09},
    {PS::Gaussian, 0.10, 2.00, 6.80, 1.00, 4.00, 4.00, 9.80, -1.10},
    {PS::Gaussian, 0.10, 1.90, 6.70, 1.00, 4.00, 6.00, 9.40, -1.10},
    {PS::Gaussian, 0.10, 25.00, 30.00, 1.00, 30.00, 1.00, 80.50, -1.76},
    {PS::Sech, 0.00, 0.90, 2.30, 1.00, 2.00, 1.00, 0.00, -1.14},
    {PS::Sech, 0.00, 3.80, 4.40, 1.00, 5.00, 1.00, 11.51, -3.71},
    {PS::Sech, 0.01, 3.80, 4.40, 1.00, 5.00, 1.00, 11.48, -2.06},
    {PS::Sech, 0.02, 5.20, 4.10, 1.00, 5.00, 2.00, 11.00, -1.85},
    {PS::Sech, 0.02, 6.90, 4.10, 1.00, 5.00, 3.00, 11.80, -1.85},
}};

IntegratorConfig table_icfg(double rtol, double atol) {
    IntegratorConfig icfg;
    icfg.rtol = rtol;
    icfg.atol = atol;
    return icfg;
}

template <class Runner>
RowOutcome timed_row(int index, double reference, Runner&& run) {
    const auto start = std::chrono::steady_clock::now();
    const double computed = run();
    const auto stop = std::chrono::steady_clock::now();
    RowOutcome o;
    o.index = index;
    o.reference = reference;
    o.computed = computed;
    o.delta = computed - reference;
    o.seconds = std::chrono::duration<double>(stop - start).count();
    return o;
}

std::string describe_cavity_row(const Cavity4Row& r, const RowOutcome& o) {
    std::ostringstream s;
    s << "row " << o.index << " [" << shape_name(r.shape) << " G=" << r.gamma
      << " W=" << r.omega0 << " s=" << r.sigma << " g=" << r.g0 << " sg=" << r.sigma_g
      << " dt=" << r.delay << "] ref " << o.reference << "  computed " << o.computed
      << "  delta " << o.delta << "  (" << o.seconds << " s)";
    return s.str();
}

} // namespace

std::span<const Cavity4Row> pi_pulse_table() { return kPiTable; }
std::span<const Cavity4Row> adiabatic_table() { return kAdiabaticTable; }
std::span<const CoherenceRow> coherence_table() { return kCoherenceTable; }

RowOutcome run_pi_row(int index, double rtol, double atol) {
    const Cavity4Row& r = kPiTable.at(static_cast<std::size_t>(index));
    return timed_row(index, r.log10_p, [&] {
        const PulseSpec omega{r.shape, r.omega0, r.sigma, 0.0};
        const PulseSpec g{r.shape, r.g0, r.sigma_g, 0.0};
        const auto cfg = make_pi_config(omega, g, r.delay, r.gamma);
        return pi_pulse_transfer(cfg, table_icfg(rtol, atol)).log10_p;
    });
}

RowOutcome run_adiabatic_row(int index, double rtol, double atol) {
    const Cavity4Row& r = kAdiabaticTable.at(static_cast<std::size_t>(index));
    return timed_row(index, r.log10_p, [&] {
        const PulseSpec omega{r.shape, r.omega0, r.sigma, 0.0};
        const PulseSpec g{r.shape, r.g0, r.sigma_g, 0.0};
        const auto cfg = make_adiabatic_config(omega, g, r.delay, r.gamma);
        return adiabatic_transfer(cfg, table_icfg(rtol, atol)).log10_p;
    });
}

RowOutcome run_coherence_row(int index, double rtol, double atol) {
    const CoherenceRow& r = kCoherenceTable.at(static_cast<std::size_t>(index));
    return timed_row(index, r.log10_p, [&] {
        const PulseSpec omega1{r.shape, r.omega10, r.sigma1, 0.0};
        const PulseSpec omega2{r.shape, r.omega20, r.sigma2, 0.0};
        return coherence_transfer(CoherenceModel::Density, omega1, omega2, r.delay, r.g, r.gamma,
                                  table_icfg(rtol, atol))
            .log10_p;
    });
}

std::string describe_pi_row(const RowOutcome& o) {
    return describe_cavity_row(kPiTable.at(static_cast<std::size_t>(o.index)), o);
}

std::string describe_adiabatic_row(const RowOutcome& o) {
    return describe_cavity_row(kAdiabaticTable.at(static_cast<std::size_t>(o.index)), o);
}

std::string describe_coherence_row(const RowOutcome& o) {
    const CoherenceRow& r = kCoherenceTable.at(static_cast<std::size_t>(o.index));
    std::ostringstream s;
    s << "row " << o.index << " [" << shape_name(r.shape) << " G=" << r.gamma
      << " W1=" << r.omega10 << " s1=" << r.sigma1 << " W2=" << r.omega20 << " s2=" << r.sigma2
      << " g=" << r.g << " dt=" << r.delay << "] ref " << o.reference << "  computed "
      << o.computed << "  delta " << o.delta << "  (" << o.seconds << " s)";
    return s.str();
}

} // namespace qtransfer
