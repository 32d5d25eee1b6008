#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qtransfer/integrator.hpp"
#include "qtransfer/pulse.hpp"

namespace qtransfer {

// One swept parameter. Grid points are min, min + step, ..., capped at max
// (inclusive up to floating-point slack).
struct SweepAxis {
    std::string name; // amp1|width1|amp2|width2|delay|gamma|kappa|g
    double min = 0.0;
    double max = 0.0;
    double step = 0.0;

    void validate() const;
    int cells() const;
    double value(int i) const { return min + i * step; }
};

// Base configuration a sweep perturbs. pulse1/pulse2 play the per-system
// roles: cavity4 (Omega, g-pulse), twoatom (Omega_1, Omega_2),
// lambda3 (pump, Stokes).
struct SweepBase {
    std::string system = "cavity4";   // cavity4|twoatom|lambda3
    std::string protocol = "adiabatic"; // cavity4: adiabatic|pi; twoatom: density|amp; lambda3: stirap
    PulseSpec pulse1;
    PulseSpec pulse2;
    double delay = 0.0;
    double gamma = 0.0;
    double kappa = 0.0;
    double g = 1.0;
    IntegratorConfig icfg;

    void validate() const;
};

// Evaluates log10 p for the base configuration with the axis values applied.
double evaluate_cell(const SweepBase& base, const std::vector<SweepAxis>& axes,
                     const std::vector<int>& cell);

struct SweepMeta {
    std::string system;
    std::string protocol;
    std::string base_pulse1;
    std::string base_pulse2;
    double delay = 0.0, gamma = 0.0, kappa = 0.0, g = 1.0;
    std::string tool_version;
};

struct SweepSurface {
    std::vector<SweepAxis> axes; // 1 or 2
    std::vector<double> values; // row-major log10 p; NaN for failed cells
    std::vector<int> failures;  // flat indices of failed cells
    int argmin_index = -1;      // -1 when every cell failed
    double argmin_value = 0.0;
    std::vector<double> argmin_params;
    SweepMeta meta;

    int cell_count() const;
    std::vector<int> unflatten(int flat) const;
};

SweepSurface run_sweep(const SweepBase& base, const std::vector<SweepAxis>& axes, int threads);

struct RefineSpec {
    int passes = 3;
    double factor = 10.0; // step shrink per pass
    int halo = 2;         // cells kept around the current best
};

struct BestCell {
    double value = 0.0;
    std::vector<double> params;
    int flat_index = -1; // index in the surface it was found on (-1 after refinement)
};

// Argmin of the surface; ties break toward the smallest flat index. With a
// refinement spec (and the base it was produced from), runs nested sweeps at
// finer steps around the best cell. Throws DomainError when all cells failed.
BestCell find_minimum(const SweepSurface& surface, std::optional<RefineSpec> refine = {},
                      const SweepBase* base = nullptr, int threads = 1);

void write_surface_csv(const SweepSurface& s, std::ostream& out);
void write_surface_json(const SweepSurface& s, std::ostream& out);
SweepSurface read_surface_json(std::istream& in);

int default_thread_count(); // QTRANSFER_THREADS env var, else hardware parallelism

inline constexpr const char* kToolVersion = "qtransfer 1.0.0";

} // namespace qtransfer
