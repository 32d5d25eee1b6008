#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qtransfer {

// Outcome of one protocol run: failure probability, final population
// breakdown, conservation diagnostics, and optional trajectory samples.
struct TransferResult {
    double p = 1.0;
    double log10_p = 0.0;
    std::vector<std::pair<std::string, double>> populations;
    double trace_drift = 0.0;   // |final trace (or norm^2) - expected|
    double peak_excited = 0.0;  // max excited-state population seen
    double window_t0 = 0.0;
    double window_t1 = 0.0;
    double window_doubled_delta = 0.0; // |log10 p| change on the last window doubling, when checked
    bool endpoint_warning = false;     // an envelope exceeded 1e-6 * amplitude at a window edge
    std::int64_t accepted_steps = 0;
    std::int64_t rejected_steps = 0;
    std::vector<double> sample_times;
    std::vector<std::vector<double>> samples;

    void set_p(double value) {
        p = value;
        log10_p = std::log10(std::max(value, 1e-300));
    }
};

} // namespace qtransfer
